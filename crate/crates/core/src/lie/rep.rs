//! Matrix representations: a dimension and one matrix per generator name.

use std::collections::BTreeMap;

use crate::exact::{ExactMatrix, MatrixError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub name: String,
    dim: usize,
    images: BTreeMap<String, ExactMatrix>,
}

impl Representation {
    pub fn new(name: impl Into<String>, dim: usize) -> Self {
        Representation { name: name.into(), dim, images: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn insert(&mut self, gen: impl Into<String>, m: ExactMatrix) {
        assert_eq!(m.dim(), self.dim, "image dim differs from representation dim");
        self.images.insert(gen.into(), m);
    }

    pub fn get(&self, gen: &str) -> Option<&ExactMatrix> {
        self.images.get(gen)
    }

    pub fn generators(&self) -> impl Iterator<Item = &str> {
        self.images.keys().map(String::as_str)
    }

    pub fn images(&self) -> &BTreeMap<String, ExactMatrix> {
        &self.images
    }

    /// Contragredient representation `g -> -g^T`.
    pub fn dual(&self) -> Representation {
        Representation {
            name: format!("{}*", self.name),
            dim: self.dim,
            images: self.images.iter().map(|(k, m)| (k.clone(), m.transpose().neg())).collect(),
        }
    }

    /// Restriction to the listed generators.
    pub fn restrict<'a>(&self, gens: impl IntoIterator<Item = &'a str>) -> Representation {
        let mut out = Representation::new(self.name.clone(), self.dim);
        for g in gens {
            if let Some(m) = self.images.get(g) {
                out.images.insert(g.to_string(), m.clone());
            }
        }
        out
    }

    /// Image of `[a, b]`.
    pub fn bracket(&self, a: &str, b: &str) -> Option<Result<ExactMatrix, MatrixError>> {
        Some(self.get(a)?.commutator(self.get(b)?))
    }
}
