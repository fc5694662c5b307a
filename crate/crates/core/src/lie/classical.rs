//! Defining representations of sl(n+1), so(2n+1), sp(2n) and so(2n).
//!
//! Orthogonal algebras are written in antisymmetric matrices
//! `(M_ik)_ab = d_ia d_kb - d_ib d_ka`, with the Cartan element of `e_a`
//! carried by the index pair `(2a-1, 2a)` and the short roots by the last
//! index. Symplectic matrices preserve `J = [[0, I], [-I, 0]]`.

use serde::{Deserialize, Serialize};

use super::rep::Representation;
use super::roots::{all_roots, is_root, RootVector, Series};
use crate::chain::levels::{check_rank, default_levels, LevelRoots, RootError};
use crate::exact::{ExactMatrix, MatrixError, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("[{a}, {b}] is not a multiple of {target}")]
    NotProportional { a: String, b: String, target: String },
    #[error("weight check failed for {0}")]
    Convention(String),
    #[error("generator span is not closed under brackets: [{0}, {1}]")]
    NotClosed(String, String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    /// Each `L_{l''}` of the default chain rescaled so `[L_{l'}, L_{l''}] = E_{l0}`.
    #[default]
    ChainNormalized,
    /// Plain matrix units / antisymmetric combinations.
    Raw,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraDescriptor {
    pub series: Series,
    pub rank: usize,
    #[serde(default)]
    pub basis: Basis,
}

impl AlgebraDescriptor {
    pub fn new(series: Series, rank: usize) -> Self {
        AlgebraDescriptor { series, rank, basis: Basis::default() }
    }

    pub fn raw(series: Series, rank: usize) -> Self {
        AlgebraDescriptor { series, rank, basis: Basis::Raw }
    }
}

pub fn root_name(v: &RootVector) -> String {
    format!("E_{{{}}}", v.label())
}

pub fn cartan_name(v: &RootVector) -> String {
    format!("H_{{{}}}", v.label())
}

#[derive(Debug, Clone)]
pub struct ClassicalAlgebra {
    desc: AlgebraDescriptor,
    roots: Vec<RootVector>,
    cartan_basis: Vec<RootVector>,
    rep: Representation,
}

fn rotation(n: usize, i: usize, k: usize) -> ExactMatrix {
    ExactMatrix::from_entries(n, [(i - 1, k - 1, Scalar::ONE), (k - 1, i - 1, Scalar::from_int(-1))])
}

fn lin(n: usize, terms: &[(Scalar, ExactMatrix)]) -> ExactMatrix {
    terms.iter().fold(ExactMatrix::zeros(n), |acc, (c, m)| acc.add(&m.scale(c)).expect("same dim"))
}

fn unit1(n: usize, i: usize, j: usize) -> ExactMatrix {
    ExactMatrix::unit(n, i - 1, j - 1)
}

impl ClassicalAlgebra {
    pub fn descriptor(&self) -> &AlgebraDescriptor {
        &self.desc
    }

    pub fn series(&self) -> Series {
        self.desc.series
    }

    pub fn rank(&self) -> usize {
        self.desc.rank
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn coords(&self) -> usize {
        self.desc.series.coords(self.desc.rank)
    }

    pub fn name(&self) -> String {
        self.desc.series.algebra_name(self.desc.rank)
    }

    pub fn rep(&self) -> &Representation {
        &self.rep
    }

    pub fn roots(&self) -> &[RootVector] {
        &self.roots
    }

    pub fn is_root(&self, v: &RootVector) -> bool {
        is_root(self.desc.series, self.desc.rank, v)
    }

    pub fn cartan_basis(&self) -> &[RootVector] {
        &self.cartan_basis
    }

    /// Matrix of a generator by name.
    pub fn matrix(&self, name: &str) -> Result<&ExactMatrix, LieError> {
        self.rep.get(name).ok_or_else(|| LieError::UnknownGenerator(name.to_string()))
    }

    pub fn root_matrix(&self, v: &RootVector) -> Result<&ExactMatrix, LieError> {
        self.matrix(&root_name(v))
    }

    /// Names of all root vectors followed by the Cartan basis.
    pub fn basis_names(&self) -> Vec<String> {
        self.roots.iter().map(root_name).chain(self.cartan_basis.iter().map(cartan_name)).collect()
    }

    /// `k` with `[E_a, E_b] = k E_target`.
    pub fn bracket_coefficient(&self, a: &str, b: &str, target: &str) -> Result<Scalar, LieError> {
        let c = self.matrix(a)?.commutator(self.matrix(b)?)?;
        proportionality(&c, self.matrix(target)?).ok_or_else(|| LieError::NotProportional {
            a: a.into(),
            b: b.into(),
            target: target.into(),
        })
    }

    /// Coefficient `1/k` with `[L_{l'}, L_{l''}] = k E_{l0}`, the weight of
    /// the pair in an extension factor.
    pub fn pair_coefficient(&self, l1: &RootVector, l2: &RootVector) -> Result<Scalar, LieError> {
        let l0 = l1.add(l2);
        let k = self.bracket_coefficient(&root_name(l1), &root_name(l2), &root_name(&l0))?;
        Ok(k.recip().expect("nonzero bracket"))
    }

    /// Registers `H_v` for an arbitrary nonzero vector `v` of the e-span.
    pub fn ensure_cartan(&mut self, v: &RootVector) {
        let name = cartan_name(v);
        if self.rep.get(&name).is_none() {
            let m = cartan_dual(self.desc.series, self.desc.rank, v);
            self.rep.insert(name, m);
        }
    }
}

/// `c` with `m = c t`, if any.
pub fn proportionality(m: &ExactMatrix, t: &ExactMatrix) -> Option<Scalar> {
    let w = t.witness()?;
    let c = m.get(w.row, w.col).div(&w.value)?;
    (*m == t.scale(&c)).then_some(c)
}

/// `h_a`: the Cartan element acting on `E_v` by `v_a`.
fn cartan_unit(series: Series, rank: usize, a: usize) -> ExactMatrix {
    let n = series.defining_dim(rank);
    match series {
        Series::A => unit1(n, a, a),
        Series::B | Series::D => rotation(n, 2 * a - 1, 2 * a).scale(&Scalar::complex(Rational::ZERO, Rational::from_integer(-1))),
        Series::C => unit1(n, a, a).sub(&unit1(n, rank + a, rank + a)).expect("same dim"),
    }
}

/// `H_v = sum_a v_a / |v|^2 h_a`, so `[H_v, E_v] = E_v`.
pub fn cartan_dual(series: Series, rank: usize, v: &RootVector) -> ExactMatrix {
    let n = series.defining_dim(rank);
    let norm = v.norm2();
    assert!(norm != 0, "Cartan dual of zero vector");
    let terms: Vec<(Scalar, ExactMatrix)> = v
        .0
        .iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(k, &x)| (Scalar::ratio(x, norm), cartan_unit(series, rank, k + 1)))
        .collect();
    lin(n, &terms)
}

/// Raw root vector.
fn root_vector(series: Series, rank: usize, v: &RootVector) -> ExactMatrix {
    let n = series.defining_dim(rank);
    let supp = v.support();
    let c = |k: usize| v.0[k - 1];
    let one = Scalar::ONE;
    let m1 = Scalar::from_int(-1);
    let i = Scalar::I;
    match series {
        Series::A => {
            let (p, q) = if c(supp[0]) > 0 { (supp[0], supp[1]) } else { (supp[1], supp[0]) };
            unit1(n, p, q)
        }
        Series::B | Series::D => {
            if !v.is_positive() {
                return root_vector(series, rank, &v.neg()).conj();
            }
            match supp.as_slice() {
                [a] => {
                    let a = *a;
                    lin(n, &[(one, rotation(n, 2 * a, n)), (i.neg(), rotation(n, 2 * a - 1, n))])
                }
                [a, b] => {
                    let (a, b) = (*a, *b);
                    let s = if c(b) > 0 { one.clone() } else { m1.clone() };
                    lin(
                        n,
                        &[
                            (m1, rotation(n, 2 * a, 2 * b)),
                            (i.mul(&s), rotation(n, 2 * a, 2 * b - 1)),
                            (i.clone(), rotation(n, 2 * a - 1, 2 * b)),
                            (s, rotation(n, 2 * a - 1, 2 * b - 1)),
                        ],
                    )
                }
                _ => unreachable!("validated root"),
            }
        }
        Series::C => {
            let r = rank;
            match supp.as_slice() {
                [a] => {
                    let a = *a;
                    if c(a) > 0 {
                        unit1(n, a, r + a)
                    } else {
                        unit1(n, r + a, a)
                    }
                }
                [a, b] => {
                    let (a, b) = (*a, *b);
                    match (c(a) > 0, c(b) > 0) {
                        (true, true) => lin(n, &[(one.clone(), unit1(n, a, r + b)), (one, unit1(n, b, r + a))]),
                        (false, false) => lin(n, &[(one.clone(), unit1(n, r + a, b)), (one, unit1(n, r + b, a))]),
                        (true, false) => lin(n, &[(one, unit1(n, a, b)), (m1, unit1(n, r + b, r + a))]),
                        (false, true) => lin(n, &[(one, unit1(n, b, a)), (m1, unit1(n, r + a, r + b))]),
                    }
                }
                _ => unreachable!("validated root"),
            }
        }
    }
}

/// Builds the defining representation with root vectors `E_{label}`, the
/// Cartan basis, and `H_{label}` for every positive root.
pub fn build_defining(desc: &AlgebraDescriptor) -> Result<ClassicalAlgebra, LieError> {
    let (series, rank) = (desc.series, desc.rank);
    check_rank(series, rank)?;
    let n = series.defining_dim(rank);
    let coords = series.coords(rank);
    let roots = all_roots(series, rank);
    let mut rep = Representation::new(series.algebra_name(rank), n);
    for v in &roots {
        rep.insert(root_name(v), root_vector(series, rank, v));
    }
    let cartan_basis: Vec<RootVector> = match series {
        Series::A => (1..coords).map(|a| RootVector::pair(coords, a, 1, a + 1, -1)).collect(),
        _ => (1..=coords).map(|a| RootVector::e(coords, a)).collect(),
    };
    for h in cartan_basis.iter().chain(roots.iter().filter(|v| v.is_positive())) {
        rep.insert(cartan_name(h), cartan_dual(series, rank, h));
    }
    let mut alg = ClassicalAlgebra { desc: desc.clone(), roots, cartan_basis, rep };
    check_weights(&alg)?;
    if desc.basis == Basis::ChainNormalized {
        normalize(&mut alg, &default_levels_or_empty(series, rank))?;
    }
    Ok(alg)
}

fn default_levels_or_empty(series: Series, rank: usize) -> Vec<LevelRoots> {
    default_levels(series, rank, true).unwrap_or_default()
}

/// Asserts `[h_a, E_v] = v_a E_v` for every root and Cartan unit, and
/// `[H_v, E_v] = E_v`.
fn check_weights(alg: &ClassicalAlgebra) -> Result<(), LieError> {
    let (series, rank) = (alg.series(), alg.rank());
    for v in &alg.roots {
        let e = alg.root_matrix(v)?;
        for a in 1..=alg.coords() {
            let h = cartan_unit(series, rank, a);
            let expect = e.scale(&Scalar::from_int(v.0[a - 1]));
            if h.commutator(e)? != expect {
                return Err(LieError::Convention(format!("h_{a} on {}", root_name(v))));
            }
        }
        let hv = cartan_dual(series, rank, v);
        if hv.commutator(e)? != *e {
            return Err(LieError::Convention(format!("H on {}", root_name(v))));
        }
    }
    Ok(())
}

/// Rescales `E_{l''}` of each level pair so that `[E_{l'}, E_{l''}] = E_{l0}`.
fn normalize(alg: &mut ClassicalAlgebra, levels: &[LevelRoots]) -> Result<(), LieError> {
    for level in levels {
        for (l1, l2) in &level.pairs {
            let c = alg.pair_coefficient(l1, l2)?;
            if !c.is_one() {
                let name = root_name(l2);
                let m = alg.matrix(&name)?.scale(&c);
                alg.rep.insert(name, m);
            }
        }
    }
    Ok(())
}

/// The four-dimensional algebra `[H,A] = a A`, `[H,B] = b B`, `[H,E] = E`,
/// `[A,B] = E`, `[E,A] = [E,B] = 0` with `a + b = 1`, in 3x3 matrices.
#[derive(Debug, Clone)]
pub struct LAlgebra {
    pub alpha: Rational,
    pub beta: Rational,
    rep: Representation,
}

impl LAlgebra {
    pub fn rep(&self) -> &Representation {
        &self.rep
    }
}

pub fn build_l_alpha_beta(alpha: &Rational) -> LAlgebra {
    let beta = Rational::ONE.sub(alpha);
    let mut rep = Representation::new(format!("L({alpha},{beta})"), 3);
    rep.insert("A", ExactMatrix::unit(3, 0, 1));
    rep.insert("B", ExactMatrix::unit(3, 1, 2));
    rep.insert("E", ExactMatrix::unit(3, 0, 2));
    rep.insert(
        "H",
        ExactMatrix::from_entries(
            3,
            [
                (0, 0, Scalar::from_rational(alpha.clone())),
                (2, 2, Scalar::from_rational(alpha.sub(&Rational::ONE))),
            ],
        ),
    );
    LAlgebra { alpha: alpha.clone(), beta, rep }
}
