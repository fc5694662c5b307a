//! Serializable chain specifications.

use serde::{Deserialize, Serialize};

use crate::exact::Scalar;
use crate::lie::{AlgebraDescriptor, RootVector};

/// Which constituent roots of a level enter its extension.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum Theta {
    #[default]
    All,
    Subset(Vec<RootVector>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ThetaJson {
    Keyword(String),
    List(Vec<RootVector>),
}

impl Serialize for Theta {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Theta::All => ThetaJson::Keyword("all".into()).serialize(s),
            Theta::Subset(v) => ThetaJson::List(v.clone()).serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Theta {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match ThetaJson::deserialize(d)? {
            ThetaJson::Keyword(k) if k == "all" => Ok(Theta::All),
            ThetaJson::Keyword(k) => Err(serde::de::Error::custom(format!("unknown theta keyword `{k}`"))),
            ThetaJson::List(v) => Ok(Theta::Subset(v)),
        }
    }
}

fn one() -> Scalar {
    Scalar::ONE
}

fn yes() -> bool {
    true
}

fn is_all(t: &Theta) -> bool {
    *t == Theta::All
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSpec {
    pub initial_root: RootVector,
    #[serde(default, skip_serializing_if = "is_all")]
    pub theta: Theta,
    #[serde(default = "one")]
    pub xi: Scalar,
}

impl LevelSpec {
    pub fn new(initial_root: RootVector) -> Self {
        LevelSpec { initial_root, theta: Theta::All, xi: Scalar::ONE }
    }
}

/// How the extension of a level is written.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtensionForm {
    /// One exponential per constituent pair.
    #[default]
    Factored,
    /// A single exponential of the summed argument.
    Summed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub algebra: AlgebraDescriptor,
    /// `None` selects the default ladder of the series.
    #[serde(default)]
    pub levels: Option<Vec<LevelSpec>>,
    #[serde(default)]
    pub improper: bool,
    #[serde(default)]
    pub extension: ExtensionForm,
    /// Keep trailing A-series levels that have no constituents.
    #[serde(default = "yes")]
    pub sl2_tail: bool,
}

impl ChainSpec {
    pub fn default_chain(algebra: AlgebraDescriptor) -> Self {
        ChainSpec { algebra, levels: None, improper: false, extension: ExtensionForm::Factored, sl2_tail: true }
    }

    pub fn with_levels(algebra: AlgebraDescriptor, levels: Vec<LevelSpec>) -> Self {
        ChainSpec { levels: Some(levels), ..Self::default_chain(algebra) }
    }

    /// Sets every level parameter, in level order; missing entries keep
    /// their value.
    pub fn with_xi(mut self, xi: &[Scalar]) -> Self {
        if let Some(levels) = self.levels.as_mut() {
            for (l, x) in levels.iter_mut().zip(xi) {
                l.xi = x.clone();
            }
        }
        self
    }
}
