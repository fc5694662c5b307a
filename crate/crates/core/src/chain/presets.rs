//! Named chain configurations used by the command line tool and tests.

use super::build::{build_improper_sp, ImproperVariant, InvariantHalves};
use super::spec::ChainSpec;
use crate::lie::{AlgebraDescriptor, Series};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PresetKind {
    Chain(ChainSpec),
    /// The sp(2n) twist built on the symplectic invariant.
    SpCounterexample { rank: usize, halves: InvariantHalves },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub kind: PresetKind,
    /// The twist equation is predicted to fail.
    pub expect_fail: bool,
}

const NAMES: &[&str] = &[
    "sl2", "sl3", "sl4", "sl5", "sl6", "so5", "so7", "so9", "so9-normalized", "so4", "so6", "so8", "so10", "sp4",
    "sp6", "sp6-plus", "sp6-long", "sp6-counterexample", "sp6-split",
];

pub fn preset_names() -> &'static [&'static str] {
    NAMES
}

fn chain(name: &'static str, description: &'static str, spec: ChainSpec) -> Preset {
    Preset { name, description, kind: PresetKind::Chain(spec), expect_fail: false }
}

fn default_chain(name: &'static str, series: Series, rank: usize) -> Preset {
    chain(name, "maximal chain of the series", ChainSpec::default_chain(AlgebraDescriptor::new(series, rank)))
}

fn improper(name: &'static str, description: &'static str, rank: usize, v: ImproperVariant) -> Preset {
    chain(name, description, build_improper_sp(rank, v).expect("rank >= 2"))
}

pub fn preset(name: &str) -> Option<Preset> {
    let name: &'static str = NAMES.iter().find(|n| **n == name)?;
    Some(match name {
        "sl2" => default_chain(name, Series::A, 1),
        "sl3" => default_chain(name, Series::A, 2),
        "sl4" => default_chain(name, Series::A, 3),
        "sl5" => default_chain(name, Series::A, 4),
        "sl6" => default_chain(name, Series::A, 5),
        "so5" => default_chain(name, Series::B, 2),
        "so7" => default_chain(name, Series::B, 3),
        "so9" => chain(
            name,
            "maximal chain of so(9) in the unnormalized rotation basis",
            ChainSpec::default_chain(AlgebraDescriptor::raw(Series::B, 4)),
        ),
        "so9-normalized" => default_chain(name, Series::B, 4),
        "so4" => default_chain(name, Series::D, 2),
        "so6" => default_chain(name, Series::D, 3),
        "so8" => default_chain(name, Series::D, 4),
        "so10" => default_chain(name, Series::D, 5),
        "sp4" => improper(name, "improper sl chain in sp(4)", 2, ImproperVariant::ShortSl),
        "sp6" => improper(name, "improper sl chain in sp(6)", 3, ImproperVariant::ShortSl),
        "sp6-plus" => improper(name, "improper chain in sp(6), e1+e_l half", 3, ImproperVariant::ShortPlus),
        "sp6-long" => improper(name, "sp(6) chain starting at the long root 2e1", 3, ImproperVariant::LongRoot),
        "sp6-counterexample" => Preset {
            name,
            description: "extension on the full symplectic invariant",
            kind: PresetKind::SpCounterexample { rank: 3, halves: InvariantHalves::Both },
            expect_fail: true,
        },
        "sp6-split" => Preset {
            name,
            description: "symplectic invariant with the minus half dropped",
            kind: PresetKind::SpCounterexample { rank: 3, halves: InvariantHalves::PlusOnly },
            expect_fail: false,
        },
        _ => unreachable!("listed preset"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_complete() {
        for n in preset_names() {
            assert_eq!(preset(n).unwrap().name, *n);
        }
        assert!(preset("g2").is_none());
        assert!(preset("sp6-counterexample").unwrap().expect_fail);
    }
}
