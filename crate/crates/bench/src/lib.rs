//! Shared fixtures for the benchmarks.

use twistforge::chain::{build_chain, preset, Chain, PresetKind};

/// Builds a bundled chain preset.
pub fn preset_chain(name: &str) -> Chain {
    match preset(name).map(|p| p.kind) {
        Some(PresetKind::Chain(spec)) => build_chain(&spec).expect("preset builds"),
        _ => panic!("{name} is not a chain preset"),
    }
}
