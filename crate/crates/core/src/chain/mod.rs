//! Chains of extended Jordanian twists.

pub mod build;
pub mod levels;
pub mod presets;
pub mod spec;

pub use build::{
    build_chain, build_improper_sp, effective_levels, build_sp_counterexample, resolve_levels, wedge_poly, Chain, ChainError,
    ImproperVariant, InvariantHalves, RTerm, ResolvedLevel, ResolvedPair,
};
pub use levels::{constituent_pairs, default_levels, initial_roots, LevelRoots, RootError};
pub use presets::{preset, preset_names, Preset, PresetKind};
pub use spec::{ChainSpec, ExtensionForm, LevelSpec, Theta};
