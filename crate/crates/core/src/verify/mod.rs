//! Exact verification of twists, R-matrices and coproduct formulas.

pub mod costructure;
pub mod golden;
pub mod hopf;
pub mod report;
pub mod suite;

use crate::chain::ChainError;
use crate::exact::MatrixError;
use crate::expr::{EvalError, LegError};
use crate::lie::LieError;

pub use hopf::*;
pub use report::VerificationReport;
pub use suite::{chain_rep, chain_suite, carrier_composition, run_sweep, semiclassical_match, sweep_specs, RepChoice, SuiteOptions};

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Leg(#[from] LegError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("{file}:{line}: {msg}")]
    Golden { file: String, line: usize, msg: String },
    #[error("{0}")]
    Unsupported(String),
}
