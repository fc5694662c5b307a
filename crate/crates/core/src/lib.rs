//! Exact construction and verification of chains of extended Jordanian
//! twists for the classical Lie algebras.

pub mod exact;
pub mod expr;
pub mod lie;
pub mod chain;
pub mod verify;

pub use exact::{ExactMatrix, Gaussian, MatrixError, Rational, Scalar};
pub use expr::{Evaluator, Expr, TensorPoly, TwistElement};
pub use lie::Representation;
pub use verify::{VerificationReport, VerifyError};
