//! Expressions over abstract generators, tensor polynomials and twist
//! elements.

pub mod eval;
pub mod node;
pub mod tensor;
pub mod text;

pub use eval::{EvalError, Evaluator, LegMatrix};
pub use node::{Expr, Node};
pub use tensor::{ExpFactor, LegError, TensorPoly, TwistElement};
pub use text::ParseExprError;

crate::exact::serde_as_string!(Expr);
