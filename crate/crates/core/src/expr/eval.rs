//! Evaluation of expressions in matrix representations.

use std::collections::HashMap;
use std::sync::Arc;

use super::node::{Expr, Node};
use crate::exact::{ExactMatrix, MatrixError, Scalar};
use crate::lie::Representation;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("generator `{name}` on leg {leg} has no image")]
    UnknownGenerator { name: String, leg: usize },
    #[error("no representation for leg {0}")]
    MissingLeg(usize),
    #[error("leg representations have different dimensions")]
    MixedDims,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Matrix acting on the tensor legs `legs` (sorted, 0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegMatrix {
    pub legs: Vec<u8>,
    pub mat: ExactMatrix,
}

/// Memoizing evaluator. Each tensor leg may carry its own representation,
/// all of the same dimension; a single representation serves every leg.
pub struct Evaluator<'a> {
    reps: Vec<&'a Representation>,
    leg_dim: usize,
    memo: HashMap<Expr, Arc<LegMatrix>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(rep: &'a Representation) -> Self {
        Evaluator { leg_dim: rep.dim(), reps: vec![rep], memo: HashMap::new() }
    }

    pub fn per_leg(reps: Vec<&'a Representation>) -> Result<Self, EvalError> {
        let leg_dim = reps.first().ok_or(EvalError::MissingLeg(0))?.dim();
        if reps.iter().any(|r| r.dim() != leg_dim) {
            return Err(EvalError::MixedDims);
        }
        Ok(Evaluator { reps, leg_dim, memo: HashMap::new() })
    }

    pub fn leg_dim(&self) -> usize {
        self.leg_dim
    }

    fn rep(&self, leg: usize) -> Result<&'a Representation, EvalError> {
        match self.reps.len() {
            1 => Ok(self.reps[0]),
            _ => self.reps.get(leg).copied().ok_or(EvalError::MissingLeg(leg)),
        }
    }

    /// Image of `e` on exactly the legs `0..n`.
    pub fn eval_on(&mut self, e: &Expr, n: usize) -> Result<ExactMatrix, EvalError> {
        let lm = self.eval(e)?;
        let target: Vec<u8> = (0..n as u8).collect();
        Ok(self.lift(&lm, &target))
    }

    pub fn eval(&mut self, e: &Expr) -> Result<Arc<LegMatrix>, EvalError> {
        if let Some(done) = self.memo.get(e) {
            return Ok(done.clone());
        }
        let out = Arc::new(self.eval_node(e)?);
        self.memo.insert(e.clone(), out.clone());
        Ok(out)
    }

    fn eval_node(&mut self, e: &Expr) -> Result<LegMatrix, EvalError> {
        Ok(match e.node() {
            Node::One => LegMatrix { legs: Vec::new(), mat: ExactMatrix::identity(1) },
            Node::Gen { leg, name } => {
                let m = self
                    .rep(*leg as usize)?
                    .get(name)
                    .ok_or_else(|| EvalError::UnknownGenerator { name: name.to_string(), leg: *leg as usize + 1 })?;
                LegMatrix { legs: vec![*leg], mat: m.clone() }
            }
            Node::Scale(c, x) => {
                let inner = self.eval(x)?;
                LegMatrix { legs: inner.legs.clone(), mat: inner.mat.scale(c) }
            }
            Node::Sum(v) => {
                let parts = v.iter().map(|x| self.eval(x)).collect::<Result<Vec<_>, _>>()?;
                let legs = union(parts.iter().map(|p| p.legs.as_slice()));
                let mut acc = ExactMatrix::zeros(self.leg_dim.pow(legs.len() as u32));
                for p in &parts {
                    acc = acc.add(&self.lift(p, &legs))?;
                }
                LegMatrix { legs, mat: acc }
            }
            Node::Prod(v) => {
                let parts = v.iter().map(|x| self.eval(x)).collect::<Result<Vec<_>, _>>()?;
                let legs = union(parts.iter().map(|p| p.legs.as_slice()));
                let mut acc: Option<ExactMatrix> = None;
                for p in &parts {
                    let m = self.lift(p, &legs);
                    acc = Some(match acc {
                        None => m,
                        Some(a) => a.mul(&m)?,
                    });
                }
                let mat = acc.unwrap_or_else(|| ExactMatrix::identity(self.leg_dim.pow(legs.len() as u32)));
                LegMatrix { legs, mat }
            }
            Node::Exp(x) => {
                let inner = self.eval(x)?;
                LegMatrix { legs: inner.legs.clone(), mat: inner.mat.exp_nilpotent()? }
            }
            Node::Log1p(x) => {
                let inner = self.eval(x)?;
                LegMatrix { legs: inner.legs.clone(), mat: inner.mat.log1p_nilpotent()? }
            }
            Node::Pow(x, q) => {
                let inner = self.eval(x)?;
                LegMatrix { legs: inner.legs.clone(), mat: inner.mat.pow_rational(q)? }
            }
        })
    }

    /// Extends `lm` by identities to the sorted leg set `target`.
    pub fn lift(&self, lm: &LegMatrix, target: &[u8]) -> ExactMatrix {
        if lm.legs == target {
            return lm.mat.clone();
        }
        if lm.legs.is_empty() {
            let c = lm.mat.get(0, 0);
            return ExactMatrix::scalar(self.leg_dim.pow(target.len() as u32), c);
        }
        let positions: Vec<usize> = lm
            .legs
            .iter()
            .map(|l| target.iter().position(|t| t == l).expect("target covers legs"))
            .collect();
        lm.mat.embed_legs(self.leg_dim, &positions, target.len())
    }

    /// The scalar value of a leg-free expression.
    pub fn eval_scalar(&mut self, e: &Expr) -> Result<Option<Scalar>, EvalError> {
        let lm = self.eval(e)?;
        Ok(lm.legs.is_empty().then(|| lm.mat.get(0, 0)))
    }
}

fn union<'b>(sets: impl Iterator<Item = &'b [u8]>) -> Vec<u8> {
    let mut out: Vec<u8> = sets.flat_map(|s| s.iter().copied()).collect();
    out.sort_unstable();
    out.dedup();
    out
}
