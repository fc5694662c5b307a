//! Hopf-algebraic predicates evaluated in matrix representations.

use crate::exact::{ExactMatrix, Scalar};
use crate::expr::{Evaluator, Expr, TensorPoly, TwistElement};
use crate::lie::Representation;

use super::report::VerificationReport;
use super::VerifyError;

fn minus_identity(m: ExactMatrix) -> ExactMatrix {
    let d = m.dim();
    m.sub(&ExactMatrix::identity(d)).expect("same dim")
}

/// `(eps (x) id) F = 1` and `(id (x) eps) F = 1`.
pub fn check_counit(f: &TwistElement, ev: &mut Evaluator) -> Result<VerificationReport, VerifyError> {
    let left = minus_identity(f.counit_leg(1)?.eval(ev)?);
    let right = minus_identity(f.counit_leg(2)?.eval(ev)?);
    Ok(VerificationReport::from_residuals("counit", &[("(eps x id)F".into(), left), ("(id x eps)F".into(), right)]))
}

/// `F12 (D x id)(F) - F23 (id x D)(F)` in the triple tensor power.
pub fn twist_equation_residual(f: &TwistElement, ev: &mut Evaluator) -> Result<ExactMatrix, VerifyError> {
    let lhs = f.embed(&[1, 2], 3)?.then(&f.coproduct_leg(1)?)?;
    let rhs = f.embed(&[2, 3], 3)?.then(&f.coproduct_leg(2)?)?;
    Ok(lhs.eval(ev)?.sub(&rhs.eval(ev)?)?)
}

pub fn check_twist_equation(f: &TwistElement, ev: &mut Evaluator) -> Result<VerificationReport, VerifyError> {
    Ok(VerificationReport::from_residual("twist_equation", &twist_equation_residual(f, ev)?))
}

/// `F F^-1 - 1`, with the inverse taken as reversed negated factors.
pub fn check_inverse(f: &TwistElement, ev: &mut Evaluator) -> Result<VerificationReport, VerifyError> {
    let m = f.then(&f.inverse())?.eval(ev)?;
    Ok(VerificationReport::from_residual("inverse", &minus_identity(m)))
}

/// `R = F21 F^-1`.
pub fn r_matrix(f: &TwistElement, ev: &mut Evaluator) -> Result<ExactMatrix, VerifyError> {
    Ok(f.permute_legs(&[2, 1])?.then(&f.inverse())?.eval(ev)?)
}

/// `R21 R = 1`.
pub fn check_triangular(r: &ExactMatrix, leg_dim: usize) -> Result<VerificationReport, VerifyError> {
    let r21 = r.permute_legs(leg_dim, &[1, 0]);
    Ok(VerificationReport::from_residual("triangular", &minus_identity(r21.mul(r)?)))
}

/// `R12 R13 R23 - R23 R13 R12`.
pub fn check_qybe(r: &ExactMatrix, leg_dim: usize) -> Result<VerificationReport, VerifyError> {
    let r12 = r.embed_legs(leg_dim, &[0, 1], 3);
    let r13 = r.embed_legs(leg_dim, &[0, 2], 3);
    let r23 = r.embed_legs(leg_dim, &[1, 2], 3);
    let lhs = r12.mul(&r13)?.mul(&r23)?;
    let rhs = r23.mul(&r13)?.mul(&r12)?;
    Ok(VerificationReport::from_residual("qybe", &lhs.sub(&rhs)?))
}

/// `[r12, r13] + [r12, r23] + [r13, r23]`.
pub fn cybe_residual(r: &TensorPoly, ev: &mut Evaluator) -> Result<ExactMatrix, VerifyError> {
    let r12 = r.embed(&[1, 2], 3)?.eval(ev)?;
    let r13 = r.embed(&[1, 3], 3)?.eval(ev)?;
    let r23 = r.embed(&[2, 3], 3)?.eval(ev)?;
    Ok(r12.commutator(&r13)?.add(&r12.commutator(&r23)?)?.add(&r13.commutator(&r23)?)?)
}

pub fn check_cybe(r: &TensorPoly, ev: &mut Evaluator) -> Result<VerificationReport, VerifyError> {
    Ok(VerificationReport::from_residual("cybe", &cybe_residual(r, ev)?))
}

/// Primitive coproduct of a single-leg expression, evaluated.
pub fn primitive_coproduct(x: &Expr, ev: &mut Evaluator) -> Result<ExactMatrix, VerifyError> {
    Ok(TensorPoly::from_expr(1, x).coproduct_leg(1)?.eval(ev)?)
}

/// `F D(x) F^-1`.
pub fn twisted_coproduct(f: &TwistElement, x: &Expr, ev: &mut Evaluator) -> Result<ExactMatrix, VerifyError> {
    let fm = f.eval(ev)?;
    let finv = f.inverse().eval(ev)?;
    Ok(fm.mul(&primitive_coproduct(x, ev)?)?.mul(&finv)?)
}

pub fn check_coproduct_formula(
    f: &TwistElement,
    x: &Expr,
    formula: &TensorPoly,
    ev: &mut Evaluator,
) -> Result<VerificationReport, VerifyError> {
    let lhs = twisted_coproduct(f, x, ev)?;
    Ok(VerificationReport::from_residual("coproduct", &lhs.sub(&formula.eval(ev)?)?).with_detail(format!("D_F({x})")))
}

/// `[F, D(g)] = 0` for every listed generator.
pub fn check_primitivity(f: &TwistElement, gens: &[String], ev: &mut Evaluator) -> Result<VerificationReport, VerifyError> {
    let fm = f.eval(ev)?;
    let mut parts = Vec::with_capacity(gens.len());
    for g in gens {
        let d = primitive_coproduct(&Expr::gen(g), ev)?;
        parts.push((g.clone(), fm.commutator(&d)?));
    }
    Ok(VerificationReport::from_residuals("primitivity", &parts))
}

/// `v = m (id (x) S)(F)`, computed from `F` evaluated in `rho (x) rho*`
/// where `rho*(x) = rho(S x)^T`.
pub fn twisted_antipode_element(f: &TwistElement, rep: &Representation) -> Result<ExactMatrix, VerifyError> {
    let dual = rep.dual();
    let mut ev = Evaluator::per_leg(vec![rep, &dual])?;
    let m = f.eval(&mut ev)?;
    let d = rep.dim();
    let mut entries = Vec::new();
    for (row, col, v) in m.entries() {
        let (b, b2) = (col / d, col % d);
        if b == b2 {
            entries.push((row / d, row % d, v.clone()));
        }
    }
    Ok(ExactMatrix::from_entries(d, entries))
}

/// `sum_{b,e} K_be N[(b,e),(a,c)]`: applies `m (S (x) id)` with `K`
/// inserted between the legs.
fn contract_first_leg(n: &ExactMatrix, k: &ExactMatrix, d: usize) -> ExactMatrix {
    let mut entries = Vec::new();
    for (row, col, v) in n.entries() {
        let kv = k.get(row / d, row % d);
        if !kv.is_zero() {
            entries.push((col / d, col % d, kv.mul(v)));
        }
    }
    ExactMatrix::from_entries(d, entries)
}

/// `m (S_F (x) id) D_F(x) = eps(x) 1` with `S_F(a) = v S(a) v^-1`, for
/// every listed generator (`eps(x) = 0`).
pub fn check_antipode(f: &TwistElement, gens: &[String], rep: &Representation) -> Result<VerificationReport, VerifyError> {
    let d = rep.dim();
    let v = twisted_antipode_element(f, rep)?;
    let vinv = match v.inverse() {
        Ok(m) => m,
        Err(_) => return Ok(VerificationReport::failed("antipode", "v is not invertible")),
    };
    let dual = rep.dual();
    let mut ev = Evaluator::per_leg(vec![&dual, rep])?;
    let fm = f.eval(&mut ev)?;
    let finv = f.inverse().eval(&mut ev)?;
    let mut parts = Vec::with_capacity(gens.len());
    for g in gens {
        let n = fm.mul(&primitive_coproduct(&Expr::gen(g), &mut ev)?)?.mul(&finv)?;
        parts.push((g.clone(), v.mul(&contract_first_leg(&n, &vinv, d))?));
    }
    Ok(VerificationReport::from_residuals("antipode", &parts))
}

/// `(D (x) id) F = F13 F23` and `(id (x) D_F) F = F12 F13`.
pub fn check_factorizable(f: &TwistElement, ev: &mut Evaluator) -> Result<VerificationReport, VerifyError> {
    let f12 = f.embed(&[1, 2], 3)?;
    let f13 = f.embed(&[1, 3], 3)?;
    let f23 = f.embed(&[2, 3], 3)?;
    let first = f.coproduct_leg(1)?.eval(ev)?.sub(&f13.then(&f23)?.eval(ev)?)?;
    let lhs = f23.then(&f.coproduct_leg(2)?)?.then(&f23.inverse())?;
    let second = lhs.eval(ev)?.sub(&f12.then(&f13)?.eval(ev)?)?;
    Ok(VerificationReport::from_residuals(
        "factorizable",
        &[("(D x id)F = F13 F23".into(), first), ("(id x D_F)F = F12 F13".into(), second)],
    ))
}

/// Matrix of `c * 1` in the `legs`-fold power.
pub fn scalar_image(c: Scalar, leg_dim: usize, legs: u32) -> ExactMatrix {
    ExactMatrix::scalar(leg_dim.pow(legs), c)
}
