//! Twisted costructures of the four-dimensional algebras `L(a, b)` and
//! factorization identities of chain twists.

use serde::{Deserialize, Serialize};

use super::hopf::{check_coproduct_formula, check_factorizable, check_twist_equation};
use super::report::VerificationReport;
use super::VerifyError;
use crate::chain::Chain;
use crate::exact::{Rational, Scalar};
use crate::expr::{Evaluator, Expr, TensorPoly, TwistElement};
use crate::lie::build_l_alpha_beta;

/// Which of the two extensions of `exp(H (x) s)` is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LVariant {
    /// `exp(A (x) B e^{-b s})`.
    E,
    /// `exp(-B (x) A e^{-a s})`.
    EPrime,
}

impl LVariant {
    pub const ALL: [LVariant; 2] = [LVariant::E, LVariant::EPrime];

    pub fn name(self) -> &'static str {
        match self {
            LVariant::E => "E",
            LVariant::EPrime => "E'",
        }
    }
}

fn g(name: &str) -> Expr {
    Expr::gen(name)
}

/// `e^{q s}` with `s = ln(1 + E)`.
fn es(q: Rational) -> Expr {
    Expr::pow1p(g("E"), q)
}

fn r(n: i64) -> Rational {
    Rational::from_integer(n)
}

fn poly(terms: Vec<(Scalar, Expr, Expr)>) -> TensorPoly {
    TensorPoly::from_tuples(2, terms.into_iter().map(|(c, a, b)| (c, vec![a, b]))).expect("two legs")
}

pub fn l_twist(alpha: &Rational, variant: LVariant) -> TwistElement {
    let beta = Rational::ONE.sub(alpha);
    let sigma = Expr::log1p(g("E"));
    let j = poly(vec![(Scalar::ONE, g("H"), sigma)]);
    let ext = match variant {
        LVariant::E => poly(vec![(Scalar::ONE, g("A"), g("B").mul(&es(beta.neg())))]),
        LVariant::EPrime => poly(vec![(Scalar::from_int(-1), g("B"), g("A").mul(&es(alpha.neg())))]),
    };
    let phi_e = TwistElement::single(format!("Phi_{}", variant.name()), ext);
    phi_e.then(&TwistElement::single("Phi_J", j)).expect("two legs")
}

/// Closed forms of `D_F(H), D_F(A), D_F(B), D_F(E)`.
pub fn l_coproducts(alpha: &Rational, variant: LVariant) -> Vec<(&'static str, TensorPoly)> {
    let beta = Rational::ONE.sub(alpha);
    let one = Scalar::ONE;
    let (h, a, b, e) = (g("H"), g("A"), g("B"), g("E"));
    let de = poly(vec![(one.clone(), e.clone(), es(r(1))), (one.clone(), Expr::one(), e.clone())]);
    let h_base = vec![(one.clone(), h.clone(), es(r(-1))), (one.clone(), Expr::one(), h.clone())];
    match variant {
        LVariant::E => {
            let mut dh = h_base;
            dh.push((Scalar::from_int(-1), a.clone(), b.mul(&es(beta.add(&Rational::ONE).neg()))));
            vec![
                ("H", poly(dh)),
                ("A", poly(vec![(one.clone(), a.clone(), es(beta.neg())), (one.clone(), Expr::one(), a.clone())])),
                ("B", poly(vec![(one.clone(), b.clone(), es(beta.clone())), (one.clone(), es(r(1)), b.clone())])),
                ("E", de),
            ]
        }
        LVariant::EPrime => {
            let mut dh = h_base;
            dh.push((one.clone(), b.clone(), a.mul(&es(alpha.add(&Rational::ONE).neg()))));
            vec![
                ("H", poly(dh)),
                ("A", poly(vec![(one.clone(), a.clone(), es(alpha.clone())), (one.clone(), es(r(1)), a.clone())])),
                ("B", poly(vec![(one.clone(), b.clone(), es(alpha.neg())), (one.clone(), Expr::one(), b.clone())])),
                ("E", de),
            ]
        }
    }
}

/// Twist equation and the four coproduct formulas in the 3x3
/// representation of `L(alpha, 1 - alpha)`.
pub fn check_l_costructure(alpha: &Rational, variant: LVariant) -> Result<Vec<VerificationReport>, VerifyError> {
    let alg = build_l_alpha_beta(alpha);
    let mut ev = Evaluator::new(alg.rep());
    let f = l_twist(alpha, variant);
    let subject = format!("L({},{})/{}", alg.alpha, alg.beta, variant.name());
    let mut out = vec![check_twist_equation(&f, &mut ev)?];
    for (name, formula) in l_coproducts(alpha, variant) {
        let rep = check_coproduct_formula(&f, &g(name), &formula, &mut ev)?;
        out.push(VerificationReport { check: format!("coproduct/{name}"), ..rep });
    }
    Ok(out.into_iter().map(|r| r.with_subject(subject.clone()).with_rep("L3")).collect())
}

/// The parameters used by default: `alpha` in `{1/2, 1/3, 1, 0}`.
pub fn default_alphas() -> Vec<Rational> {
    vec![Rational::new(1, 2), Rational::new(1, 3), Rational::ONE, Rational::ZERO]
}

/// Factorization identities for every Jordanian factor and every complete
/// level twist of `chain`.
pub fn check_chain_factorizable(chain: &Chain, ev: &mut Evaluator) -> Result<Vec<VerificationReport>, VerifyError> {
    let mut out = Vec::new();
    for (k, level) in chain.levels.iter().enumerate() {
        let j = TwistElement::single(format!("Phi_J{k}"), level.jordanian_factor().arg);
        let r = check_factorizable(&j, ev)?;
        out.push(VerificationReport { check: format!("factorizable/Phi_J{k}"), ..r });
        let r = check_factorizable(&chain.level_twist(k), ev)?;
        out.push(VerificationReport { check: format!("factorizable/F_B{k}"), ..r });
    }
    Ok(out)
}
