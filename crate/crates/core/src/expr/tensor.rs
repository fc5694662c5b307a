//! Elements of tensor powers: scalar-weighted sums of leg-tagged
//! expressions, and ordered products of exponentials of such sums.

use serde::{Deserialize, Serialize};

use super::eval::{EvalError, Evaluator};
use super::node::{Expr, Node};
use crate::exact::{ExactMatrix, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LegError {
    #[error("leg {leg} out of range 1..={legs}")]
    OutOfRange { leg: usize, legs: usize },
    #[error("invalid leg permutation {0:?}")]
    BadPermutation(Vec<usize>),
    #[error("leg count mismatch: {0} vs {1}")]
    Mismatch(usize, usize),
    #[error("tuple of length {got} for {legs} legs")]
    TupleLength { got: usize, legs: usize },
    #[error("tuple entry {0} is not a single-leg expression")]
    TupleEntry(usize),
}

/// `sum_t c_t x_t` where each `x_t` is an expression on legs `0..legs`.
/// Identical expressions are merged; first-insertion order is kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorPoly {
    legs: usize,
    terms: Vec<(Scalar, Expr)>,
}

impl TensorPoly {
    pub fn zero(legs: usize) -> Self {
        TensorPoly { legs, terms: Vec::new() }
    }

    /// Splits a top-level sum into terms.
    pub fn from_expr(legs: usize, e: &Expr) -> Self {
        let mut t = Self::zero(legs);
        t.add_expr(Scalar::ONE, e);
        t
    }

    /// Builds `sum c (x_1 (x) ... (x) x_n)` from per-leg factors, each
    /// written as a leg-1 expression.
    pub fn from_tuples<I>(legs: usize, tuples: I) -> Result<Self, LegError>
    where
        I: IntoIterator<Item = (Scalar, Vec<Expr>)>,
    {
        let mut t = Self::zero(legs);
        for (c, parts) in tuples {
            t.add_term(c, tuple_expr(legs, &parts)?);
        }
        Ok(t)
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn terms(&self) -> &[(Scalar, Expr)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_expr(&mut self, c: Scalar, e: &Expr) {
        match e.node() {
            Node::Sum(v) => {
                for x in v {
                    self.add_expr(c.clone(), x);
                }
            }
            _ => self.add_term(c, e.clone()),
        }
    }

    /// Adds `c x`, folding any scalar on `x` into the coefficient.
    pub fn add_term(&mut self, c: Scalar, x: Expr) {
        let (d, body) = x.split_scale();
        let c = c.mul(&d);
        if c.is_zero() || body.is_zero() {
            return;
        }
        if let Some(k) = self.terms.iter().position(|(_, e)| *e == body) {
            let merged = self.terms[k].0.add(&c);
            if merged.is_zero() {
                self.terms.remove(k);
            } else {
                self.terms[k].0 = merged;
            }
        } else {
            self.terms.push((c, body));
        }
    }

    pub fn to_expr(&self) -> Expr {
        Expr::sum(self.terms.iter().map(|(c, e)| Expr::scale(c.clone(), e.clone())).collect::<Vec<_>>())
    }

    fn map(&self, legs: usize, f: impl Fn(&Expr) -> Expr) -> TensorPoly {
        let mut out = Self::zero(legs);
        for (c, e) in &self.terms {
            out.add_expr(c.clone(), &f(e));
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> TensorPoly {
        let mut out = Self::zero(self.legs);
        for (d, e) in &self.terms {
            out.add_term(d.mul(c), e.clone());
        }
        out
    }

    pub fn neg(&self) -> TensorPoly {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn add(&self, other: &TensorPoly) -> Result<TensorPoly, LegError> {
        if self.legs != other.legs {
            return Err(LegError::Mismatch(self.legs, other.legs));
        }
        let mut out = self.clone();
        for (c, e) in &other.terms {
            out.add_term(c.clone(), e.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TensorPoly) -> Result<TensorPoly, LegError> {
        self.add(&other.neg())
    }

    /// Primitive coproduct applied to leg `leg` (1-based).
    pub fn coproduct_leg(&self, leg: usize) -> Result<TensorPoly, LegError> {
        check_leg(leg, self.legs)?;
        Ok(self.map(self.legs + 1, |e| e.coproduct_leg((leg - 1) as u8)))
    }

    /// Counit applied to leg `leg` (1-based).
    pub fn counit_leg(&self, leg: usize) -> Result<TensorPoly, LegError> {
        check_leg(leg, self.legs)?;
        Ok(self.map(self.legs - 1, |e| e.counit_leg((leg - 1) as u8)))
    }

    /// Output leg `k` carries input leg `perm[k]` (both 1-based).
    pub fn permute_legs(&self, perm: &[usize]) -> Result<TensorPoly, LegError> {
        let target = inverse_perm(perm, self.legs)?;
        Ok(self.map(self.legs, |e| e.relabel_legs(&target)))
    }

    /// Places leg `k` at position `positions[k]` (1-based) of `n` legs.
    pub fn embed(&self, positions: &[usize], n: usize) -> Result<TensorPoly, LegError> {
        let target = embed_target(positions, self.legs, n)?;
        Ok(self.map(n, |e| e.relabel_legs(&target)))
    }

    /// Image in the `legs`-fold tensor power.
    pub fn eval(&self, ev: &mut Evaluator) -> Result<ExactMatrix, EvalError> {
        let dim = ev.leg_dim().pow(self.legs as u32);
        let mut acc = ExactMatrix::zeros(dim);
        for (c, e) in &self.terms {
            acc = acc.add(&ev.eval_on(e, self.legs)?.scale(c))?;
        }
        Ok(acc)
    }

    /// Per-leg factorization of every term, when each term is an ordered
    /// product of single-leg factors.
    pub fn as_tuples(&self) -> Option<Vec<(Scalar, Vec<Expr>)>> {
        self.terms
            .iter()
            .map(|(c, e)| term_tuple(self.legs, e).map(|t| (c.clone(), t)))
            .collect()
    }
}

fn check_leg(leg: usize, legs: usize) -> Result<(), LegError> {
    if leg == 0 || leg > legs {
        return Err(LegError::OutOfRange { leg, legs });
    }
    Ok(())
}

/// For a 1-based permutation, the 0-based target of each input leg.
fn inverse_perm(perm: &[usize], legs: usize) -> Result<Vec<u8>, LegError> {
    let bad = || LegError::BadPermutation(perm.to_vec());
    if perm.len() != legs {
        return Err(bad());
    }
    let mut target = vec![u8::MAX; legs];
    for (k, &src) in perm.iter().enumerate() {
        if src == 0 || src > legs || target[src - 1] != u8::MAX {
            return Err(bad());
        }
        target[src - 1] = k as u8;
    }
    Ok(target)
}

fn embed_target(positions: &[usize], legs: usize, n: usize) -> Result<Vec<u8>, LegError> {
    if positions.len() != legs {
        return Err(LegError::BadPermutation(positions.to_vec()));
    }
    let mut seen = vec![false; n];
    for &p in positions {
        check_leg(p, n)?;
        if std::mem::replace(&mut seen[p - 1], true) {
            return Err(LegError::BadPermutation(positions.to_vec()));
        }
    }
    Ok(positions.iter().map(|p| (p - 1) as u8).collect())
}

fn tuple_expr(legs: usize, parts: &[Expr]) -> Result<Expr, LegError> {
    if parts.len() != legs {
        return Err(LegError::TupleLength { got: parts.len(), legs });
    }
    let mut factors = Vec::with_capacity(legs);
    for (k, p) in parts.iter().enumerate() {
        if p.legs().iter().any(|&l| l != 0) {
            return Err(LegError::TupleEntry(k + 1));
        }
        factors.push(p.map_generators(&|_, name| Expr::gen_on(k as u8, name)));
    }
    Ok(Expr::prod(factors))
}

fn term_tuple(legs: usize, e: &Expr) -> Option<Vec<Expr>> {
    let factors: Vec<Expr> = match e.node() {
        Node::Prod(v) => v.clone(),
        _ => vec![e.clone()],
    };
    let mut per_leg: Vec<Vec<Expr>> = vec![Vec::new(); legs];
    for f in factors {
        let fl = f.legs();
        let leg = match fl.as_slice() {
            [] => 0,
            [l] => *l as usize,
            _ => return None,
        };
        per_leg[leg].push(f.map_generators(&|_, name| Expr::gen(name)));
    }
    Some(per_leg.into_iter().map(Expr::prod).collect())
}

/// `exp(arg)` with a display label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpFactor {
    pub label: String,
    pub arg: TensorPoly,
}

/// Ordered product `f_1 f_2 ... f_m` of exponential factors; `f_m` acts
/// first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistElement {
    legs: usize,
    factors: Vec<ExpFactor>,
}

impl TwistElement {
    pub fn identity(legs: usize) -> Self {
        TwistElement { legs, factors: Vec::new() }
    }

    pub fn from_factors(legs: usize, factors: Vec<ExpFactor>) -> Result<Self, LegError> {
        if let Some(f) = factors.iter().find(|f| f.arg.legs() != legs) {
            return Err(LegError::Mismatch(legs, f.arg.legs()));
        }
        Ok(TwistElement { legs, factors })
    }

    pub fn single(label: impl Into<String>, arg: TensorPoly) -> Self {
        TwistElement { legs: arg.legs(), factors: vec![ExpFactor { label: label.into(), arg }] }
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn factors(&self) -> &[ExpFactor] {
        &self.factors
    }

    pub fn labels(&self) -> Vec<&str> {
        self.factors.iter().map(|f| f.label.as_str()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.factors.iter().all(|f| f.arg.is_zero())
    }

    /// `self * other`.
    pub fn then(&self, other: &TwistElement) -> Result<TwistElement, LegError> {
        if self.legs != other.legs {
            return Err(LegError::Mismatch(self.legs, other.legs));
        }
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Ok(TwistElement { legs: self.legs, factors })
    }

    /// The factors at the given positions, in order.
    pub fn select(&self, keep: impl Fn(usize, &ExpFactor) -> bool) -> TwistElement {
        TwistElement {
            legs: self.legs,
            factors: self.factors.iter().enumerate().filter(|(k, f)| keep(*k, f)).map(|(_, f)| f.clone()).collect(),
        }
    }

    /// Reversed factor list with negated arguments.
    pub fn inverse(&self) -> TwistElement {
        let factors = self
            .factors
            .iter()
            .rev()
            .map(|f| ExpFactor { label: format!("{}^-1", f.label), arg: f.arg.neg() })
            .collect();
        TwistElement { legs: self.legs, factors }
    }

    fn map(&self, legs: usize, f: impl Fn(&TensorPoly) -> Result<TensorPoly, LegError>) -> Result<TwistElement, LegError> {
        let factors = self
            .factors
            .iter()
            .map(|x| Ok(ExpFactor { label: x.label.clone(), arg: f(&x.arg)? }))
            .collect::<Result<_, LegError>>()?;
        Ok(TwistElement { legs, factors })
    }

    pub fn coproduct_leg(&self, leg: usize) -> Result<TwistElement, LegError> {
        check_leg(leg, self.legs)?;
        self.map(self.legs + 1, |a| a.coproduct_leg(leg))
    }

    pub fn counit_leg(&self, leg: usize) -> Result<TwistElement, LegError> {
        check_leg(leg, self.legs)?;
        self.map(self.legs - 1, |a| a.counit_leg(leg))
    }

    pub fn permute_legs(&self, perm: &[usize]) -> Result<TwistElement, LegError> {
        self.map(self.legs, |a| a.permute_legs(perm))
    }

    pub fn embed(&self, positions: &[usize], n: usize) -> Result<TwistElement, LegError> {
        self.map(n, |a| a.embed(positions, n))
    }

    /// Matrix of the ordered product.
    pub fn eval(&self, ev: &mut Evaluator) -> Result<ExactMatrix, EvalError> {
        let dim = ev.leg_dim().pow(self.legs as u32);
        let mut acc: Option<ExactMatrix> = None;
        for f in &self.factors {
            let m = f.arg.eval(ev)?.exp_nilpotent()?;
            acc = Some(match acc {
                None => m,
                Some(a) => a.mul(&m)?,
            });
        }
        Ok(acc.unwrap_or_else(|| ExactMatrix::identity(dim)))
    }

    /// Matrices of the individual factors.
    pub fn eval_factors(&self, ev: &mut Evaluator) -> Result<Vec<ExactMatrix>, EvalError> {
        self.factors.iter().map(|f| Ok(f.arg.eval(ev)?.exp_nilpotent()?)).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: Scalar,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tuple: Option<Vec<Expr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    expr: Option<Expr>,
}

#[derive(Serialize, Deserialize)]
struct TensorPolyJson {
    legs: usize,
    terms: Vec<TermJson>,
}

impl Serialize for TensorPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms = self
            .terms
            .iter()
            .map(|(c, e)| match term_tuple(self.legs, e) {
                Some(t) => TermJson { coeff: c.clone(), tuple: Some(t), expr: None },
                None => TermJson { coeff: c.clone(), tuple: None, expr: Some(e.clone()) },
            })
            .collect();
        TensorPolyJson { legs: self.legs, terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TensorPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = TensorPolyJson::deserialize(d)?;
        let mut out = TensorPoly::zero(raw.legs);
        for t in raw.terms {
            let e = match (t.tuple, t.expr) {
                (Some(parts), None) => tuple_expr(raw.legs, &parts).map_err(D::Error::custom)?,
                (None, Some(e)) => {
                    if e.legs().iter().any(|&l| l as usize >= raw.legs) {
                        return Err(D::Error::custom(format!("term `{e}` uses a leg beyond {}", raw.legs)));
                    }
                    e
                }
                _ => return Err(D::Error::custom("term needs exactly one of `tuple` or `expr`")),
            };
            out.add_expr(t.coeff, &e);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::Representation;

    fn p(s: &str) -> Expr {
        s.parse().unwrap()
    }

    fn sl2() -> Representation {
        let mut r = Representation::new("sl2", 2);
        r.insert("E", ExactMatrix::unit(2, 0, 1));
        r.insert(
            "H",
            ExactMatrix::from_entries(2, [(0, 0, Scalar::ratio(1, 2)), (1, 1, Scalar::ratio(-1, 2))]),
        );
        r
    }

    fn jordanian() -> TwistElement {
        let arg = TensorPoly::from_tuples(2, [(Scalar::ONE, vec![p("H"), p("log1p(E)")])]).unwrap();
        TwistElement::single("Phi_J", arg)
    }

    #[test]
    fn merging_terms() {
        let mut t = TensorPoly::zero(2);
        t.add_term(Scalar::ONE, p("H@1 E@2"));
        t.add_term(Scalar::from_int(2), p("H@1 E@2"));
        t.add_term(Scalar::ONE, p("E@1"));
        assert_eq!(t.terms().len(), 2);
        assert_eq!(t.terms()[0].0, Scalar::from_int(3));
        t.add_term(Scalar::from_int(-3), p("H@1 E@2"));
        assert_eq!(t.terms().len(), 1);
    }

    #[test]
    fn empty_poly_and_identity_twist() {
        let rep = sl2();
        let mut ev = Evaluator::new(&rep);
        assert!(TensorPoly::zero(2).eval(&mut ev).unwrap().is_zero());
        assert!(TwistElement::identity(2).eval(&mut ev).unwrap().is_identity());
    }

    #[test]
    fn swap_legs() {
        let t = TensorPoly::from_expr(2, &p("H@1 log1p(E@2)"));
        let s = t.permute_legs(&[2, 1]).unwrap();
        assert_eq!(s.to_expr(), p("H@2 log1p(E@1)"));
        assert_eq!(s.permute_legs(&[2, 1]).unwrap(), t);
        assert!(t.permute_legs(&[1, 1]).is_err());
    }

    #[test]
    fn embed_13() {
        let rep = sl2();
        let mut ev = Evaluator::new(&rep);
        let t = TensorPoly::from_expr(2, &p("H@1 E@2"));
        let f13 = t.embed(&[1, 3], 3).unwrap().eval(&mut ev).unwrap();
        let f12 = t.eval(&mut ev).unwrap().kron(&ExactMatrix::identity(2));
        assert_eq!(f13, f12.permute_legs(2, &[0, 2, 1]));
    }

    #[test]
    fn counit_of_jordanian() {
        let rep = sl2();
        let mut ev = Evaluator::new(&rep);
        let f = jordanian();
        assert!(f.counit_leg(1).unwrap().eval(&mut ev).unwrap().is_identity());
        assert!(f.counit_leg(2).unwrap().eval(&mut ev).unwrap().is_identity());
        assert!(f.counit_leg(3).is_err());
    }

    #[test]
    fn inverse_multiplies_to_identity() {
        let rep = sl2();
        let mut ev = Evaluator::new(&rep);
        let f = jordanian();
        let m = f.eval(&mut ev).unwrap().mul(&f.inverse().eval(&mut ev).unwrap()).unwrap();
        assert!(m.is_identity());
    }

    #[test]
    fn json_round_trip() {
        let mut t = TensorPoly::from_tuples(
            2,
            [(Scalar::ratio(1, 2), vec![p("E_{1-3}"), p("E_{2+3} (1 + E_{1+2})^(-1/2)")])],
        )
        .unwrap();
        t.add_term(Scalar::I, p("exp(H@1 E@2)"));
        let f = TwistElement::single("Phi", t.clone());
        let js = serde_json::to_string(&f).unwrap();
        let back: TwistElement = serde_json::from_str(&js).unwrap();
        assert_eq!(back, f);
        assert!(js.contains("\"tuple\""));
        assert!(js.contains("\"expr\""));
    }
}
