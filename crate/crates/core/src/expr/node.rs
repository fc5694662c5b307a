//! Hash-consed expression DAG over named generators.
//!
//! Every generator carries a tensor-leg tag, so a single expression can
//! describe an element of a tensor power: factors on different legs
//! commute, factors on the same leg multiply in order.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, LazyLock, Mutex};

use crate::exact::{Rational, Scalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Node {
    One,
    Gen { leg: u8, name: Arc<str> },
    Scale(Scalar, Expr),
    Sum(Vec<Expr>),
    Prod(Vec<Expr>),
    Exp(Expr),
    Log1p(Expr),
    Pow(Expr, Rational),
}

/// Interned expression. Structurally equal expressions share one
/// allocation, so equality and hashing are by pointer.
#[derive(Clone)]
pub struct Expr(Arc<Node>);

static INTERNER: LazyLock<Mutex<HashSet<Arc<Node>>>> = LazyLock::new(Default::default);

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for Expr {}

impl Hash for Expr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (Arc::as_ptr(&self.0) as usize).hash(state);
    }
}

fn intern(node: Node) -> Expr {
    let mut set = INTERNER.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(existing) = set.get(&node) {
        return Expr(existing.clone());
    }
    let arc = Arc::new(node);
    set.insert(arc.clone());
    Expr(arc)
}

impl Expr {
    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn one() -> Expr {
        intern(Node::One)
    }

    pub fn zero() -> Expr {
        intern(Node::Sum(Vec::new()))
    }

    /// Generator `name` on leg 0.
    pub fn gen(name: &str) -> Expr {
        Self::gen_on(0, name)
    }

    pub fn gen_on(leg: u8, name: &str) -> Expr {
        intern(Node::Gen { leg, name: Arc::from(name) })
    }

    pub fn constant(c: Scalar) -> Expr {
        Self::scale(c, Self::one())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.node(), Node::Sum(v) if v.is_empty())
    }

    pub fn is_one(&self) -> bool {
        matches!(self.node(), Node::One)
    }

    pub fn scale(c: Scalar, x: Expr) -> Expr {
        if c.is_zero() || x.is_zero() {
            return Self::zero();
        }
        if c.is_one() {
            return x;
        }
        match x.node() {
            Node::Scale(d, y) => Self::scale(c.mul(d), y.clone()),
            _ => intern(Node::Scale(c, x)),
        }
    }

    pub fn sum(items: impl IntoIterator<Item = Expr>) -> Expr {
        let mut out = Vec::new();
        for x in items {
            match x.node() {
                Node::Sum(v) => out.extend(v.iter().cloned()),
                _ => out.push(x),
            }
        }
        match out.len() {
            1 => out.pop().expect("one item"),
            _ => intern(Node::Sum(out)),
        }
    }

    pub fn prod(items: impl IntoIterator<Item = Expr>) -> Expr {
        let mut coeff = Scalar::ONE;
        let mut out = Vec::new();
        for x in items {
            let (c, y) = x.split_scale();
            coeff = coeff.mul(&c);
            match y.node() {
                Node::One => {}
                Node::Sum(v) if v.is_empty() => return Self::zero(),
                Node::Prod(v) => out.extend(v.iter().cloned()),
                _ => out.push(y),
            }
        }
        let body = match out.len() {
            0 => Self::one(),
            1 => out.pop().expect("one item"),
            _ => intern(Node::Prod(out)),
        };
        Self::scale(coeff, body)
    }

    pub fn exp(x: Expr) -> Expr {
        if x.is_zero() {
            return Self::one();
        }
        intern(Node::Exp(x))
    }

    pub fn log1p(x: Expr) -> Expr {
        if x.is_zero() {
            return Self::zero();
        }
        intern(Node::Log1p(x))
    }

    pub fn pow(base: Expr, q: Rational) -> Expr {
        if q.is_zero() || base.is_one() {
            return Self::one();
        }
        if q.is_one() {
            return base;
        }
        intern(Node::Pow(base, q))
    }

    /// `(1 + x)^q`.
    pub fn pow1p(x: Expr, q: Rational) -> Expr {
        Self::pow(Self::sum([Self::one(), x]), q)
    }

    pub fn add(&self, other: &Expr) -> Expr {
        Self::sum([self.clone(), other.clone()])
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        Self::prod([self.clone(), other.clone()])
    }

    pub fn neg(&self) -> Expr {
        Self::scale(Scalar::from_int(-1), self.clone())
    }

    /// Splits off a top-level scalar: `c x -> (c, x)`.
    pub fn split_scale(&self) -> (Scalar, Expr) {
        match self.node() {
            Node::Scale(c, x) => (c.clone(), x.clone()),
            _ => (Scalar::ONE, self.clone()),
        }
    }

    /// Generator names with their legs, in first-occurrence order.
    pub fn generators(&self) -> Vec<(u8, Arc<str>)> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        self.visit(&mut HashSet::new(), &mut |n| {
            if let Node::Gen { leg, name } = n {
                if seen.insert((*leg, name.clone())) {
                    out.push((*leg, name.clone()));
                }
            }
        });
        out
    }

    /// Sorted set of legs on which the expression acts nontrivially.
    pub fn legs(&self) -> Vec<u8> {
        let mut legs: Vec<u8> = self.generators().into_iter().map(|g| g.0).collect();
        legs.sort_unstable();
        legs.dedup();
        legs
    }

    fn visit(&self, seen: &mut HashSet<Expr>, f: &mut impl FnMut(&Node)) {
        if !seen.insert(self.clone()) {
            return;
        }
        f(self.node());
        match self.node() {
            Node::One | Node::Gen { .. } => {}
            Node::Scale(_, x) | Node::Exp(x) | Node::Log1p(x) | Node::Pow(x, _) => x.visit(seen, f),
            Node::Sum(v) | Node::Prod(v) => v.iter().for_each(|x| x.visit(seen, f)),
        }
    }

    /// Rebuilds the expression bottom-up, replacing each generator by
    /// `on_gen(leg, name)`. Shared subexpressions are rewritten once.
    pub fn map_generators(&self, on_gen: &impl Fn(u8, &Arc<str>) -> Expr) -> Expr {
        self.rewrite(&mut HashMap::new(), on_gen)
    }

    fn rewrite(&self, memo: &mut HashMap<Expr, Expr>, on_gen: &impl Fn(u8, &Arc<str>) -> Expr) -> Expr {
        if let Some(done) = memo.get(self) {
            return done.clone();
        }
        let out = match self.node() {
            Node::One => self.clone(),
            Node::Gen { leg, name } => on_gen(*leg, name),
            Node::Scale(c, x) => Self::scale(c.clone(), x.rewrite(memo, on_gen)),
            Node::Sum(v) => Self::sum(v.iter().map(|x| x.rewrite(memo, on_gen)).collect::<Vec<_>>()),
            Node::Prod(v) => Self::prod(v.iter().map(|x| x.rewrite(memo, on_gen)).collect::<Vec<_>>()),
            Node::Exp(x) => Self::exp(x.rewrite(memo, on_gen)),
            Node::Log1p(x) => Self::log1p(x.rewrite(memo, on_gen)),
            Node::Pow(x, q) => Self::pow(x.rewrite(memo, on_gen), q.clone()),
        };
        memo.insert(self.clone(), out.clone());
        out
    }

    /// Primitive coproduct on `leg` (0-based): `g -> g (x) 1 + 1 (x) g` on
    /// that leg, later legs shift up by one.
    pub fn coproduct_leg(&self, leg: u8) -> Expr {
        self.map_generators(&|l, name| {
            if l < leg {
                Self::gen_on(l, name)
            } else if l == leg {
                Self::sum([Self::gen_on(l, name), Self::gen_on(l + 1, name)])
            } else {
                Self::gen_on(l + 1, name)
            }
        })
    }

    /// Counit on `leg`: generators there map to zero, later legs shift down.
    pub fn counit_leg(&self, leg: u8) -> Expr {
        self.map_generators(&|l, name| {
            if l < leg {
                Self::gen_on(l, name)
            } else if l == leg {
                Self::zero()
            } else {
                Self::gen_on(l - 1, name)
            }
        })
    }

    /// Moves leg `l` to `target[l]`.
    pub fn relabel_legs(&self, target: &[u8]) -> Expr {
        self.map_generators(&|l, name| Self::gen_on(target[l as usize], name))
    }

    /// Antipode `S(g) = -g`, extended anti-multiplicatively, with
    /// `S(f(x)) = f(S(x))` for the series nodes. Only meaningful for
    /// single-leg expressions.
    pub fn antipode(&self) -> Expr {
        self.antipode_memo(&mut HashMap::new())
    }

    fn antipode_memo(&self, memo: &mut HashMap<Expr, Expr>) -> Expr {
        if let Some(done) = memo.get(self) {
            return done.clone();
        }
        let out = match self.node() {
            Node::One => self.clone(),
            Node::Gen { .. } => self.neg(),
            Node::Scale(c, x) => Self::scale(c.clone(), x.antipode_memo(memo)),
            Node::Sum(v) => Self::sum(v.iter().map(|x| x.antipode_memo(memo)).collect::<Vec<_>>()),
            Node::Prod(v) => Self::prod(v.iter().rev().map(|x| x.antipode_memo(memo)).collect::<Vec<_>>()),
            Node::Exp(x) => Self::exp(x.antipode_memo(memo)),
            Node::Log1p(x) => Self::log1p(x.antipode_memo(memo)),
            Node::Pow(x, q) => Self::pow(x.antipode_memo(memo), q.clone()),
        };
        memo.insert(self.clone(), out.clone());
        out
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_shares_nodes() {
        let a = Expr::gen("E_{1+2}");
        let b = Expr::gen("E_{1+2}");
        assert_eq!(a, b);
        assert!(Arc::ptr_eq(&a.0, &b.0));
        assert_ne!(a, Expr::gen_on(1, "E_{1+2}"));
    }

    #[test]
    fn smart_constructors() {
        let x = Expr::gen("A");
        assert_eq!(Expr::prod([Expr::one(), x.clone(), Expr::one()]), x);
        assert!(Expr::prod([x.clone(), Expr::zero()]).is_zero());
        assert_eq!(Expr::scale(Scalar::ONE, x.clone()), x);
        assert_eq!(Expr::exp(Expr::zero()), Expr::one());
        assert_eq!(Expr::pow(x.clone(), Rational::ONE), x);
        let two = Scalar::from_int(2);
        let p = Expr::prod([Expr::scale(two.clone(), x.clone()), Expr::gen("B")]);
        assert_eq!(p.split_scale().0, two);
    }

    #[test]
    fn coproduct_shifts_legs() {
        let x = Expr::prod([Expr::gen_on(0, "H"), Expr::gen_on(1, "E")]);
        let d = x.coproduct_leg(0);
        assert_eq!(d.legs(), vec![0, 1, 2]);
        let c = x.counit_leg(0);
        assert!(c.is_zero());
        let c2 = Expr::exp(x).counit_leg(1);
        assert!(c2.is_one());
    }

    #[test]
    fn antipode_reverses_products() {
        let a = Expr::gen("A");
        let b = Expr::gen("B");
        let s = a.mul(&b).antipode();
        assert_eq!(s, b.mul(&a));
        assert_eq!(a.antipode().antipode(), a);
    }
}
