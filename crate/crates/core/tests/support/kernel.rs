//! Randomized kernel properties shared by the property tests and the
//! acceptance harness.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use twistforge::exact::{ExactMatrix, Gaussian, Rational, Scalar};
use twistforge::expr::{Evaluator, Expr, TensorPoly};
use twistforge::lie::{build_defining, AlgebraDescriptor, Series};

pub fn runner(cases: u32, seed: u8) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]))
}

fn big(q: &Rational) -> BigRational {
    BigRational::new(q.numer(), q.denom())
}

pub fn rational() -> impl Strategy<Value = Rational> {
    prop_oneof![
        (-20i64..=20, 1i64..=12).prop_map(|(n, d)| Rational::new(n, d)),
        (any::<i64>(), 1i64..=i64::MAX).prop_map(|(n, d)| Rational::new(n, d)),
    ]
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| Rational::new(n, d))
}

fn small_scalar() -> impl Strategy<Value = Scalar> {
    (small_rational(), small_rational(), prop::bool::weighted(0.2))
        .prop_map(|(re, im, cplx)| if cplx { Scalar::complex(re, im) } else { Scalar::from_rational(re) })
}

fn matrix(dim: usize, density: f64) -> impl Strategy<Value = ExactMatrix> {
    prop::collection::vec((prop::bool::weighted(density), small_scalar()), dim * dim).prop_map(move |cells| {
        let entries = cells
            .into_iter()
            .enumerate()
            .filter(|(_, (keep, _))| *keep)
            .map(|(k, (_, v))| (k / dim, k % dim, v));
        ExactMatrix::from_entries(dim, entries)
    })
}

/// Strictly upper triangular, hence nilpotent.
fn nilpotent(dim: usize) -> impl Strategy<Value = ExactMatrix> {
    matrix(dim, 0.5).prop_map(move |m| {
        ExactMatrix::from_entries(dim, m.entries().filter(|(r, c, _)| c > r).map(|(r, c, v)| (r, c, v.clone())))
    })
}

fn dim_and<S: Strategy, F: Fn(usize) -> S>(f: F) -> impl Strategy<Value = (usize, S::Value)> {
    (2usize..=5).prop_flat_map(move |d| (Just(d), f(d)))
}

/// Rational arithmetic agrees with arbitrary-precision rationals.
pub fn rational_field(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&(rational(), rational()), |(a, b)| {
            prop_assert_eq!(big(&a.add(&b)), big(&a) + big(&b));
            prop_assert_eq!(big(&a.sub(&b)), big(&a) - big(&b));
            prop_assert_eq!(big(&a.mul(&b)), big(&a) * big(&b));
            if !b.is_zero() {
                prop_assert_eq!(big(&a.div(&b).unwrap()), big(&a) / big(&b));
            }
            prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a.clone());
            prop_assert_eq!(a.numer() == BigInt::from(0), a.is_zero());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// `log1p(exp(N) - 1) = N`, `exp(log1p(N)) = 1 + N` and
/// `(1+N)^p (1+N)^q = (1+N)^(p+q)` for nilpotent `N`.
pub fn exp_log_round_trip(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&(dim_and(nilpotent), small_rational(), small_rational()), |((d, n), p, q)| {
            let id = ExactMatrix::identity(d);
            let e = n.exp_nilpotent().unwrap();
            prop_assert_eq!(e.sub(&id).unwrap().log1p_nilpotent().unwrap(), n.clone());
            prop_assert_eq!(n.log1p_nilpotent().unwrap().exp_nilpotent().unwrap(), id.add(&n).unwrap());
            let u = id.add(&n).unwrap();
            let lhs = u.pow_rational(&p).unwrap().mul(&u.pow_rational(&q).unwrap()).unwrap();
            prop_assert_eq!(lhs, u.pow_rational(&p.add(&q)).unwrap());
            let inv = u.inverse().unwrap();
            prop_assert_eq!(u.pow_rational(&Rational::from_integer(-1)).unwrap(), inv);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// `(A (x) B)(C (x) D) = AC (x) BD` and leg permutations of Kronecker
/// products.
pub fn mixed_product(runner: &mut TestRunner) -> Result<(), String> {
    let quad = (2usize..=3).prop_flat_map(|d| (Just(d), matrix(d, 0.4), matrix(d, 0.4), matrix(d, 0.4), matrix(d, 0.4)));
    runner
        .run(&quad, |(d, a, b, c, dm)| {
            let lhs = a.kron(&b).mul(&c.kron(&dm)).unwrap();
            prop_assert_eq!(lhs, a.mul(&c).unwrap().kron(&b.mul(&dm).unwrap()));
            prop_assert_eq!(a.kron(&b).permute_legs(d, &[1, 0]), b.kron(&a));
            let abc = a.kron(&b).kron(&c);
            prop_assert_eq!(abc.permute_legs(d, &[2, 0, 1]).permute_legs(d, &[1, 2, 0]), abc.clone());
            let embedded = a.kron(&b).embed_legs(d, &[0, 2], 3);
            prop_assert_eq!(embedded, a.kron(&ExactMatrix::identity(d)).kron(&b));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn eps_matrix(body: &ExactMatrix, first: &ExactMatrix) -> ExactMatrix {
    let eps = Scalar::eps(Gaussian::ONE);
    body.add(&first.scale(&eps)).unwrap()
}

/// Products of `X + eps Y` truncate at first order.
pub fn eps_truncation(runner: &mut TestRunner) -> Result<(), String> {
    let quad = (2usize..=4).prop_flat_map(|d| (matrix(d, 0.4), matrix(d, 0.4), matrix(d, 0.4), matrix(d, 0.4)));
    runner
        .run(&(quad, small_scalar(), small_scalar()), |((a, b, c, d), s, t)| {
            let x = eps_matrix(&a, &b);
            let y = eps_matrix(&c, &d);
            let xy = x.mul(&y).unwrap();
            prop_assert_eq!(xy.epsilon_free(), a.mul(&c).unwrap());
            prop_assert_eq!(xy.epsilon_coefficient(), a.mul(&d).unwrap().add(&b.mul(&c).unwrap()).unwrap());
            let e = Scalar::eps(Gaussian::ONE);
            prop_assert!(e.mul(&e).is_zero());
            let u = s.add(&e.mul(&t));
            prop_assert_eq!(u.body_scalar(), s.clone());
            prop_assert_eq!(u.eps_scalar(), t.clone());
            prop_assert_eq!(u.to_string().parse::<Scalar>().unwrap(), u.clone());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

const SL3: [&str; 6] = ["E_{1-2}", "E_{2-3}", "E_{1-3}", "E_{2-1}", "E_{3-2}", "H_{1-3}"];

fn word() -> impl Strategy<Value = Expr> {
    let atom = prop_oneof![
        (0..SL3.len()).prop_map(|k| Expr::gen(SL3[k])),
        (-3i64..=3).prop_map(|n| Expr::constant(Scalar::from_int(n))),
    ];
    let mono = prop::collection::vec(atom, 1..=3).prop_map(Expr::prod);
    prop::collection::vec(mono, 1..=3).prop_map(Expr::sum)
}

/// `(D (x) id) D = (id (x) D) D` and `(eps (x) id) D = id` on random
/// polynomials, evaluated in the defining representation of sl(3).
pub fn coassociativity(runner: &mut TestRunner) -> Result<(), String> {
    let mut alg = build_defining(&AlgebraDescriptor::raw(Series::A, 2)).map_err(|e| e.to_string())?;
    alg.ensure_cartan(&twistforge::lie::RootVector(vec![1, 0, -1]));
    let rep = alg.rep().clone();
    runner
        .run(&word(), |x| {
            let mut ev = Evaluator::new(&rep);
            let fail = |e: &dyn std::fmt::Display| TestCaseError::fail(e.to_string());
            let d = TensorPoly::from_expr(1, &x).coproduct_leg(1).map_err(|e| fail(&e))?;
            let left = d.coproduct_leg(1).map_err(|e| fail(&e))?.eval(&mut ev).map_err(|e| fail(&e))?;
            let right = d.coproduct_leg(2).map_err(|e| fail(&e))?.eval(&mut ev).map_err(|e| fail(&e))?;
            prop_assert_eq!(left, right);
            let counit = d.counit_leg(1).map_err(|e| fail(&e))?.eval(&mut ev).map_err(|e| fail(&e))?;
            prop_assert_eq!(counit, TensorPoly::from_expr(1, &x).eval(&mut ev).map_err(|e| fail(&e))?);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub type Property = fn(&mut TestRunner) -> Result<(), String>;

pub const PROPERTIES: [(&str, Property); 5] = [
    ("rational_field", rational_field),
    ("exp_log_round_trip", exp_log_round_trip),
    ("mixed_product", mixed_product),
    ("eps_truncation", eps_truncation),
    ("coassociativity", coassociativity),
];

/// Cases per property so that the suite has at least 10^4 cases.
pub const CASES_PER_PROPERTY: u32 = 2000;
