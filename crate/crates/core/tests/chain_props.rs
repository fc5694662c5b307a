use proptest::prelude::*;

use twistforge::chain::{build_chain, constituent_pairs, effective_levels, ChainSpec, Theta};
use twistforge::exact::{Rational, Scalar};
use twistforge::lie::{AlgebraDescriptor, Series};
use twistforge::verify::{check_triangular, check_twist_equation, r_matrix};
use twistforge::Evaluator;

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (prop_oneof![-6i64..=-1, 1i64..=6], 1i64..=5).prop_map(|(n, d)| Rational::new(n, d))
}

fn assert_twist(spec: &ChainSpec) -> Result<(), TestCaseError> {
    let chain = build_chain(spec).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let mut ev = Evaluator::new(chain.algebra.rep());
    let t = check_twist_equation(&chain.twist, &mut ev).unwrap();
    prop_assert!(t.pass, "twist equation {:?}", t.witness);
    let r = r_matrix(&chain.twist, &mut ev).unwrap();
    prop_assert!(check_triangular(&r, ev.leg_dim()).unwrap().pass);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn any_level_parameters_give_a_twist(series in prop_oneof![Just((Series::A, 4)), Just((Series::B, 3)), Just((Series::D, 4))],
                                        xis in prop::collection::vec(nonzero_rational(), 3)) {
        let (s, rank) = series;
        let spec = ChainSpec::default_chain(AlgebraDescriptor::new(s, rank));
        let levels = effective_levels(&spec).unwrap();
        let xi: Vec<Scalar> = xis.into_iter().map(Scalar::from_rational).collect();
        assert_twist(&ChainSpec { levels: Some(levels), ..spec }.with_xi(&xi))?;
    }

    #[test]
    fn any_subset_of_one_sl_extension_gives_a_twist(mask in prop::collection::vec(any::<bool>(), 4), xi in nonzero_rational()) {
        let spec = ChainSpec::default_chain(AlgebraDescriptor::new(Series::A, 5));
        let mut levels = effective_levels(&spec).unwrap();
        levels.truncate(1);
        let pairs = constituent_pairs(Series::A, 5, &levels[0].initial_root, &[]).unwrap();
        prop_assert_eq!(pairs.len(), 4);
        let subset = pairs.iter().zip(&mask).filter(|(_, m)| **m).map(|(p, _)| p.0.clone()).collect();
        levels[0].theta = Theta::Subset(subset);
        levels[0].xi = Scalar::from_rational(xi);
        assert_twist(&ChainSpec { levels: Some(levels), ..spec })?;
    }
}
