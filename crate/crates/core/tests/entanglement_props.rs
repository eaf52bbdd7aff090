mod common;

use proptest::prelude::*;
use qselect_core::entanglement::{generalized_negativities, negativity, witness_expectation, BALANCED_CUTS, SINGLE_CUTS};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn negativity_is_complement_invariant(seed in any::<u64>(), rank in 1usize..4) {
        let rho = common::random_density(4, rank, &mut common::rng(seed));
        for cut in BALANCED_CUTS.iter().chain(SINGLE_CUTS.iter()) {
            let complement: Vec<usize> = (0..4).filter(|q| !cut.contains(q)).collect();
            let a = negativity(&rho, cut).unwrap();
            let b = negativity(&rho, &complement).unwrap();
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn negativity_is_convex(s1 in any::<u64>(), s2 in any::<u64>(), lambda in 0.0f64..1.0) {
        let a = common::random_density(4, 1, &mut common::rng(s1));
        let b = common::random_density(4, 2, &mut common::rng(s2));
        let mix = a.mix(&b, 1.0 - lambda);
        for cut in BALANCED_CUTS.iter().chain(SINGLE_CUTS.iter()) {
            let lhs = negativity(&mix, cut).unwrap();
            let rhs = lambda * negativity(&a, cut).unwrap() + (1.0 - lambda) * negativity(&b, cut).unwrap();
            prop_assert!(lhs <= rhs + 1e-10);
        }
    }

    #[test]
    fn witness_is_linear(s1 in any::<u64>(), s2 in any::<u64>(), lambda in 0.0f64..1.0) {
        let a = common::random_density(4, 3, &mut common::rng(s1));
        let b = common::random_density(4, 3, &mut common::rng(s2));
        let mix = a.mix(&b, 1.0 - lambda);
        let lhs = witness_expectation(mix.matrix()).unwrap();
        let rhs = lambda * witness_expectation(a.matrix()).unwrap() + (1.0 - lambda) * witness_expectation(b.matrix()).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn generalized_negativities_are_finite_and_non_negative(seed in any::<u64>(), rank in 1usize..17) {
        let rho = common::random_density(4, rank, &mut common::rng(seed));
        let t = generalized_negativities(&rho).unwrap();
        for v in [t.n0, t.n1, t.n2] {
            prop_assert!(v.is_finite() && v >= 0.0);
        }
        if t.n1 > 0.0 && t.n2 > 0.0 {
            prop_assert!((t.n0 - (t.n1.powi(3) * t.n2.powi(4)).powf(1.0 / 7.0)).abs() < 1e-10);
        }
    }
}
