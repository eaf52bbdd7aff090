mod common;

use proptest::prelude::*;
use qselect_core::entanglement::collective_spin;
use qselect_core::linalg::{is_psd, ComplexMatrix, DensityMatrix};
use qselect_core::measurement::{
    born_probabilities, collective_correlator, collective_pauli_design, collective_second_moment, product_sic_design,
    sample_counts, Axis,
};
use qselect_core::states::pauli_word;

fn random_state(seed: u64) -> DensityMatrix {
    common::random_density(4, 3, &mut common::rng(seed))
}

proptest! {
    #[test]
    fn born_rule_is_affine(s1 in any::<u64>(), s2 in any::<u64>(), lambda in 0.0f64..1.0) {
        let (a, b) = (random_state(s1), random_state(s2));
        let mix = a.matrix().lin_comb(lambda, b.matrix(), 1.0 - lambda);
        for design in [product_sic_design(), collective_pauli_design()] {
            for setting in design.settings() {
                let pa = born_probabilities(a.matrix(), &setting.povm).unwrap();
                let pb = born_probabilities(b.matrix(), &setting.povm).unwrap();
                let pm = born_probabilities(&mix, &setting.povm).unwrap();
                for k in 0..pm.len() {
                    prop_assert!((pm[k] - (lambda * pa[k] + (1.0 - lambda) * pb[k])).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn sampling_is_reproducible(seed in any::<u64>(), shots in 0u64..5000) {
        let p = born_probabilities(random_state(seed).matrix(), &product_sic_design().settings()[0].povm).unwrap();
        let a = sample_counts(&p, shots, seed).unwrap();
        prop_assert_eq!(a.iter().sum::<u64>(), shots);
        prop_assert_eq!(a, sample_counts(&p, shots, seed).unwrap());
    }
}

#[test]
fn designs_are_complete_and_positive() {
    for design in [product_sic_design(), collective_pauli_design()] {
        let total: f64 = design.settings().iter().map(|s| s.allocation).sum();
        assert!((total - 1.0).abs() < 1e-15);
        for setting in design.settings() {
            assert!(setting.povm.completeness().approx_eq(&ComplexMatrix::identity(16), 1e-10));
            for e in setting.povm.effects() {
                assert!(is_psd(e, 1e-10).unwrap());
            }
        }
    }
    assert_eq!(product_sic_design().settings()[0].povm.len(), 256);
}

#[test]
fn collective_second_moment_matches_operator_expectation() {
    let design = collective_pauli_design();
    for seed in 0..10 {
        let rho = random_state(seed);
        for (setting, axis) in design.settings().iter().zip([Axis::X, Axis::Y]) {
            let j = collective_spin(&axis.pauli());
            let direct = rho.matrix().trace_product(&j.matmul(&j)).re;
            let p = born_probabilities(rho.matrix(), &setting.povm).unwrap();
            assert!((collective_second_moment(&p) - direct).abs() < 1e-12);
        }
    }
}

#[test]
fn fifteen_correlators_per_setting_match_operator_expectations() {
    let design = collective_pauli_design();
    let rho = random_state(42);
    for (setting, axis) in design.settings().iter().zip([Axis::X, Axis::Y]) {
        let p = born_probabilities(rho.matrix(), &setting.povm).unwrap();
        for subset in 1..16 {
            let direct = rho.matrix().trace_product(&pauli_word(&axis.pauli(), subset)).re;
            assert!((collective_correlator(&p, subset) - direct).abs() < 1e-12, "subset {subset:04b}");
        }
    }
}
