mod common;

use qselect_core::linalg::{is_psd, kron_all, ComplexMatrix, PSD_TOL};
use qselect_core::measurement::{collective_pauli_design, Axis};
use qselect_core::states::{
    depolarize, dicke_state, pauli_word, physicality_map, pseudostate_from_counts, target_state, Base, ModelFamily,
};

fn rho_actual() -> qselect_core::linalg::DensityMatrix {
    depolarize(&dicke_state(2).unwrap(), 0.2).unwrap()
}

fn correlator(rho: &ComplexMatrix, word: &ComplexMatrix) -> f64 {
    rho.trace_product(word).re
}

#[test]
fn infinite_data_pseudostate_matches_measured_correlators() {
    let design = collective_pauli_design();
    let actual = rho_actual();
    let data = design.expected_dataset(actual.matrix(), 1 << 50).unwrap();
    let obs = pseudostate_from_counts(&data).unwrap();
    for axis in [Axis::X, Axis::Y] {
        for subset in 1..16 {
            let w = pauli_word(&axis.pauli(), subset);
            let diff = (correlator(obs.matrix(), &w) - correlator(actual.matrix(), &w)).abs();
            assert!(diff < 1e-12, "{axis:?} {subset:04b}: {diff:e}");
        }
    }
}

#[test]
fn unmeasured_correlators_vanish() {
    let design = collective_pauli_design();
    let data = design.simulate(rho_actual().matrix(), 400, 3).unwrap();
    let obs = pseudostate_from_counts(&data).unwrap();
    let id = ComplexMatrix::identity(2);
    let (x, y, z) = (ComplexMatrix::pauli_x(), ComplexMatrix::pauli_y(), ComplexMatrix::pauli_z());
    let words = [
        kron_all([&z, &z, &id, &id]),
        kron_all([&x, &y, &id, &id]),
        kron_all([&z, &id, &id, &id]),
        kron_all([&x, &x, &x, &y]),
    ];
    for w in &words {
        assert!(correlator(obs.matrix(), w).abs() < 1e-15);
    }
}

#[test]
fn finite_sample_pseudostate_is_trace_one_and_typically_unphysical() {
    let design = collective_pauli_design();
    let mut unphysical = 0;
    for seed in 0..20 {
        let data = design.simulate(rho_actual().matrix(), 100, seed).unwrap();
        let obs = pseudostate_from_counts(&data).unwrap();
        assert!((obs.matrix().trace().re - 1.0).abs() < 1e-10);
        assert!(obs.matrix().hermitian_deviation() < 1e-10);
        if !is_psd(obs.matrix(), PSD_TOL).unwrap() {
            unphysical += 1;
        }
    }
    assert!(unphysical >= 18, "{unphysical}/20 unphysical");
}

#[test]
fn every_family_point_is_hermitian_and_trace_one() {
    let design = collective_pauli_design();
    let data = design.simulate(rho_actual().matrix(), 100, 11).unwrap();
    let families = [
        ModelFamily::m1(target_state(2, 0.4).unwrap()),
        ModelFamily::m1(dicke_state(1).unwrap()).with_variable_phase(1).unwrap(),
        ModelFamily::m2(target_state(2, 1.0).unwrap(), Base::State(rho_actual())),
        ModelFamily::m2(dicke_state(2).unwrap(), Base::Pseudo(pseudostate_from_counts(&data).unwrap())),
    ];
    for family in &families {
        let k = family.param_count();
        for i in 0..=10 {
            let mut theta = vec![i as f64 / 10.0; k];
            if family.has_variable_phase() {
                theta[k - 1] = i as f64 * 0.6;
            }
            let e = family.evaluate(&theta).unwrap();
            assert!(e.matrix.hermitian_deviation() < 1e-14);
            assert!((e.matrix.trace().re - 1.0).abs() < 1e-14);
            if family.base().is_none() {
                assert!(is_psd(&e.matrix, PSD_TOL).unwrap());
            }
        }
    }
}

#[test]
fn physical_fraction_of_sampled_pseudostate_map() {
    let design = collective_pauli_design();
    let data = design.simulate(rho_actual().matrix(), 1000, 0).unwrap();
    let m2 = ModelFamily::m2(dicke_state(2).unwrap(), Base::Pseudo(pseudostate_from_counts(&data).unwrap()));
    let map = physicality_map(&m2, 0.01).unwrap();
    assert_eq!(map.physical.len(), 101 * 101);
    let f = map.fraction();
    assert!((0.65..=0.80).contains(&f), "fraction {f}");
}
