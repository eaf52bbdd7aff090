mod common;

use qselect_core::entanglement::{negativity, BALANCED_CUTS, SINGLE_CUTS};
use qselect_core::states::PureState;

/// `((Σ_i s_i)^2 − 1)/2` from the singular values of the amplitude matrix
/// reshaped across `partition | complement`.
fn schmidt_negativity(psi: &PureState, partition: &[usize]) -> f64 {
    let complement: Vec<usize> = (0..4).filter(|q| !partition.contains(q)).collect();
    let bits = |index: usize, qubits: &[usize]| {
        qubits.iter().fold(0usize, |acc, &q| (acc << 1) | ((index >> (3 - q)) & 1))
    };
    let rows = 1 << partition.len();
    let cols = 1 << complement.len();
    let mut m = nalgebra::DMatrix::<nalgebra::Complex<f64>>::zeros(rows, cols);
    for (index, z) in psi.amplitudes().iter().enumerate() {
        m[(bits(index, partition), bits(index, &complement))] = nalgebra::Complex::new(z.re, z.im);
    }
    let s: f64 = m.singular_values().iter().sum();
    (s * s - 1.0) / 2.0
}

#[test]
fn partial_transpose_matches_schmidt_formula() {
    let mut rng = common::rng(100);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let psi = common::random_pure(4, &mut rng);
        let rho = psi.density_matrix();
        for cut in BALANCED_CUTS.iter().chain(SINGLE_CUTS.iter()) {
            let ours = negativity(&rho, cut).unwrap();
            worst = worst.max((ours - schmidt_negativity(&psi, cut)).abs());
        }
    }
    assert!(worst < 1e-9, "largest deviation {worst:e}");
}
