#![allow(dead_code)]

use qselect_core::linalg::{ComplexMatrix, DensityMatrix};
use qselect_core::states::PureState;
use qselect_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let a = ComplexMatrix::from_fn(n, n, |_, _| random_complex(rng));
    a.add(&a.adjoint()).scale(0.5)
}

/// Random density matrix of rank at most `rank`.
pub fn random_density(n_qubits: usize, rank: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let d = 1 << n_qubits;
    let a = ComplexMatrix::from_fn(d, rank, |_, _| random_complex(rng));
    let m = a.matmul(&a.adjoint());
    let tr = m.trace().re;
    DensityMatrix::new(m.scale(1.0 / tr)).unwrap()
}

pub fn random_pure(n_qubits: usize, rng: &mut ChaCha8Rng) -> PureState {
    let v: Vec<Complex64> = (0..1 << n_qubits).map(|_| random_complex(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    PureState::new(v.into_iter().map(|z| z / norm).collect()).unwrap()
}
