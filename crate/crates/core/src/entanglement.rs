//! Bipartite negativities, their generalized four-party means, and the
//! collective-spin witness `W_Jxy = 7/2 + √3 − Jx² − Jy²`.

use alloc::vec::Vec;

use crate::linalg::{embed_single, hermitian_eigenvalues, partial_transpose, ComplexMatrix, DensityMatrix};
use crate::{Error, Result, DIM, N_QUBITS};

/// Bisection stops once the bracket is narrower than this.
pub const ROOT_TOL: f64 = 1e-6;

/// Balanced two-vs-two cuts, by the qubits on the side of qubit 0.
pub const BALANCED_CUTS: [&[usize]; 3] = [&[0, 1], &[0, 2], &[0, 3]];
/// One-vs-three cuts.
pub const SINGLE_CUTS: [&[usize]; 4] = [&[0], &[1], &[2], &[3]];

/// `(‖ρ^{T_S}‖₁ − 1)/2`, the sum of magnitudes of negative eigenvalues of the
/// partial transpose on `partition`.
pub fn negativity(rho: &DensityMatrix, partition: &[usize]) -> Result<f64> {
    let n = rho.n_qubits();
    let mut mask = alloc::vec![false; n];
    for &q in partition {
        if q >= n || mask[q] {
            return Err(Error::InvalidPartition);
        }
        mask[q] = true;
    }
    if partition.is_empty() || partition.len() == n {
        return Err(Error::InvalidPartition);
    }
    let pt = partial_transpose(rho, &mask)?;
    let ev = hermitian_eigenvalues(&pt)?;
    Ok(ev.iter().filter(|&&l| l < 0.0).map(|l| -l).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Monotone {
    N0,
    N1,
    N2,
}

impl Monotone {
    pub fn as_str(self) -> &'static str {
        match self {
            Monotone::N0 => "N0",
            Monotone::N1 => "N1",
            Monotone::N2 => "N2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "N0" | "n0" => Some(Monotone::N0),
            "N1" | "n1" => Some(Monotone::N1),
            "N2" | "n2" => Some(Monotone::N2),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativityTriple {
    pub n0: f64,
    pub n1: f64,
    pub n2: f64,
}

impl NegativityTriple {
    pub fn get(&self, which: Monotone) -> f64 {
        match which {
            Monotone::N0 => self.n0,
            Monotone::N1 => self.n1,
            Monotone::N2 => self.n2,
        }
    }
}

fn geometric_mean(xs: &[f64]) -> f64 {
    let p: f64 = xs.iter().product();
    libm::pow(p, 1.0 / xs.len() as f64)
}

/// `N1` over the three balanced cuts, `N2` over the four single-qubit cuts,
/// `N0 = (N1³ N2⁴)^{1/7}`.
pub fn generalized_negativities(rho: &DensityMatrix) -> Result<NegativityTriple> {
    if rho.n_qubits() != N_QUBITS {
        return Err(Error::DimensionMismatch { expected: DIM, got: rho.dim() });
    }
    let balanced: Vec<f64> = BALANCED_CUTS.iter().map(|c| negativity(rho, c)).collect::<Result<_>>()?;
    let single: Vec<f64> = SINGLE_CUTS.iter().map(|c| negativity(rho, c)).collect::<Result<_>>()?;
    let n1 = geometric_mean(&balanced);
    let n2 = geometric_mean(&single);
    let n0 = libm::pow(libm::pow(n1, 3.0) * libm::pow(n2, 4.0), 1.0 / 7.0);
    Ok(NegativityTriple { n0, n1, n2 })
}

/// `J_a = Σ_j σ_a^{(j)}/2` on four qubits.
pub fn collective_spin(sigma: &ComplexMatrix) -> ComplexMatrix {
    (0..N_QUBITS)
        .map(|q| embed_single(sigma, q, N_QUBITS))
        .fold(ComplexMatrix::zeros(DIM, DIM), |acc, m| acc.add(&m))
        .scale(0.5)
}

pub fn witness_operator() -> ComplexMatrix {
    let jx = collective_spin(&ComplexMatrix::pauli_x());
    let jy = collective_spin(&ComplexMatrix::pauli_y());
    let offset = 3.5 + libm::sqrt(3.0);
    ComplexMatrix::identity(DIM).scale(offset).sub(&jx.matmul(&jx)).sub(&jy.matmul(&jy))
}

/// `Re Tr(W ρ)`; pseudostates are accepted.
pub fn witness_expectation(rho: &ComplexMatrix) -> Result<f64> {
    witness_expectation_with(&witness_operator(), rho)
}

pub fn witness_expectation_with(w: &ComplexMatrix, rho: &ComplexMatrix) -> Result<f64> {
    if rho.rows() != DIM || rho.cols() != DIM {
        return Err(Error::DimensionMismatch { expected: DIM, got: rho.rows() });
    }
    Ok(w.trace_product(rho).re)
}

/// Bisection root of `⟨W⟩` along `curve` on `[lo, hi]`.
pub fn witness_root(
    mut curve: impl FnMut(f64) -> Result<ComplexMatrix>,
    lo: f64,
    hi: f64,
) -> Result<f64> {
    let w = witness_operator();
    let mut value = |x: f64| -> Result<f64> { witness_expectation_with(&w, &curve(x)?) };
    let (mut a, mut b) = (lo, hi);
    let (mut fa, fb) = (value(a)?, value(b)?);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange);
    }
    while b - a > ROOT_TOL {
        let m = 0.5 * (a + b);
        let fm = value(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Noise level at which `⟨W⟩` changes sign along `α ↦ ρ(α)` on `[0, 1]`.
pub fn witness_threshold(curve: impl FnMut(f64) -> Result<DensityMatrix>) -> Result<f64> {
    let mut curve = curve;
    witness_root(|a| curve(a).map(DensityMatrix::into_matrix), 0.0, 1.0)
}
