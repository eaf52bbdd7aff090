//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq`, then applies the
//! classical real Jacobi rotation. Sweeps run until the off-diagonal Frobenius
//! norm drops below `OFF_TOL · max(1, ‖A‖_F)`.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::{ComplexMatrix, HERMITIAN_TOL};
use crate::Result;

const OFF_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching unit eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl Eigen {
    /// `Σ λ_i v_i v_i^H`.
    pub fn recompose(&self) -> ComplexMatrix {
        let n = self.values.len();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| self.vectors[(i, k)] * self.vectors[(j, k)].conj() * self.values[k])
                .sum()
        })
    }
}

pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<Eigen> {
    let (values, vectors) = jacobi(m, true)?;
    Ok(sorted(values, vectors.expect("vectors requested")))
}

pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let (mut values, _) = jacobi(m, false)?;
    values.sort_by(f64::total_cmp);
    Ok(values)
}

pub fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    let (values, _) = jacobi(m, false)?;
    Ok(values.into_iter().fold(f64::INFINITY, f64::min))
}

fn sorted(values: Vec<f64>, vectors: ComplexMatrix) -> Eigen {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let vecs = ComplexMatrix::from_fn(n, n, |i, j| vectors[(i, order[j])]);
    Eigen { values: order.iter().map(|&k| values[k]).collect(), vectors: vecs }
}

fn off_diagonal_sq(a: &[Complex64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            s += a[i * n + j].norm_sqr();
        }
    }
    2.0 * s
}

fn jacobi(m: &ComplexMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<ComplexMatrix>)> {
    m.check_hermitian(HERMITIAN_TOL)?;
    let n = m.rows();
    // symmetrize so round-off in the input cannot bias the rotations
    let mut a: Vec<Complex64> = (0..n * n)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            (m[(i, j)] + m[(j, i)].conj()) * 0.5
        })
        .collect();
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));

    let frob: f64 = libm::sqrt(a.iter().map(|z| z.norm_sqr()).sum::<f64>());
    let threshold = OFF_TOL * frob.max(1.0);
    let threshold_sq = threshold * threshold;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_sq(&a, n) < threshold_sq {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[p * n + q];
                let abs_g = g.norm();
                if abs_g < 1e-300 {
                    continue;
                }
                let phase = g / abs_g;
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = (aqq - app) / (2.0 * abs_g);
                let t = if theta >= 0.0 {
                    1.0 / (theta + libm::sqrt(1.0 + theta * theta))
                } else {
                    -1.0 / (-theta + libm::sqrt(1.0 + theta * theta))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = t * c;
                // V = diag(1, conj(phase)) · [[c, s], [-s, c]]
                let vpp = Complex64::new(c, 0.0);
                let vpq = Complex64::new(s, 0.0);
                let vqp = -phase.conj() * s;
                let vqq = phase.conj() * c;

                // A ← A V
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * vpp + akq * vqp;
                    a[k * n + q] = akp * vpq + akq * vqq;
                }
                // A ← V^H A
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = vpp.conj() * apk + vqp.conj() * aqk;
                    a[q * n + k] = vpq.conj() * apk + vqq.conj() * aqk;
                }
                a[p * n + q] = Complex64::new(0.0, 0.0);
                a[q * n + p] = Complex64::new(0.0, 0.0);
                a[p * n + p] = Complex64::new(a[p * n + p].re, 0.0);
                a[q * n + q] = Complex64::new(a[q * n + q].re, 0.0);

                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * vpp + vkq * vqp;
                        v[(k, q)] = vkp * vpq + vkq * vqq;
                    }
                }
            }
        }
    }
    let values = (0..n).map(|i| a[i * n + i].re).collect();
    Ok((values, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;
    use alloc::vec;

    #[test]
    fn identity_spectrum() {
        assert_eq!(hermitian_eigenvalues(&ComplexMatrix::identity(4)).unwrap(), vec![1.0; 4]);
    }

    #[test]
    fn sigma_z_spectrum() {
        assert_eq!(hermitian_eigenvalues(&ComplexMatrix::pauli_z()).unwrap(), vec![-1.0, 1.0]);
    }

    #[test]
    fn sigma_y_spectrum_and_vectors() {
        let e = hermitian_eigen(&ComplexMatrix::pauli_y()).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);
        assert!(e.recompose().approx_eq(&ComplexMatrix::pauli_y(), 1e-14));
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::NonHermitianInput { .. })));
    }

    #[test]
    fn degenerate_and_zero_matrices() {
        assert_eq!(hermitian_eigenvalues(&ComplexMatrix::zeros(3, 3)).unwrap(), vec![0.0; 3]);
        let e = hermitian_eigen(&ComplexMatrix::identity(1)).unwrap();
        assert_eq!(e.values, vec![1.0]);
    }
}
