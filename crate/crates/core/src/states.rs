//! Dicke states, mis-specified targets, white-noise mixtures, the model
//! families `M1` and `M2`, and the witness pseudostate.
//!
//! Qubit 0 is the leftmost ket symbol and the most significant bit of the
//! basis index, so `|1000⟩` is index 8.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::linalg::{kron_all, min_eigenvalue, ComplexMatrix, DensityMatrix, PSD_TOL, STATE_TOL};
use crate::measurement::{collective_correlator, Dataset, DesignId};
use crate::{Error, Result, DIM, N_QUBITS};

const NORM_TOL: f64 = 1e-12;

/// Unit-norm state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = libm::sqrt(amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>());
        if libm::fabs(norm - 1.0) > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        if !amplitudes.len().is_power_of_two() {
            return Err(Error::DimensionMismatch { expected: amplitudes.len().next_power_of_two(), got: amplitudes.len() });
        }
        Ok(Self { amplitudes })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes)
    }

    pub fn density_matrix(&self) -> DensityMatrix {
        DensityMatrix::new_unchecked(self.projector())
    }
}

fn check_excitations(k: u8) -> Result<()> {
    if k == 1 || k == 2 {
        Ok(())
    } else {
        Err(Error::InvalidExcitations(k))
    }
}

/// `|D₄ᵏ⟩`: equal real amplitudes on every weight-`k` basis state.
pub fn dicke_state(n_excitations: u8) -> Result<PureState> {
    target_state(n_excitations, 0.0)
}

/// Dicke state with phase `e^{iφ}` on every term where qubit 0 is excited.
pub fn target_state(n_excitations: u8, phi: f64) -> Result<PureState> {
    check_excitations(n_excitations)?;
    let support: Vec<usize> = (0..DIM).filter(|i| i.count_ones() == n_excitations as u32).collect();
    let amp = 1.0 / libm::sqrt(support.len() as f64);
    let phase = if phi == 0.0 { Complex64::new(1.0, 0.0) } else { Complex64::new(libm::cos(phi), libm::sin(phi)) };
    let first_qubit = 1usize << (N_QUBITS - 1);
    let mut amplitudes = alloc::vec![Complex64::new(0.0, 0.0); DIM];
    for i in support {
        amplitudes[i] = if i & first_qubit != 0 { phase * amp } else { Complex64::new(amp, 0.0) };
    }
    Ok(PureState { amplitudes })
}

/// `(1 − α)|ψ⟩⟨ψ| + α 𝟙/D`.
pub fn depolarize(psi: &PureState, alpha: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let d = psi.amplitudes.len();
    let mixed = ComplexMatrix::identity(d).scale(1.0 / d as f64);
    Ok(DensityMatrix::new_unchecked(psi.projector().lin_comb(1.0 - alpha, &mixed, alpha)))
}

/// Trace-one Hermitian matrix that need not be positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Pseudostate {
    matrix: ComplexMatrix,
}

impl Pseudostate {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        matrix.check_hermitian(STATE_TOL)?;
        let trace = matrix.trace().re;
        if libm::fabs(trace - 1.0) > STATE_TOL {
            return Err(Error::TraceNotOne { trace });
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn is_physical(&self) -> Result<bool> {
        Ok(min_eigenvalue(&self.matrix)? >= -PSD_TOL)
    }
}

/// `𝟙/16 + Σ c_w P_w` over the 30 Pauli words made of {σx, 𝟙} or of {σy, 𝟙}
/// (excluding 𝟙⊗⁴), with `c_w` the empirical correlator divided by 16.
pub fn pseudostate_from_counts(data: &Dataset) -> Result<Pseudostate> {
    if data.design != DesignId::CollectivePauli {
        return Err(Error::DesignMismatch);
    }
    let x = data.setting("x").ok_or(Error::MissingSetting("x"))?;
    let y = data.setting("y").ok_or(Error::MissingSetting("y"))?;
    let mut rho = ComplexMatrix::identity(DIM).scale(1.0 / DIM as f64);
    for (setting, pauli) in [(x, ComplexMatrix::pauli_x()), (y, ComplexMatrix::pauli_y())] {
        let shots = setting.shots();
        if shots == 0 {
            return Err(Error::MissingSetting(if setting.label == "x" { "x" } else { "y" }));
        }
        if setting.counts.len() != DIM {
            return Err(Error::DesignMismatch);
        }
        let freq: Vec<f64> = setting.counts.iter().map(|&n| n as f64 / shots as f64).collect();
        for subset in 1..DIM {
            let c = collective_correlator(&freq, subset) / DIM as f64;
            rho = rho.lin_comb(1.0, &pauli_word(&pauli, subset), c);
        }
    }
    Pseudostate::new(rho)
}

/// `⊗_q (σ if q ∈ subset else 𝟙)`, qubit `q` selected by bit `3 − q`.
pub fn pauli_word(sigma: &ComplexMatrix, subset: usize) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    let factors: Vec<&ComplexMatrix> = (0..N_QUBITS)
        .map(|q| if (subset >> (N_QUBITS - 1 - q)) & 1 == 1 { sigma } else { &id })
        .collect();
    kron_all(factors)
}

/// Fixed component mixed with the target in `M2`.
#[derive(Debug, Clone, PartialEq)]
pub enum Base {
    State(DensityMatrix),
    Pseudo(Pseudostate),
}

impl Base {
    pub fn matrix(&self) -> &ComplexMatrix {
        match self {
            Base::State(s) => s.matrix(),
            Base::Pseudo(p) => p.matrix(),
        }
    }

    pub fn is_pseudo(&self) -> bool {
        matches!(self, Base::Pseudo(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TargetSpec {
    Fixed(PureState),
    /// `target_state(k, φ)` with φ a free parameter.
    Phase(u8),
}

#[derive(Debug, Clone, PartialEq)]
pub enum FamilyKind {
    /// `(1 − q)|Ψ⟩⟨Ψ| + q 𝟙/D`, parameters `[q]`.
    M1,
    /// `(1 − ε)[(1 − q)B + q|Ψ⟩⟨Ψ|] + ε 𝟙/D`, parameters `[ε, q]`.
    M2(Base),
}

/// Outcome of evaluating a family at one parameter point.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub matrix: ComplexMatrix,
    /// Always true unless the base is a pseudostate and the result is not PSD.
    pub physical: bool,
}

/// Parametrized map from a short parameter vector to a 16×16 state.
///
/// When φ is variable it is appended as the last parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelFamily {
    kind: FamilyKind,
    target: TargetSpec,
}

impl ModelFamily {
    pub fn m1(target: PureState) -> Self {
        Self { kind: FamilyKind::M1, target: TargetSpec::Fixed(target) }
    }

    pub fn m2(target: PureState, base: Base) -> Self {
        Self { kind: FamilyKind::M2(base), target: TargetSpec::Fixed(target) }
    }

    /// Promotes the target phase to a parameter of `target_state(k, φ)`.
    pub fn with_variable_phase(self, n_excitations: u8) -> Result<Self> {
        check_excitations(n_excitations)?;
        Ok(Self { target: TargetSpec::Phase(n_excitations), ..self })
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn base(&self) -> Option<&Base> {
        match &self.kind {
            FamilyKind::M1 => None,
            FamilyKind::M2(b) => Some(b),
        }
    }

    pub fn has_variable_phase(&self) -> bool {
        matches!(self.target, TargetSpec::Phase(_))
    }

    /// Number of free parameters `K`.
    pub fn param_count(&self) -> usize {
        let base = match self.kind {
            FamilyKind::M1 => 1,
            FamilyKind::M2(_) => 2,
        };
        base + usize::from(self.has_variable_phase())
    }

    pub fn param_names(&self) -> Vec<&'static str> {
        let mut names = match self.kind {
            FamilyKind::M1 => alloc::vec!["q"],
            FamilyKind::M2(_) => alloc::vec!["epsilon", "q"],
        };
        if self.has_variable_phase() {
            names.push("phi");
        }
        names
    }

    /// Search box: `[0, 1]` for mixing weights, `[0, 2π)` for φ.
    pub fn param_bounds(&self) -> Vec<(f64, f64)> {
        let mut b = alloc::vec![(0.0, 1.0); self.param_count()];
        if self.has_variable_phase() {
            *b.last_mut().expect("non-empty") = (0.0, TAU);
        }
        b
    }

    pub fn check_params(&self, theta: &[f64]) -> Result<()> {
        let k = self.param_count();
        if theta.len() != k {
            return Err(Error::ParameterCount { expected: k, got: theta.len() });
        }
        let weights = if self.has_variable_phase() { k - 1 } else { k };
        for (index, &value) in theta.iter().enumerate() {
            let ok = if index < weights { (0.0..=1.0).contains(&value) } else { value.is_finite() };
            if !ok {
                return Err(Error::ParameterOutOfRange { index, value });
            }
        }
        Ok(())
    }

    /// Target state at the given parameters.
    pub fn target(&self, theta: &[f64]) -> Result<PureState> {
        match &self.target {
            TargetSpec::Fixed(t) => Ok(t.clone()),
            TargetSpec::Phase(k) => {
                let phi = *theta.last().ok_or(Error::ParameterCount { expected: self.param_count(), got: 0 })?;
                target_state(*k, phi)
            }
        }
    }

    /// Target at a given phase for variable-phase families; the fixed target otherwise.
    pub fn target_at_phase(&self, phi: f64) -> Result<PureState> {
        match &self.target {
            TargetSpec::Fixed(t) => Ok(t.clone()),
            TargetSpec::Phase(k) => target_state(*k, phi),
        }
    }

    /// Mixing weights `(w_base, w_target, w_mixed)` of the three components.
    pub fn weights(&self, theta: &[f64]) -> (f64, f64, f64) {
        match self.kind {
            FamilyKind::M1 => (0.0, 1.0 - theta[0], theta[0]),
            FamilyKind::M2(_) => {
                let (eps, q) = (theta[0], theta[1]);
                ((1.0 - eps) * (1.0 - q), (1.0 - eps) * q, eps)
            }
        }
    }

    pub fn evaluate(&self, theta: &[f64]) -> Result<Evaluation> {
        self.check_params(theta)?;
        let target = self.target(theta)?;
        let (wb, wt, wm) = self.weights(theta);
        let mixed = ComplexMatrix::identity(DIM).scale(1.0 / DIM as f64);
        let mut m = target.projector().lin_comb(wt, &mixed, wm);
        let mut physical = true;
        if let Some(base) = self.base() {
            m = m.lin_comb(1.0, base.matrix(), wb);
            if base.is_pseudo() {
                physical = min_eigenvalue(&m)? >= -PSD_TOL;
            }
        }
        Ok(Evaluation { matrix: m, physical })
    }

    /// The state at `theta`, or `None` where the family excludes the point.
    pub fn evaluate_state(&self, theta: &[f64]) -> Result<Option<DensityMatrix>> {
        let e = self.evaluate(theta)?;
        Ok(e.physical.then(|| DensityMatrix::new_unchecked(e.matrix)))
    }
}

/// PSD region of an M2 family over the `(ε, q)` unit square.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalityMap {
    pub axis: Vec<f64>,
    /// Row-major in `q`, with `ε` varying fastest.
    pub physical: Vec<bool>,
}

impl PhysicalityMap {
    pub fn get(&self, eps_index: usize, q_index: usize) -> bool {
        self.physical[q_index * self.axis.len() + eps_index]
    }

    pub fn fraction(&self) -> f64 {
        self.physical.iter().filter(|&&p| p).count() as f64 / self.physical.len() as f64
    }

    /// `(ε, q, physical)` triples in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64, bool)> + '_ {
        let n = self.axis.len();
        self.physical.iter().enumerate().map(move |(i, &p)| (self.axis[i % n], self.axis[i / n], p))
    }
}

/// Evaluates the PSD test of a fixed-phase M2 family on a regular grid.
///
/// Scaling by `1 − ε` and adding `ε𝟙/16` shifts the spectrum exactly, so only
/// one eigenvalue problem per `q` value is solved.
pub fn physicality_map(family: &ModelFamily, grid_step: f64) -> Result<PhysicalityMap> {
    if !(grid_step > 0.0 && grid_step <= 0.05) {
        return Err(Error::InvalidGridStep(grid_step));
    }
    if family.has_variable_phase() {
        return Err(Error::VariablePhaseUnsupported);
    }
    let base = family.base().ok_or(Error::ParameterCount { expected: 2, got: 1 })?;
    let projector = family.target(&[])?.projector();
    let n = libm::round(1.0 / grid_step) as usize;
    let axis: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let mut physical = Vec::with_capacity(axis.len() * axis.len());
    for &q in &axis {
        let lam = min_eigenvalue(&base.matrix().lin_comb(1.0 - q, &projector, q))?;
        physical.extend(axis.iter().map(|&eps| (1.0 - eps) * lam + eps / DIM as f64 >= -PSD_TOL));
    }
    Ok(PhysicalityMap { axis, physical })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::is_psd;
    use crate::measurement::collective_pauli_design;
    use core::f64::consts::PI;

    #[test]
    fn dicke_one_amplitudes() {
        let d = dicke_state(1).unwrap();
        for (i, a) in d.amplitudes().iter().enumerate() {
            let expected = if [1, 2, 4, 8].contains(&i) { 0.5 } else { 0.0 };
            assert_eq!(*a, Complex64::new(expected, 0.0));
        }
    }

    #[test]
    fn dicke_two_amplitudes() {
        let d = dicke_state(2).unwrap();
        let amp = 1.0 / 6f64.sqrt();
        for (i, a) in d.amplitudes().iter().enumerate() {
            let expected = if [3, 5, 6, 9, 10, 12].contains(&i) { amp } else { 0.0 };
            assert!((a - Complex64::new(expected, 0.0)).norm() < 1e-16);
        }
        assert_eq!(dicke_state(1).unwrap().inner(&d), Complex64::new(0.0, 0.0));
        assert_eq!(dicke_state(3), Err(Error::InvalidExcitations(3)));
    }

    #[test]
    fn target_phase_conventions() {
        assert_eq!(target_state(1, 0.0).unwrap(), dicke_state(1).unwrap());
        assert_eq!(target_state(2, 0.0).unwrap(), dicke_state(2).unwrap());
        let t = target_state(1, PI).unwrap();
        assert!((t.amplitudes()[8] - Complex64::new(-0.5, 0.0)).norm() < 1e-15);
        assert!((t.amplitudes()[4] - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        let t2 = target_state(2, PI / 2.0).unwrap();
        for i in [9, 10, 12] {
            assert!((t2.amplitudes()[i] - Complex64::new(0.0, 1.0 / 6f64.sqrt())).norm() < 1e-15);
        }
        for i in [3, 5, 6] {
            assert_eq!(t2.amplitudes()[i].im, 0.0);
        }
    }

    #[test]
    fn target_overlap_formula() {
        let d = dicke_state(1).unwrap();
        for phi in [0.0, 0.3, PI / 4.0, 2.0, PI] {
            let t = target_state(1, phi).unwrap();
            let direct = t.inner(&d).norm_sqr();
            // |3 + e^{iφ}|² / 16 from the four overlapping amplitudes
            let closed = ((3.0 + phi.cos()).powi(2) + phi.sin().powi(2)) / 16.0;
            assert!((direct - closed).abs() < 1e-14);
        }
    }

    #[test]
    fn depolarize_endpoints() {
        let psi = dicke_state(2).unwrap();
        assert!(depolarize(&psi, 0.0).unwrap().matrix().approx_eq(&psi.projector(), 0.0));
        assert!(depolarize(&psi, 1.0).unwrap().matrix().approx_eq(DensityMatrix::maximally_mixed(4).matrix(), 1e-16));
        assert_eq!(depolarize(&psi, 1.5), Err(Error::AlphaOutOfRange(1.5)));
        let rho = depolarize(&psi, 0.2).unwrap();
        assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());
    }

    #[test]
    fn m1_family() {
        let psi = dicke_state(2).unwrap();
        let m1 = ModelFamily::m1(psi.clone());
        assert_eq!(m1.param_count(), 1);
        assert!(m1.evaluate(&[0.0]).unwrap().matrix.approx_eq(&psi.projector(), 0.0));
        assert!(m1.evaluate(&[1.0]).unwrap().matrix.approx_eq(DensityMatrix::maximally_mixed(4).matrix(), 1e-16));
        let actual = depolarize(&psi, 0.2).unwrap();
        assert!(m1.evaluate(&[0.2]).unwrap().matrix.approx_eq(actual.matrix(), 1e-16));
        assert!(matches!(m1.evaluate(&[1.2]), Err(Error::ParameterOutOfRange { .. })));
        assert!(matches!(m1.evaluate(&[0.1, 0.1]), Err(Error::ParameterCount { .. })));
        let var = m1.with_variable_phase(2).unwrap();
        assert_eq!(var.param_count(), 2);
        assert_eq!(var.param_bounds()[1], (0.0, TAU));
    }

    #[test]
    fn m2_family_endpoints() {
        let psi = target_state(2, 0.7).unwrap();
        let base = depolarize(&dicke_state(2).unwrap(), 0.3).unwrap();
        let m2 = ModelFamily::m2(psi.clone(), Base::State(base.clone()));
        assert_eq!(m2.param_count(), 2);
        let e = m2.evaluate(&[1.0, 0.4]).unwrap();
        assert!(e.physical && e.matrix.approx_eq(DensityMatrix::maximally_mixed(4).matrix(), 1e-16));
        assert!(m2.evaluate(&[0.0, 1.0]).unwrap().matrix.approx_eq(&psi.projector(), 1e-16));
        assert!(m2.evaluate(&[0.0, 0.0]).unwrap().matrix.approx_eq(base.matrix(), 1e-16));
    }

    #[test]
    fn pseudostate_of_uniform_frequencies_is_maximally_mixed() {
        let design = collective_pauli_design();
        let data = design.expected_dataset(DensityMatrix::maximally_mixed(4).matrix(), 160).unwrap();
        let p = pseudostate_from_counts(&data).unwrap();
        assert!(p.matrix().approx_eq(DensityMatrix::maximally_mixed(4).matrix(), 1e-15));
    }

    #[test]
    fn pseudostate_errors() {
        let design = collective_pauli_design();
        let mut data = design.simulate(DensityMatrix::maximally_mixed(4).matrix(), 20, 1).unwrap();
        data.settings[1].label = alloc::string::String::from("z");
        assert_eq!(pseudostate_from_counts(&data), Err(Error::MissingSetting("y")));
        data.settings[1].label = alloc::string::String::from("y");
        data.settings[0].counts = alloc::vec![0; 16];
        assert_eq!(pseudostate_from_counts(&data), Err(Error::MissingSetting("x")));
    }

    #[test]
    fn pseudostate_m2_physicality_flag() {
        let design = collective_pauli_design();
        let actual = depolarize(&dicke_state(2).unwrap(), 0.2).unwrap();
        let data = design.simulate(actual.matrix(), 100, 5).unwrap();
        let obs = pseudostate_from_counts(&data).unwrap();
        let m2 = ModelFamily::m2(dicke_state(2).unwrap(), Base::Pseudo(obs.clone()));
        let e = m2.evaluate(&[0.0, 0.0]).unwrap();
        assert_eq!(e.physical, is_psd(obs.matrix(), PSD_TOL).unwrap());
        assert!(m2.evaluate(&[1.0, 0.5]).unwrap().physical);
        assert!(m2.evaluate(&[0.0, 1.0]).unwrap().physical);
    }

    #[test]
    fn physicality_map_agrees_with_direct_evaluation() {
        let design = collective_pauli_design();
        let actual = depolarize(&dicke_state(2).unwrap(), 0.2).unwrap();
        let data = design.simulate(actual.matrix(), 100, 9).unwrap();
        let m2 = ModelFamily::m2(dicke_state(2).unwrap(), Base::Pseudo(pseudostate_from_counts(&data).unwrap()));
        let map = physicality_map(&m2, 0.05).unwrap();
        assert_eq!(map.axis.len(), 21);
        for (eps, q, physical) in map.iter() {
            assert_eq!(physical, m2.evaluate(&[eps, q]).unwrap().physical, "eps={eps} q={q}");
        }
        assert!(map.get(20, 3) && map.get(0, 20));
        assert!(map.fraction() > 0.0 && map.fraction() < 1.0);
        assert_eq!(physicality_map(&m2, 0.2), Err(Error::InvalidGridStep(0.2)));
    }
}
