//! Multinomial likelihoods, maximum-likelihood fits of model families, the
//! full-parameter likelihood bound, AIC/AICc, the RρR iteration and the
//! cross-modeling protocols.
//!
//! Fits are deterministic: a coarse grid over the parameter box followed by
//! cyclic golden-section refinement along each axis.

use alloc::string::String;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::f64::consts::{PI, TAU};

use crate::linalg::{min_eigenvalue, ComplexMatrix, DensityMatrix, PSD_TOL};
use crate::measurement::{born_probabilities, raw_born_probabilities, split_dataset, Dataset, MeasurementDesign, Povm};
use crate::states::{pseudostate_from_counts, Base, ModelFamily, PureState};
use crate::sum::KahanSum;
use crate::{Error, Result, DIM};

/// Log-likelihood of data the model cannot produce (or of excluded points).
pub const LOG_ZERO: f64 = f64::NEG_INFINITY;

const INV_GOLDEN: f64 = 0.618_033_988_749_894_9;
const MAX_REFINE_CYCLES: usize = 100;

/// Grid resolution and refinement tolerance of [`fit_mle`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitConfig {
    /// Grid step for mixing weights in `[0, 1]`.
    pub grid_step: f64,
    /// Grid step for a variable phase in `[0, 2π)`.
    pub phi_step: f64,
    pub refine_tol: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self { grid_step: 0.01, phi_step: PI / 180.0, refine_tol: 1e-6 }
    }
}

impl FitConfig {
    fn validate(&self) -> Result<()> {
        if !(self.grid_step > 0.0 && self.grid_step <= 0.05) {
            return Err(Error::InvalidGridStep(self.grid_step));
        }
        if !(self.phi_step > 0.0 && self.phi_step <= TAU) {
            return Err(Error::InvalidGridStep(self.phi_step));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub theta_hat: Vec<f64>,
    /// Maximized log-likelihood `L_M` in nats.
    pub log_likelihood: f64,
    pub k: usize,
    pub aic: f64,
    /// `None` when `N ≤ K + 1`.
    pub aicc: Option<f64>,
    pub n: u64,
}

impl FitResult {
    pub fn new(theta_hat: Vec<f64>, log_likelihood: f64, k: usize, n: u64) -> Self {
        Self { theta_hat, log_likelihood, k, aic: aic(log_likelihood, k), aicc: aicc(log_likelihood, k, n).ok(), n }
    }
}

/// `−2 L_M + 2K`.
pub fn aic(log_likelihood: f64, k: usize) -> f64 {
    -2.0 * log_likelihood + 2.0 * k as f64
}

/// `−2 L_M + 2K + 2K(K+1)/(N − K − 1)`.
pub fn aicc(log_likelihood: f64, k: usize, n: u64) -> Result<f64> {
    if n <= k as u64 + 1 {
        return Err(Error::SampleTooSmall { n, k });
    }
    Ok(aic(log_likelihood, k) + aicc_correction(k, n))
}

pub fn aicc_correction(k: usize, n: u64) -> f64 {
    let k = k as f64;
    2.0 * k * (k + 1.0) / (n as f64 - k - 1.0)
}

/// `Σ n_k ln p_k` with `0·ln p = 0`; a zero or negative `p_k` under a positive
/// count gives [`LOG_ZERO`].
pub fn multinomial_log_likelihood(probabilities: &[Vec<f64>], data: &Dataset) -> f64 {
    let mut acc = KahanSum::default();
    for (p, s) in probabilities.iter().zip(&data.settings) {
        for (&pk, &nk) in p.iter().zip(&s.counts) {
            if nk == 0 {
                continue;
            }
            if pk <= 0.0 {
                return LOG_ZERO;
            }
            acc.add(nk as f64 * libm::log(pk));
        }
    }
    acc.value()
}

/// Log-likelihood of `family` at `theta`, evaluated through the full density
/// matrix. Unphysical pseudostate points give [`LOG_ZERO`].
pub fn log_likelihood(family: &ModelFamily, theta: &[f64], design: &MeasurementDesign, data: &Dataset) -> Result<f64> {
    design.check(data)?;
    let e = family.evaluate(theta)?;
    if !e.physical {
        return Ok(LOG_ZERO);
    }
    let probabilities = design.probabilities(&e.matrix)?;
    Ok(multinomial_log_likelihood(&probabilities, data))
}

/// `Σ n_k ln(n_k / N_setting)`: no model on this design can do better.
pub fn fpm_loglik_upper_bound(data: &Dataset) -> Result<f64> {
    if data.settings.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut acc = KahanSum::default();
    for s in &data.settings {
        let shots = s.shots();
        if shots == 0 {
            return Err(Error::EmptyDataset);
        }
        let total = shots as f64;
        for &n in s.counts.iter().filter(|&&n| n > 0) {
            let n = n as f64;
            acc.add(n * libm::log(n / total));
        }
    }
    Ok(acc.value())
}

fn target_probabilities(target: &PureState, povms: &[&Povm]) -> Vec<Vec<f64>> {
    povms
        .iter()
        .map(|povm| povm.effects().iter().map(|e| e.expectation(target.amplitudes()).re).collect())
        .collect()
}

type EigKey = (f64, f64);
type PhaseEntry = (f64, PureState, Vec<Vec<f64>>);

/// Likelihood of one family on one dataset with the component Born
/// distributions precomputed; the family is affine in its mixing weights.
pub struct LikelihoodSurface<'a> {
    family: &'a ModelFamily,
    data: &'a Dataset,
    povms: Vec<&'a Povm>,
    p_mixed: Vec<Vec<f64>>,
    p_base: Option<Vec<Vec<f64>>>,
    fixed_target: Option<(PureState, Vec<Vec<f64>>)>,
    phase_cache: RefCell<Option<PhaseEntry>>,
    eig_cache: RefCell<Option<(EigKey, f64)>>,
}

impl<'a> LikelihoodSurface<'a> {
    pub fn new(family: &'a ModelFamily, design: &'a MeasurementDesign, data: &'a Dataset) -> Result<Self> {
        design.check(data)?;
        let povms: Vec<&Povm> = design.settings().iter().map(|s| &s.povm).collect();
        if povms.iter().any(|p| p.dim() != DIM) {
            return Err(Error::DimensionMismatch { expected: DIM, got: povms[0].dim() });
        }
        let mixed = ComplexMatrix::identity(DIM).scale(1.0 / DIM as f64);
        let p_mixed = povms.iter().map(|p| born_probabilities(&mixed, p)).collect::<Result<_>>()?;
        let p_base = match family.base() {
            None => None,
            Some(b) => Some(povms.iter().map(|p| raw_born_probabilities(b.matrix(), p)).collect::<Result<_>>()?),
        };
        let fixed_target = if family.has_variable_phase() {
            None
        } else {
            let t = family.target(&[])?;
            let p = target_probabilities(&t, &povms);
            Some((t, p))
        };
        Ok(Self {
            family,
            data,
            povms,
            p_mixed,
            p_base,
            fixed_target,
            phase_cache: RefCell::new(None),
            eig_cache: RefCell::new(None),
        })
    }

    fn phase_of(&self, theta: &[f64]) -> f64 {
        if self.family.has_variable_phase() {
            theta[theta.len() - 1]
        } else {
            0.0
        }
    }

    fn with_target<R>(&self, phi: f64, f: impl FnOnce(&PureState, &[Vec<f64>]) -> R) -> Result<R> {
        if let Some((t, p)) = &self.fixed_target {
            return Ok(f(t, p));
        }
        let mut cache = self.phase_cache.borrow_mut();
        let stale = !matches!(&*cache, Some((cached, _, _)) if *cached == phi);
        if stale {
            let t = self.family.target_at_phase(phi)?;
            let p = target_probabilities(&t, &self.povms);
            *cache = Some((phi, t, p));
        }
        let (_, t, p) = cache.as_ref().expect("filled above");
        Ok(f(t, p))
    }

    /// `λ_min((1 − q)B + q|Ψ⟩⟨Ψ|)`; the spectrum of the full M2 state is this
    /// shifted by `ε/16` after scaling by `1 − ε`.
    fn core_min_eigenvalue(&self, q: f64, phi: f64) -> Result<f64> {
        let key = (q, phi);
        if let Some((k, v)) = *self.eig_cache.borrow() {
            if k == key {
                return Ok(v);
            }
        }
        let base = self.family.base().expect("pseudostate families have a base");
        let m = self.with_target(phi, |t, _| base.matrix().lin_comb(1.0 - q, &t.projector(), q))?;
        let v = min_eigenvalue(&m)?;
        *self.eig_cache.borrow_mut() = Some((key, v));
        Ok(v)
    }

    /// Whether `theta` lies in the model (always, unless the base is a pseudostate).
    pub fn is_physical(&self, theta: &[f64]) -> Result<bool> {
        match self.family.base() {
            Some(Base::Pseudo(_)) => {
                let (eps, q) = (theta[0], theta[1]);
                let lam = self.core_min_eigenvalue(q, self.phase_of(theta))?;
                Ok((1.0 - eps) * lam + eps / DIM as f64 >= -PSD_TOL)
            }
            _ => Ok(true),
        }
    }

    pub fn log_likelihood(&self, theta: &[f64]) -> Result<f64> {
        self.family.check_params(theta)?;
        if !self.is_physical(theta)? {
            return Ok(LOG_ZERO);
        }
        let (wb, wt, wm) = self.family.weights(theta);
        let phi = self.phase_of(theta);
        self.with_target(phi, |_, p_target| {
            let mut acc = KahanSum::default();
            for (s, setting) in self.data.settings.iter().enumerate() {
                for (k, &n) in setting.counts.iter().enumerate() {
                    if n == 0 {
                        continue;
                    }
                    let mut p = wt * p_target[s][k] + wm * self.p_mixed[s][k];
                    if let Some(pb) = &self.p_base {
                        p += wb * pb[s][k];
                    }
                    if p <= 0.0 {
                        return LOG_ZERO;
                    }
                    acc.add(n as f64 * libm::log(p));
                }
            }
            acc.value()
        })
    }
}

struct Axis {
    lo: f64,
    hi: f64,
    step: f64,
    periodic: bool,
}

impl Axis {
    fn points(&self) -> Vec<f64> {
        if self.periodic {
            let n = libm::round((self.hi - self.lo) / self.step).max(1.0) as usize;
            (0..n).map(|i| self.lo + (self.hi - self.lo) * i as f64 / n as f64).collect()
        } else {
            let n = libm::round((self.hi - self.lo) / self.step).max(1.0) as usize;
            (0..=n).map(|i| self.lo + (self.hi - self.lo) * i as f64 / n as f64).collect()
        }
    }
}

fn axes_for(family: &ModelFamily, cfg: &FitConfig) -> Vec<Axis> {
    let k = family.param_count();
    family
        .param_bounds()
        .into_iter()
        .enumerate()
        .map(|(i, (lo, hi))| {
            let periodic = family.has_variable_phase() && i == k - 1;
            Axis { lo, hi, step: if periodic { cfg.phi_step } else { cfg.grid_step }, periodic }
        })
        .collect()
}

/// Calls `f` on every grid point; the first axis varies fastest.
fn for_each_grid_point(axes: &[Vec<f64>], mut f: impl FnMut(&[f64]) -> Result<()>) -> Result<()> {
    let mut idx = alloc::vec![0usize; axes.len()];
    let mut theta: Vec<f64> = axes.iter().map(|a| a[0]).collect();
    loop {
        f(&theta)?;
        let mut d = 0;
        loop {
            if d == axes.len() {
                return Ok(());
            }
            idx[d] += 1;
            if idx[d] < axes[d].len() {
                theta[d] = axes[d][idx[d]];
                break;
            }
            idx[d] = 0;
            theta[d] = axes[d][0];
            d += 1;
        }
    }
}

/// Maximizes `f` on `[a, b]` by golden-section search.
fn golden_max(mut f: impl FnMut(f64) -> Result<f64>, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)> {
    let mut c = b - INV_GOLDEN * (b - a);
    let mut d = a + INV_GOLDEN * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_GOLDEN * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_GOLDEN * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc >= fd { (c, fc) } else { (d, fd) })
}

fn wrap_phase(phi: f64) -> f64 {
    let r = phi % TAU;
    if r < 0.0 {
        r + TAU
    } else {
        r
    }
}

/// Grid scan plus cyclic golden-section refinement of the likelihood.
pub fn fit_mle(family: &ModelFamily, design: &MeasurementDesign, data: &Dataset, cfg: &FitConfig) -> Result<FitResult> {
    cfg.validate()?;
    let surface = LikelihoodSurface::new(family, design, data)?;
    let axes = axes_for(family, cfg);
    let grids: Vec<Vec<f64>> = axes.iter().map(Axis::points).collect();

    let mut best_theta: Vec<f64> = grids.iter().map(|g| g[0]).collect();
    let mut best = LOG_ZERO;
    let mut any_finite = false;
    for_each_grid_point(&grids, |theta| {
        let l = surface.log_likelihood(theta)?;
        if l > best || (!any_finite && l.is_finite()) {
            any_finite |= l.is_finite();
            best = l;
            best_theta.copy_from_slice(theta);
        }
        Ok(())
    })?;
    if !any_finite {
        return Err(Error::AllPointsExcluded);
    }

    let mut theta = best_theta;
    let inner_tol = cfg.refine_tol / 4.0;
    for _ in 0..MAX_REFINE_CYCLES {
        let mut max_change = 0.0f64;
        for (i, axis) in axes.iter().enumerate() {
            let x0 = theta[i];
            let (a, b) = if axis.periodic {
                (x0 - axis.step, x0 + axis.step)
            } else {
                ((x0 - axis.step).max(axis.lo), (x0 + axis.step).min(axis.hi))
            };
            let mut probe = theta.clone();
            let (x, fx) = golden_max(
                |x| {
                    probe[i] = if axis.periodic { wrap_phase(x) } else { x };
                    surface.log_likelihood(&probe)
                },
                a,
                b,
                inner_tol,
            )?;
            // the bracket endpoints are candidates too (boundary optima)
            let mut cand = (x, fx);
            for end in [a, b] {
                probe[i] = if axis.periodic { wrap_phase(end) } else { end };
                let fe = surface.log_likelihood(&probe)?;
                if fe > cand.1 {
                    cand = (end, fe);
                }
            }
            if cand.1 > best {
                let x = if axis.periodic { wrap_phase(cand.0) } else { cand.0 };
                let delta = if axis.periodic {
                    let d = libm::fabs(x - x0) % TAU;
                    d.min(TAU - d)
                } else {
                    libm::fabs(x - x0)
                };
                max_change = max_change.max(delta);
                theta[i] = x;
                best = cand.1;
            }
        }
        if max_change < cfg.refine_tol {
            break;
        }
    }
    Ok(FitResult::new(theta, best, family.param_count(), data.total_shots()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedModel {
    pub name: String,
    pub fit: FitResult,
    /// `AIC(model) − AIC(FPM bound)`; negative means the model is preferred.
    pub delta_aic: f64,
}

impl RankedModel {
    /// `AIC(FPM) − AIC(model)`; positive means the model is preferred.
    pub fn neg_delta_aic(&self) -> f64 {
        -self.delta_aic
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingReport {
    pub models: Vec<RankedModel>,
    pub fpm_loglik_bound: f64,
    pub fpm_k: usize,
    pub fpm_aic: f64,
    pub fpm_aicc: Option<f64>,
}

/// Fits every family and compares it with the full-parameter model, whose
/// likelihood is replaced by [`fpm_loglik_upper_bound`].
pub fn rank_models(
    families: &[(String, ModelFamily)],
    design: &MeasurementDesign,
    data: &Dataset,
    fpm_k: usize,
    cfg: &FitConfig,
) -> Result<RankingReport> {
    design.check(data)?;
    let bound = fpm_loglik_upper_bound(data)?;
    let fpm_aic = aic(bound, fpm_k);
    let models = families
        .iter()
        .map(|(name, family)| {
            let fit = fit_mle(family, design, data, cfg)?;
            let delta_aic = fit.aic - fpm_aic;
            Ok(RankedModel { name: name.clone(), fit, delta_aic })
        })
        .collect::<Result<_>>()?;
    Ok(RankingReport { models, fpm_loglik_bound: bound, fpm_k, fpm_aic, fpm_aicc: aicc(bound, fpm_k, data.total_shots()).ok() })
}

/// Result of the RρR iteration.
#[derive(Debug, Clone)]
pub struct MleApproximation {
    pub state: DensityMatrix,
    pub log_likelihood: f64,
    pub iterations: usize,
    /// Log-likelihood after each accepted step, starting with the initial state.
    pub history: Vec<f64>,
}

fn rrr_operator(rho: &ComplexMatrix, design: &MeasurementDesign, data: &Dataset, total: f64) -> Result<(ComplexMatrix, f64)> {
    let mut r = ComplexMatrix::zeros(DIM, DIM);
    let mut acc = KahanSum::default();
    for (setting, counts) in design.settings().iter().zip(&data.settings) {
        for (e, &n) in setting.povm.effects().iter().zip(&counts.counts) {
            if n == 0 {
                continue;
            }
            let p = rho.trace_product(e).re;
            if p <= 0.0 {
                return Ok((r, LOG_ZERO));
            }
            acc.add(n as f64 * libm::log(p));
            r = r.lin_comb(1.0, e, n as f64 / (total * p));
        }
    }
    Ok((r, acc.value()))
}

fn conjugate_normalized(a: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    let m = a.matmul(rho).matmul(a);
    let herm = m.add(&m.adjoint()).scale(0.5);
    let tr = herm.trace().re;
    herm.scale(1.0 / tr)
}

fn state_loglik(rho: &ComplexMatrix, design: &MeasurementDesign, data: &Dataset) -> Result<f64> {
    let p: Vec<Vec<f64>> = design.settings().iter().map(|s| raw_born_probabilities(rho, &s.povm)).collect::<Result<_>>()?;
    Ok(multinomial_log_likelihood(&p, data))
}

/// Fixed-point iteration `ρ ← 𝒩[R(ρ) ρ R(ρ)]` from `𝟙/16`, with
/// `R = Σ_k (n_k/N)/p_k E_k`.
///
/// A step that would lower the likelihood is retried with the diluted operator
/// `(𝟙 + tR)/(1 + t)` for decreasing `t`; if no dilution helps the iteration
/// stops. It also stops once the gain of an accepted step is below `tol`.
pub fn approx_mle_state(design: &MeasurementDesign, train: &Dataset, max_iters: usize, tol: f64) -> Result<MleApproximation> {
    design.check(train)?;
    let total = train.total_shots() as f64;
    if total == 0.0 {
        return Err(Error::EmptyDataset);
    }
    let id = ComplexMatrix::identity(DIM);
    let mut rho = DensityMatrix::maximally_mixed(4).into_matrix();
    let (mut r, mut l) = rrr_operator(&rho, design, train, total)?;
    let mut history = alloc::vec![l];
    let mut iterations = 0;
    while iterations < max_iters {
        let mut accepted = None;
        let mut t = f64::INFINITY;
        while t > 1e-6 {
            let step = if t.is_infinite() { r.clone() } else { id.lin_comb(1.0 / (1.0 + t), &r, t / (1.0 + t)) };
            let candidate = conjugate_normalized(&step, &rho);
            let lc = state_loglik(&candidate, design, train)?;
            if lc >= l {
                accepted = Some((candidate, lc));
                break;
            }
            t = if t.is_infinite() { 1.0 } else { t / 2.0 };
        }
        let Some((candidate, lc)) = accepted else { break };
        iterations += 1;
        let gain = lc - l;
        rho = candidate;
        debug_assert!(lc >= l);
        let next = rrr_operator(&rho, design, train, total)?;
        r = next.0;
        l = next.1;
        history.push(l);
        if gain < tol {
            break;
        }
    }
    Ok(MleApproximation { state: DensityMatrix::new_unchecked(rho), log_likelihood: l, iterations, history })
}

/// How the cross-modeling base state is built from the training half.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossModelKind {
    /// RρR approximation of the MLE state (product SIC design).
    Sic,
    /// Witness pseudostate (collective design).
    Witness,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossModelConfig {
    pub fit: FitConfig,
    pub mle_max_iters: usize,
    pub mle_tol: f64,
    pub train_fraction: f64,
}

impl Default for CrossModelConfig {
    fn default() -> Self {
        Self { fit: FitConfig::default(), mle_max_iters: 2000, mle_tol: 1e-8, train_fraction: 0.5 }
    }
}

/// Builds the cross-modeling base from training data.
pub fn cross_model_base(kind: CrossModelKind, design: &MeasurementDesign, train: &Dataset, cfg: &CrossModelConfig) -> Result<Base> {
    Ok(match kind {
        CrossModelKind::Sic => Base::State(approx_mle_state(design, train, cfg.mle_max_iters, cfg.mle_tol)?.state),
        CrossModelKind::Witness => Base::Pseudo(pseudostate_from_counts(train)?),
    })
}

/// Splits `data` once, builds `M2` from the training part, and ranks it
/// against the FPM bound on the validation part.
pub fn cross_model_protocol(
    kind: CrossModelKind,
    design: &MeasurementDesign,
    data: &Dataset,
    target: &PureState,
    seed: u64,
    cfg: &CrossModelConfig,
) -> Result<RankingReport> {
    for (setting, s) in data.settings.iter().enumerate() {
        if s.shots() % 2 != 0 {
            return Err(Error::OddShotCount(s.shots()));
        }
        if s.shots() < 2 {
            return Err(Error::TooFewShots { setting, shots: s.shots() });
        }
    }
    let (train, validation) = split_dataset(data, cfg.train_fraction, seed)?;
    let base = cross_model_base(kind, design, &train, cfg)?;
    let m2 = ModelFamily::m2(target.clone(), base);
    rank_models(&[(String::from("M2"), m2)], design, &validation, design.fpm_parameter_count(), &cfg.fit)
}

/// `AIC(M2) − AIC(M1)` on one validation set; negative favours `M2`.
pub fn compare_m1_m2(
    design: &MeasurementDesign,
    validation: &Dataset,
    m1: &ModelFamily,
    m2: &ModelFamily,
    cfg: &FitConfig,
) -> Result<f64> {
    let f1 = fit_mle(m1, design, validation, cfg)?;
    let f2 = fit_mle(m2, design, validation, cfg)?;
    Ok(f2.aic - f1.aic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::{collective_pauli_design, product_sic_design, DesignId, SettingCounts};
    use crate::states::{depolarize, dicke_state, target_state};
    use alloc::vec;

    fn toy_dataset(counts: Vec<u64>) -> Dataset {
        Dataset { design: DesignId::ProductSic, seed: 0, settings: vec![SettingCounts { label: String::from("sic"), counts }] }
    }

    #[test]
    fn uniform_counts_likelihood() {
        let data = toy_dataset(vec![25, 25, 25, 25]);
        let l = multinomial_log_likelihood(&[vec![0.25; 4]], &data);
        assert!((l - 100.0 * 0.25f64.ln()).abs() < 1e-12);
        assert!((l + 138.629).abs() < 1e-3);
        assert!((fpm_loglik_upper_bound(&data).unwrap() - l).abs() < 1e-12);
    }

    #[test]
    fn zero_probability_on_observed_outcome() {
        let data = toy_dataset(vec![1, 3, 0, 0]);
        assert_eq!(multinomial_log_likelihood(&[vec![0.0, 1.0, 0.0, 0.0]], &data), LOG_ZERO);
        // unobserved zero-probability outcomes are harmless
        let l = multinomial_log_likelihood(&[vec![0.5, 0.5, 0.0, 0.0]], &data);
        assert!((l - 4.0 * 0.5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn fpm_bound_cases() {
        assert_eq!(fpm_loglik_upper_bound(&toy_dataset(vec![100, 0, 0, 0])).unwrap(), 0.0);
        assert_eq!(fpm_loglik_upper_bound(&toy_dataset(vec![0, 0, 0, 0])), Err(Error::EmptyDataset));
    }

    #[test]
    fn aicc_arithmetic() {
        assert!((aicc(0.0, 1, 1000).unwrap() - (2.0 + 4.0 / 998.0)).abs() < 1e-15);
        assert!((aicc(0.0, 1, 1000).unwrap() - 2.004008).abs() < 1e-6);
        assert!((aicc_correction(255, 1000) - 2.0 * 255.0 * 256.0 / 744.0).abs() < 1e-12);
        assert!((aicc_correction(255, 1000) - 175.48).abs() < 0.01);
        assert_eq!(aicc(-3.0, 0, 10).unwrap(), aic(-3.0, 0));
        assert_eq!(aicc(0.0, 3, 4), Err(Error::SampleTooSmall { n: 4, k: 3 }));
        assert_eq!(aic(-10.0, 2), 24.0);
    }

    #[test]
    fn grid_step_validation() {
        let design = product_sic_design();
        let data = design.simulate(DensityMatrix::maximally_mixed(4).matrix(), 10, 1).unwrap();
        let m1 = ModelFamily::m1(dicke_state(1).unwrap());
        let cfg = FitConfig { grid_step: 0.1, ..FitConfig::default() };
        assert_eq!(fit_mle(&m1, &design, &data, &cfg), Err(Error::InvalidGridStep(0.1)));
    }

    #[test]
    fn design_mismatch_detected() {
        let data = collective_pauli_design().simulate(DensityMatrix::maximally_mixed(4).matrix(), 10, 1).unwrap();
        let m1 = ModelFamily::m1(dicke_state(1).unwrap());
        assert_eq!(log_likelihood(&m1, &[0.5], &product_sic_design(), &data), Err(Error::DesignMismatch));
    }

    #[test]
    fn surface_matches_dense_evaluation() {
        let design = collective_pauli_design();
        let actual = depolarize(&dicke_state(2).unwrap(), 0.2).unwrap();
        let data = design.simulate(actual.matrix(), 200, 3).unwrap();
        let obs = pseudostate_from_counts(&data).unwrap();
        for family in [
            ModelFamily::m1(target_state(2, 0.4).unwrap()),
            ModelFamily::m2(target_state(2, 0.4).unwrap(), Base::Pseudo(obs.clone())),
            ModelFamily::m1(dicke_state(2).unwrap()).with_variable_phase(2).unwrap(),
        ] {
            let s = LikelihoodSurface::new(&family, &design, &data).unwrap();
            let points: &[&[f64]] = match family.param_count() {
                1 => &[&[0.0], &[0.3], &[1.0]],
                _ => &[&[0.1, 0.2], &[0.5, 0.9], &[0.9, 0.1], &[0.0, 0.0]],
            };
            for theta in points {
                let dense = log_likelihood(&family, theta, &design, &data).unwrap();
                let fast = s.log_likelihood(theta).unwrap();
                if dense.is_finite() || fast.is_finite() {
                    assert!((dense - fast).abs() < 1e-9 * dense.abs().max(1.0), "{theta:?}: {dense} vs {fast}");
                }
            }
        }
    }

    #[test]
    fn exact_data_fit_recovers_noise() {
        let design = product_sic_design();
        let psi = dicke_state(1).unwrap();
        let m1 = ModelFamily::m1(psi.clone());
        let cfg = FitConfig::default();
        for q in [0.1, 0.2, 0.5] {
            let data = design.expected_dataset(depolarize(&psi, q).unwrap().matrix(), 1u64 << 50).unwrap();
            let fit = fit_mle(&m1, &design, &data, &cfg).unwrap();
            assert!((fit.theta_hat[0] - q).abs() < cfg.refine_tol, "{q}: {:?}", fit.theta_hat);
            assert_eq!(fit.k, 1);
            assert_eq!(fit.aic, -2.0 * fit.log_likelihood + 2.0);
        }
    }

    #[test]
    fn maximally_mixed_truth_fits_to_boundary() {
        let design = product_sic_design();
        let data = design.expected_dataset(DensityMatrix::maximally_mixed(4).matrix(), 1 << 20).unwrap();
        let fit = fit_mle(&ModelFamily::m1(dicke_state(2).unwrap()), &design, &data, &FitConfig::default()).unwrap();
        assert!((fit.theta_hat[0] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn variable_phase_bookkeeping() {
        let design = product_sic_design();
        let psi = dicke_state(1).unwrap();
        let data = design.simulate(depolarize(&psi, 0.2).unwrap().matrix(), 2000, 8).unwrap();
        let fixed = ModelFamily::m1(target_state(1, PI / 2.0).unwrap());
        let var = fixed.clone().with_variable_phase(1).unwrap();
        let cfg = FitConfig::default();
        let f1 = fit_mle(&fixed, &design, &data, &cfg).unwrap();
        let f2 = fit_mle(&var, &design, &data, &cfg).unwrap();
        assert_eq!((f1.k, f2.k), (1, 2));
        assert!(f2.log_likelihood >= f1.log_likelihood);
        let phi = f2.theta_hat[1];
        assert!(phi.min(TAU - phi) < 0.3, "{phi}");
    }

    #[test]
    fn witness_m2_fit_stays_physical() {
        let design = collective_pauli_design();
        let actual = depolarize(&dicke_state(2).unwrap(), 0.2).unwrap();
        let data = design.simulate(actual.matrix(), 400, 21).unwrap();
        let (train, val) = split_dataset(&data, 0.5, 1).unwrap();
        let m2 = ModelFamily::m2(dicke_state(2).unwrap(), Base::Pseudo(pseudostate_from_counts(&train).unwrap()));
        let fit = fit_mle(&m2, &design, &val, &FitConfig::default()).unwrap();
        let e = m2.evaluate(&fit.theta_hat).unwrap();
        assert!(fit.log_likelihood.is_finite());
        assert!(min_eigenvalue(&e.matrix).unwrap() >= -1e-8);
    }

    #[test]
    fn rrr_fixed_point_on_uniform_data() {
        let design = product_sic_design();
        let data = design.expected_dataset(DensityMatrix::maximally_mixed(4).matrix(), 256 * 4).unwrap();
        let out = approx_mle_state(&design, &data, 100, 1e-10).unwrap();
        assert!(out.state.matrix().approx_eq(DensityMatrix::maximally_mixed(4).matrix(), 1e-14));
        assert!(out.iterations <= 1);
    }

    #[test]
    fn rrr_improves_and_stays_physical() {
        let design = product_sic_design();
        let actual = depolarize(&dicke_state(1).unwrap(), 0.2).unwrap();
        let data = design.simulate(actual.matrix(), 1000, 5).unwrap();
        let out = approx_mle_state(&design, &data, 300, 1e-9).unwrap();
        assert!(out.history.windows(2).all(|w| w[1] >= w[0]));
        assert!(out.log_likelihood > out.history[0]);
        assert!(out.log_likelihood <= fpm_loglik_upper_bound(&data).unwrap());
        assert!(DensityMatrix::new(out.state.matrix().clone()).is_ok());
    }

    #[test]
    fn identical_families_rank_identically() {
        let design = product_sic_design();
        let data = design.simulate(depolarize(&dicke_state(1).unwrap(), 0.2).unwrap().matrix(), 500, 2).unwrap();
        let m = ModelFamily::m1(target_state(1, 0.3).unwrap());
        let report = rank_models(
            &[(String::from("a"), m.clone()), (String::from("b"), m.clone())],
            &design,
            &data,
            255,
            &FitConfig::default(),
        )
        .unwrap();
        assert_eq!(report.models[0].fit.aic, report.models[1].fit.aic);
        assert!(report.fpm_loglik_bound >= report.models[0].fit.log_likelihood);
        assert_eq!(compare_m1_m2(&design, &data, &m, &m, &FitConfig::default()).unwrap(), 0.0);
    }
}
