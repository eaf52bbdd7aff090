//! Verification: deterministic oracles (`quick`) and the seed-ensemble
//! acceptance criteria (`full`). Every tolerance used here is a named constant.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::time::{Duration, Instant};

use qselect_core::entanglement::{
    generalized_negativities, negativity, witness_expectation, witness_root, witness_threshold, Monotone, BALANCED_CUTS,
    SINGLE_CUTS,
};
use qselect_core::inference::{
    aic, aicc, aicc_correction, approx_mle_state, fit_mle, fpm_loglik_upper_bound, FitConfig,
};
use qselect_core::linalg::{hermitian_eigenvalues, is_psd, ComplexMatrix, DensityMatrix};
use qselect_core::measurement::{collective_pauli_design, product_sic_design, MeasurementDesign};
use qselect_core::states::{depolarize, dicke_state, target_state, Base, ModelFamily, PureState};
use qselect_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::pipeline;

/// Published generalized negativities of `ρ(α = 0.2)` on `|D₄²⟩`.
pub const N0_REFERENCE: f64 = 0.4770;
pub const N1_REFERENCE: f64 = 0.6293;
pub const N2_REFERENCE: f64 = 0.3875;
pub const NEGATIVITY_TOL: f64 = 5e-4;
/// Published white-noise detection threshold of `W_Jxy`.
pub const THRESHOLD_REFERENCE: f64 = 0.1920;
pub const THRESHOLD_TOL: f64 = 1e-4;
/// Bisection resolution plus slack, for comparisons with the closed form.
pub const CLOSED_FORM_TOL: f64 = 1e-6;
pub const EXACT_TOL: f64 = 1e-12;
pub const COMPLETENESS_TOL: f64 = 1e-10;
pub const PHASE_ROOT_WINDOW: f64 = 0.05;
pub const SCHMIDT_TOL: f64 = 1e-9;
pub const N_SEEDS: u64 = 50;
pub const SIC_WIN_RATE: f64 = 0.95;
pub const SIC_SMALL_N_WIN_RATE: f64 = 0.80;
pub const WITNESS_WIN_RATE: f64 = 0.90;
pub const COVERAGE_RATE: f64 = 0.90;
pub const PHYSICAL_BAND: (f64, f64) = (0.65, 0.80);
pub const PHYSMAP_SEEDS: u64 = 10;
pub const RANDOM_DATASETS: u64 = 200;
pub const RRR_RUNS: u64 = 20;
pub const SCHMIDT_STATES: u64 = 100;
pub const QUICK_BUDGET: Duration = Duration::from_secs(10);

/// One pass/fail entry of a report.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckLine {
    pub name: String,
    pub value: f64,
    /// Human-readable acceptance rule, e.g. `0.4770 ± 5e-4`.
    pub rule: String,
    pub pass: bool,
}

impl CheckLine {
    fn near(name: &str, value: f64, expected: f64, tol: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            rule: format!("{expected} ± {tol:e}"),
            pass: (value - expected).abs() <= tol,
        }
    }

    fn at_least(name: &str, value: f64, min: f64) -> Self {
        Self { name: name.to_string(), value, rule: format!(">= {min}"), pass: value >= min }
    }

    fn at_most(name: &str, value: f64, max: f64) -> Self {
        Self { name: name.to_string(), value, rule: format!("<= {max:e}"), pass: value <= max }
    }

    fn positive(name: &str, value: f64) -> Self {
        Self { name: name.to_string(), value, rule: "> 0".to_string(), pass: value > 0.0 }
    }

    fn within(name: &str, value: f64, lo: f64, hi: f64) -> Self {
        Self { name: name.to_string(), value, rule: format!("in [{lo:.6}, {hi:.6}]"), pass: (lo..=hi).contains(&value) }
    }

    fn flag(name: &str, ok: bool, rule: &str) -> Self {
        Self { name: name.to_string(), value: f64::from(u8::from(ok)), rule: rule.to_string(), pass: ok }
    }

    fn error(name: &str, err: impl fmt::Display) -> Self {
        Self { name: name.to_string(), value: f64::NAN, rule: format!("error: {err}"), pass: false }
    }
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{status} {:<34} {:>14.8} ({})", self.name, self.value, self.rule)
    }
}

/// Result of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub lines: Vec<CheckLine>,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl CriterionReport {
    pub fn pass(&self) -> bool {
        self.lines.iter().all(|l| l.pass) && self.elapsed <= self.budget
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass() { "PASS" } else { "FAIL" };
        writeln!(
            f,
            "{status} criterion {} {} ({:.2} s, budget {} s)",
            self.id,
            self.title,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs()
        )?;
        for l in &self.lines {
            writeln!(f, "    {l}")?;
        }
        Ok(())
    }
}

/// Reference values the quick oracles compare against; overridable so corrupted
/// constants can be shown to fail.
#[derive(Debug, Clone, PartialEq)]
pub struct References {
    pub n0: f64,
    pub n1: f64,
    pub n2: f64,
    pub threshold: f64,
}

impl Default for References {
    fn default() -> Self {
        Self { n0: N0_REFERENCE, n1: N1_REFERENCE, n2: N2_REFERENCE, threshold: THRESHOLD_REFERENCE }
    }
}

impl References {
    /// Sets one value by name (`n0`, `n1`, `n2`, `threshold`).
    pub fn set(&mut self, name: &str, value: f64) -> bool {
        let slot = match name {
            "n0" => &mut self.n0,
            "n1" => &mut self.n1,
            "n2" => &mut self.n2,
            "threshold" => &mut self.threshold,
            _ => return false,
        };
        *slot = value;
        true
    }
}

fn rho_actual() -> DensityMatrix {
    depolarize(&dicke_state(2).expect("valid excitation"), 0.2).expect("valid alpha")
}

fn negativity_lines(refs: &References) -> Vec<CheckLine> {
    match generalized_negativities(&rho_actual()) {
        Ok(t) => vec![
            CheckLine::near("negativity_n0", t.n0, refs.n0, NEGATIVITY_TOL),
            CheckLine::near("negativity_n1", t.n1, refs.n1, NEGATIVITY_TOL),
            CheckLine::near("negativity_n2", t.n2, refs.n2, NEGATIVITY_TOL),
        ],
        Err(e) => vec![CheckLine::error("negativity", e)],
    }
}

fn threshold_lines(refs: &References) -> Vec<CheckLine> {
    let d2 = dicke_state(2).expect("valid excitation");
    match witness_threshold(|a| depolarize(&d2, a)) {
        Ok(t) => vec![
            CheckLine::near("witness_threshold", t, refs.threshold, THRESHOLD_TOL),
            CheckLine::near("witness_threshold_closed_form", t, (2.5 - 3f64.sqrt()) / 4.0, CLOSED_FORM_TOL),
        ],
        Err(e) => vec![CheckLine::error("witness_threshold", e)],
    }
}

fn aic_identity_lines() -> Vec<CheckLine> {
    let mut ok = true;
    for (l, k, n) in [(-1234.5, 1usize, 1000u64), (-50.25, 2, 100), (-7000.0, 30, 10000), (-4321.0, 255, 1000)] {
        ok &= aic(l, k) == -2.0 * l + 2.0 * k as f64;
        let kf = k as f64;
        ok &= aicc_correction(k, n) == 2.0 * kf * (kf + 1.0) / (n as f64 - kf - 1.0);
        ok &= aicc(l, k, n).map(|v| v == aic(l, k) + aicc_correction(k, n)).unwrap_or(false);
    }
    vec![
        CheckLine::flag("aic_identities", ok, "exact"),
        CheckLine::near("aicc_small_example", aicc(0.0, 1, 1000).unwrap_or(f64::NAN), 2.0 + 4.0 / 998.0, EXACT_TOL),
        CheckLine::near("aicc_fpm_correction_n1000", aicc_correction(255, 1000), 2.0 * 255.0 * 256.0 / 744.0, EXACT_TOL),
    ]
}

fn witness_value_lines() -> Vec<CheckLine> {
    let mixed = DensityMatrix::maximally_mixed(4);
    let d2 = dicke_state(2).expect("valid excitation");
    vec![
        CheckLine::near("witness_maximally_mixed", witness_expectation(mixed.matrix()).unwrap_or(f64::NAN), 1.5 + 3f64.sqrt(), EXACT_TOL),
        CheckLine::near("witness_dicke", witness_expectation(&d2.projector()).unwrap_or(f64::NAN), 3f64.sqrt() - 2.5, EXACT_TOL),
    ]
}

fn completeness_deviation(design: &MeasurementDesign) -> f64 {
    design
        .settings()
        .iter()
        .map(|s| s.povm.completeness().max_abs_diff(&ComplexMatrix::identity(16)))
        .fold(0.0, f64::max)
}

fn effects_psd(design: &MeasurementDesign) -> bool {
    design.settings().iter().all(|s| s.povm.effects().iter().all(|e| is_psd(e, COMPLETENESS_TOL).unwrap_or(false)))
}

fn povm_lines() -> Vec<CheckLine> {
    let (sic, wit) = (product_sic_design(), collective_pauli_design());
    vec![
        CheckLine::at_most("povm_completeness_sic", completeness_deviation(&sic), COMPLETENESS_TOL),
        CheckLine::at_most("povm_completeness_witness", completeness_deviation(&wit), COMPLETENESS_TOL),
        CheckLine::flag("povm_effects_psd", effects_psd(&sic) && effects_psd(&wit), "all effects PSD at 1e-10"),
    ]
}

/// The deterministic oracles run by `verify quick`.
pub fn quick_checks(refs: &References) -> Vec<CheckLine> {
    let start = Instant::now();
    let mut lines = negativity_lines(refs);
    let d2 = dicke_state(2).expect("valid excitation").density_matrix();
    lines.push(CheckLine::near("negativity_d2_single_cut", negativity(&d2, &[0]).unwrap_or(f64::NAN), 0.5, EXACT_TOL));
    lines.push(CheckLine::near("negativity_d2_balanced_cut", negativity(&d2, &[0, 1]).unwrap_or(f64::NAN), 5.0 / 6.0, EXACT_TOL));
    lines.extend(threshold_lines(refs));
    lines.extend(witness_value_lines());
    lines.extend(aic_identity_lines());
    lines.extend(povm_lines());
    let design = collective_pauli_design();
    let fit = design
        .expected_dataset(rho_actual().matrix(), 1 << 40)
        .and_then(|d| fit_mle(&ModelFamily::m1(dicke_state(2)?), &design, &d, &FitConfig::default()));
    lines.push(match fit {
        Ok(f) => CheckLine::near("m1_exact_data_fit", f.theta_hat[0], 0.2, FitConfig::default().refine_tol),
        Err(e) => CheckLine::error("m1_exact_data_fit", e),
    });
    lines.push(CheckLine::at_most("quick_runtime_seconds", start.elapsed().as_secs_f64(), QUICK_BUDGET.as_secs_f64()));
    lines
}

fn timed(id: u8, title: &'static str, budget_secs: u64, body: impl FnOnce() -> Vec<CheckLine>) -> CriterionReport {
    let start = Instant::now();
    let lines = body();
    CriterionReport { id, title, lines, elapsed: start.elapsed(), budget: Duration::from_secs(budget_secs) }
}

/// Acceptance criterion 1: negativities of the noisy Dicke state.
pub fn criterion_1() -> CriterionReport {
    timed(1, "negativity reproduction", 1, || negativity_lines(&References::default()))
}

/// Acceptance criterion 2: white-noise threshold of the witness.
pub fn criterion_2() -> CriterionReport {
    timed(2, "witness threshold", 1, || threshold_lines(&References::default()))
}

/// Acceptance criterion 3: the witness along the phase error.
pub fn criterion_3() -> CriterionReport {
    timed(3, "witness phase curve", 5, || {
        let mut lines = Vec::new();
        let root = witness_root(|phi| Ok(target_state(2, phi)?.projector()), 0.0, PI);
        lines.push(match root {
            Ok(r) => CheckLine::within("pure_phase_zero_crossing", r, PI / 3.0 - PHASE_ROOT_WINDOW, PI / 3.0 + PHASE_ROOT_WINDOW),
            Err(e) => CheckLine::error("pure_phase_zero_crossing", e),
        });
        let min = (0..180)
            .map(|i| {
                let phi = i as f64 * TAU / 180.0;
                let rho = depolarize(&target_state(2, phi)?, 0.2)?;
                witness_expectation(rho.matrix())
            })
            .collect::<qselect_core::Result<Vec<f64>>>()
            .map(|v| v.into_iter().fold(f64::INFINITY, f64::min));
        lines.push(match min {
            Ok(m) => CheckLine::positive("mixed_q0.2_min_over_phase", m),
            Err(e) => CheckLine::error("mixed_q0.2_min_over_phase", e),
        });
        lines
    })
}

/// Fraction of `flags` that are true.
fn rate(flags: &[bool]) -> f64 {
    flags.iter().filter(|&&b| b).count() as f64 / flags.len() as f64
}

fn wins(design: &MeasurementDesign, rho: &DensityMatrix, n: u64, excitations: u8, phi: f64) -> Vec<qselect_core::Result<bool>> {
    let cfg = FitConfig::default();
    (0..N_SEEDS)
        .into_par_iter()
        .map(|seed| {
            let data = design.simulate(rho.matrix(), n, seed)?;
            let r = pipeline::rank_m1(design, &data, excitations, phi, false, &cfg)?;
            Ok(r.models[0].neg_delta_aic() > 0.0)
        })
        .collect()
}

fn win_rate_line(name: &str, outcomes: Vec<qselect_core::Result<bool>>, min: f64, want_win: bool) -> CheckLine {
    match outcomes.into_iter().collect::<qselect_core::Result<Vec<bool>>>() {
        Ok(w) => {
            let flags: Vec<bool> = w.iter().map(|&x| x == want_win).collect();
            CheckLine::at_least(name, rate(&flags), min)
        }
        Err(e) => CheckLine::error(name, e),
    }
}

/// Acceptance criterion 4: sign pattern of `−ΔAIC` for product-SIC data.
///
/// The target family follows the single-excitation Dicke state, with data
/// drawn from its white-noise mixture at `α = 0.2`.
pub fn criterion_4() -> CriterionReport {
    timed(4, "AIC sign pattern, tomography", 300, || {
        let sic = product_sic_design();
        let rho = pipeline::rho_actual(1, 0.2).expect("valid state");
        vec![
            win_rate_line("sic_n10000_phi0_win_rate", wins(&sic, &rho, 10000, 1, 0.0), SIC_WIN_RATE, true),
            win_rate_line("sic_n10000_phi_pi/2_loss_rate", wins(&sic, &rho, 10000, 1, PI / 2.0), SIC_WIN_RATE, false),
            win_rate_line("sic_n1000_phi_pi/4_win_rate", wins(&sic, &rho, 1000, 1, PI / 4.0), SIC_SMALL_N_WIN_RATE, true),
        ]
    })
}

/// Acceptance criterion 5: sign pattern of `−ΔAIC` for witness data.
pub fn criterion_5() -> CriterionReport {
    timed(5, "AIC sign pattern, witness", 120, || {
        let wit = collective_pauli_design();
        let rho = rho_actual();
        vec![
            win_rate_line("witness_n1000_phi0_win_rate", wins(&wit, &rho, 1000, 2, 0.0), WITNESS_WIN_RATE, true),
            win_rate_line("witness_n1000_phi_pi/3_loss_rate", wins(&wit, &rho, 1000, 2, PI / 3.0), WITNESS_WIN_RATE, false),
        ]
    })
}

/// Seed-averaged physical fraction of the `(ε, q)` square at grid step 0.01.
pub fn mean_physical_fraction(n: u64, seeds: u64) -> qselect_core::Result<f64> {
    let wit = collective_pauli_design();
    let rho = rho_actual();
    let fractions = (0..seeds)
        .into_par_iter()
        .map(|seed| {
            let data = wit.simulate(rho.matrix(), n, seed)?;
            Ok(pipeline::physmap(&data, 2, 0.0, 0.01)?.fraction())
        })
        .collect::<qselect_core::Result<Vec<f64>>>()?;
    Ok(fractions.iter().sum::<f64>() / seeds as f64)
}

/// Acceptance criterion 6: size of the physical part of the pseudostate model.
pub fn criterion_6() -> CriterionReport {
    timed(6, "physicality map", 300, || {
        let mut lines = Vec::new();
        let mut means = Vec::new();
        for n in [100u64, 1000, 10000] {
            match mean_physical_fraction(n, PHYSMAP_SEEDS) {
                Ok(f) => {
                    lines.push(CheckLine::within(&format!("physical_fraction_n{n}"), f, PHYSICAL_BAND.0, PHYSICAL_BAND.1));
                    means.push(f);
                }
                Err(e) => lines.push(CheckLine::error(&format!("physical_fraction_n{n}"), e)),
            }
        }
        let increasing = means.len() == 3 && means.windows(2).all(|w| w[1] > w[0]);
        lines.push(CheckLine::flag("physical_area_grows_with_n", increasing, "strictly increasing in N"));
        lines
    })
}

/// Acceptance criterion 7: credible intervals of `N0` cover the true value.
pub fn criterion_7() -> CriterionReport {
    timed(7, "posterior consistency", 300, || {
        let wit = collective_pauli_design();
        let rho = rho_actual();
        let covered = (0..N_SEEDS)
            .into_par_iter()
            .map(|seed| {
                let data = wit.simulate(rho.matrix(), 1000, seed)?;
                let post = pipeline::m1_posterior(&wit, &data, 2, 0.0, 0.01, Monotone::N0, 50)?;
                Ok(post.contains(N0_REFERENCE))
            })
            .collect::<qselect_core::Result<Vec<bool>>>();
        vec![match covered {
            Ok(c) => CheckLine::at_least("n0_interval_coverage", rate(&c), COVERAGE_RATE),
            Err(e) => CheckLine::error("n0_interval_coverage", e),
        }]
    })
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Random four-qubit density matrix of rank at most `rank`.
pub fn random_density(rank: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let a = ComplexMatrix::from_fn(16, rank, |_, _| random_complex(rng));
    let m = a.matmul(&a.adjoint());
    let tr = m.trace().re;
    DensityMatrix::new(m.scale(1.0 / tr)).expect("Gram matrices are states")
}

pub fn random_pure(rng: &mut ChaCha8Rng) -> PureState {
    let v: Vec<Complex64> = (0..16).map(|_| random_complex(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    PureState::new(v.into_iter().map(|z| z / norm).collect()).expect("normalized")
}

/// Largest `L(θ̂) − bound` over fits of M1 and M2 on one random dataset.
fn bound_excess(index: u64) -> qselect_core::Result<(f64, bool)> {
    let mut rng = ChaCha8Rng::seed_from_u64(index);
    let design = if index.is_multiple_of(2) { product_sic_design() } else { collective_pauli_design() };
    let truth = random_density(rng.random_range(1..5), &mut rng);
    let n = 2 * rng.random_range(1..500u64);
    let data = design.simulate(truth.matrix(), n, index)?;
    let bound = fpm_loglik_upper_bound(&data)?;
    let k = rng.random_range(1..=2u8);
    let target = target_state(k, rng.random_range(0.0..TAU))?;
    let families = [
        ModelFamily::m1(target.clone()),
        ModelFamily::m2(target, Base::State(random_density(3, &mut rng))),
    ];
    let cfg = FitConfig { grid_step: 0.02, ..FitConfig::default() };
    let mut excess = f64::NEG_INFINITY;
    let mut identities = true;
    for f in &families {
        let fit = fit_mle(f, &design, &data, &cfg)?;
        excess = excess.max(fit.log_likelihood - bound);
        identities &= fit.aic == -2.0 * fit.log_likelihood + 2.0 * fit.k as f64;
        identities &= fit.aicc.is_none_or(|c| c == fit.aic + aicc_correction(fit.k, n));
    }
    Ok((excess, identities))
}

fn rrr_monotone(index: u64) -> qselect_core::Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(10_000 + index);
    let design = product_sic_design();
    let truth = random_density(rng.random_range(1..5), &mut rng);
    let data = design.simulate(truth.matrix(), 1000, index)?;
    let out = approx_mle_state(&design, &data, 300, 0.0)?;
    let monotone = out.history.windows(2).all(|w| w[1] >= w[0]);
    let physical = hermitian_eigenvalues(out.state.matrix())?[0] >= -1e-9;
    Ok(monotone && physical)
}

/// Acceptance criterion 8: exact identities and bounds on random inputs.
pub fn criterion_8() -> CriterionReport {
    timed(8, "structural identities", 60, || {
        let mut lines = aic_identity_lines();
        let results = (0..RANDOM_DATASETS).into_par_iter().map(bound_excess).collect::<qselect_core::Result<Vec<_>>>();
        match results {
            Ok(r) => {
                let worst = r.iter().map(|x| x.0).fold(f64::NEG_INFINITY, f64::max);
                lines.push(CheckLine::at_most("fpm_bound_excess_200_datasets", worst, 0.0));
                lines.push(CheckLine::flag("fit_aic_aicc_identities", r.iter().all(|x| x.1), "exact on every fit"));
            }
            Err(e) => lines.push(CheckLine::error("fpm_bound_excess_200_datasets", e)),
        }
        lines.extend(povm_lines());
        let rrr = (0..RRR_RUNS).into_par_iter().map(rrr_monotone).collect::<qselect_core::Result<Vec<bool>>>();
        lines.push(match rrr {
            Ok(v) => CheckLine::flag("rrr_monotone_20_runs", v.iter().all(|&b| b), "non-decreasing, PSD output"),
            Err(e) => CheckLine::error("rrr_monotone_20_runs", e),
        });
        lines
    })
}

/// `((Σ √λ)² − 1)/2` over the spectrum of the reduced state on `partition`.
pub fn schmidt_negativity(psi: &PureState, partition: &[usize]) -> qselect_core::Result<f64> {
    let complement: Vec<usize> = (0..4).filter(|q| !partition.contains(q)).collect();
    let bits = |index: usize, qubits: &[usize]| qubits.iter().fold(0, |acc, &q| (acc << 1) | ((index >> (3 - q)) & 1));
    let (rows, cols) = (1 << partition.len(), 1 << complement.len());
    let mut m = ComplexMatrix::zeros(rows, cols);
    for (index, &z) in psi.amplitudes().iter().enumerate() {
        m[(bits(index, partition), bits(index, &complement))] = z;
    }
    let reduced = m.matmul(&m.adjoint());
    let s: f64 = hermitian_eigenvalues(&reduced)?.iter().map(|l| l.max(0.0).sqrt()).sum();
    Ok((s * s - 1.0) / 2.0)
}

/// Acceptance criterion 9: partial-transpose negativity against the Schmidt formula.
pub fn criterion_9() -> CriterionReport {
    timed(9, "oracle equivalence", 60, || {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut worst: f64 = 0.0;
        for _ in 0..SCHMIDT_STATES {
            let psi = random_pure(&mut rng);
            let rho = psi.density_matrix();
            for cut in BALANCED_CUTS.iter().chain(SINGLE_CUTS.iter()) {
                let diff = match (negativity(&rho, cut), schmidt_negativity(&psi, cut)) {
                    (Ok(a), Ok(b)) => (a - b).abs(),
                    _ => f64::INFINITY,
                };
                worst = worst.max(diff);
            }
        }
        vec![CheckLine::at_most("max_schmidt_deviation", worst, SCHMIDT_TOL)]
    })
}

pub const CRITERIA: [fn() -> CriterionReport; 9] =
    [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9];

/// Every acceptance criterion, in order.
pub fn full_checks() -> Vec<CriterionReport> {
    CRITERIA.iter().map(|c| c()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_passes_with_reference_constants() {
        let lines = quick_checks(&References::default());
        let failed: Vec<_> = lines.iter().filter(|l| !l.pass).collect();
        assert!(failed.is_empty(), "{failed:?}");
    }

    #[test]
    fn tampered_constant_names_the_failing_check() {
        let mut refs = References::default();
        assert!(refs.set("n1", 0.63));
        let lines = quick_checks(&refs);
        let failed: Vec<&str> = lines.iter().filter(|l| !l.pass).map(|l| l.name.as_str()).collect();
        assert_eq!(failed, vec!["negativity_n1"]);
        assert!(!refs.set("n7", 0.0));
    }

    #[test]
    fn schmidt_formula_on_dicke_state() {
        let d2 = dicke_state(2).unwrap();
        assert!((schmidt_negativity(&d2, &[0]).unwrap() - 0.5).abs() < 1e-12);
        assert!((schmidt_negativity(&d2, &[0, 2]).unwrap() - 5.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn report_lines_render() {
        let l = CheckLine::near("x", 1.0, 1.0, 0.1);
        assert!(l.to_string().starts_with("PASS x"));
        assert!(CheckLine::error("y", "boom").to_string().starts_with("FAIL y"));
    }
}
