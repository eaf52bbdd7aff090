//! Measurement designs, Born-rule distributions and seeded datasets.
//!
//! Two designs are supported: one setting applying the tetrahedral SIC-POVM to
//! every qubit (256 joint outcomes), and two collective settings measuring all
//! spins along x or along y (16 outcomes each, half the shots each).
//!
//! Sampling uses ChaCha20 seeded with `seed_from_u64(seed)`; setting `s` of a
//! design draws from stream `s` of that generator.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::linalg::{kron_all, ComplexMatrix};
use crate::{Error, Result, DIM, N_QUBITS};

/// Probabilities below this are clamped to zero; below its negative an error.
pub const NEGATIVE_PROBABILITY_TOL: f64 = 1e-6;
/// Allowed deviation of `Σ p_k` from one.
pub const NORMALIZATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    effects: Vec<ComplexMatrix>,
    labels: Vec<String>,
}

impl Povm {
    pub fn new(effects: Vec<ComplexMatrix>, labels: Vec<String>) -> Result<Self> {
        if effects.len() != labels.len() || effects.is_empty() {
            return Err(Error::DimensionMismatch { expected: effects.len(), got: labels.len() });
        }
        let d = effects[0].rows();
        for e in &effects {
            if !e.is_square() || e.rows() != d {
                return Err(Error::DimensionMismatch { expected: d, got: e.rows() });
            }
        }
        Ok(Self { effects, labels })
    }

    pub fn effects(&self) -> &[ComplexMatrix] {
        &self.effects
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.effects[0].rows()
    }

    /// `Σ E_k`.
    pub fn completeness(&self) -> ComplexMatrix {
        let d = self.dim();
        self.effects.iter().fold(ComplexMatrix::zeros(d, d), |acc, e| acc.add(e))
    }

    /// Product POVM with the leftmost factor as the most significant outcome digit.
    pub fn tensor_power(&self, n: usize) -> Self {
        let k = self.len();
        let total = k.pow(n as u32);
        let mut effects = Vec::with_capacity(total);
        let mut labels = Vec::with_capacity(total);
        for idx in 0..total {
            let digits: Vec<usize> = (0..n).map(|q| (idx / k.pow((n - 1 - q) as u32)) % k).collect();
            effects.push(kron_all(digits.iter().map(|&d| &self.effects[d])));
            let mut label = String::new();
            for &d in &digits {
                label.push_str(&self.labels[d]);
            }
            labels.push(label);
        }
        Self { effects, labels }
    }
}

/// The single-qubit SIC-POVM `E_k = (𝟙 + r_k·σ)/4` on the regular tetrahedron.
pub fn sic_povm_qubit() -> Povm {
    let r = 1.0 / libm::sqrt(3.0);
    let bloch = [[r, r, r], [r, -r, -r], [-r, r, -r], [-r, -r, r]];
    let (id, x, y, z) = (
        ComplexMatrix::identity(2),
        ComplexMatrix::pauli_x(),
        ComplexMatrix::pauli_y(),
        ComplexMatrix::pauli_z(),
    );
    let effects = bloch
        .iter()
        .map(|b| id.add(&x.scale(b[0])).add(&y.scale(b[1])).add(&z.scale(b[2])).scale(0.25))
        .collect();
    let labels = (0..4).map(|k| alloc::format!("{k}")).collect();
    Povm { effects, labels }
}

fn pauli_basis_povm(axis: Axis) -> Povm {
    let s = FRAC_1_SQRT_2;
    let (plus, minus) = match axis {
        Axis::X => (
            [Complex64::new(s, 0.0), Complex64::new(s, 0.0)],
            [Complex64::new(s, 0.0), Complex64::new(-s, 0.0)],
        ),
        Axis::Y => (
            [Complex64::new(s, 0.0), Complex64::new(0.0, s)],
            [Complex64::new(s, 0.0), Complex64::new(0.0, -s)],
        ),
    };
    Povm {
        effects: vec![ComplexMatrix::outer(&plus), ComplexMatrix::outer(&minus)],
        labels: vec![String::from("+"), String::from("-")],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn pauli(self) -> ComplexMatrix {
        match self {
            Axis::X => ComplexMatrix::pauli_x(),
            Axis::Y => ComplexMatrix::pauli_y(),
        }
    }
}

/// Spin eigenvalue `±1` of qubit `qubit` in collective outcome `outcome`.
///
/// Bit `3 - qubit` of the outcome index is 0 for `+` and 1 for `-`.
pub fn collective_sign(outcome: usize, qubit: usize) -> f64 {
    if (outcome >> (N_QUBITS - 1 - qubit)) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DesignId {
    /// One setting, SIC-POVM on each qubit.
    ProductSic,
    /// Two settings, all spins along x or all along y.
    CollectivePauli,
}

impl DesignId {
    pub fn as_str(self) -> &'static str {
        match self {
            DesignId::ProductSic => "product_sic",
            DesignId::CollectivePauli => "collective_pauli",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "product_sic" => Some(DesignId::ProductSic),
            "collective_pauli" => Some(DesignId::CollectivePauli),
            _ => None,
        }
    }

    pub fn design(self) -> MeasurementDesign {
        match self {
            DesignId::ProductSic => product_sic_design(),
            DesignId::CollectivePauli => collective_pauli_design(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Setting {
    pub label: String,
    pub povm: Povm,
    /// Fraction of all shots spent on this setting.
    pub allocation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementDesign {
    id: DesignId,
    settings: Vec<Setting>,
}

impl MeasurementDesign {
    /// Custom design; allocations must sum to one and POVMs share a dimension.
    pub fn from_settings(id: DesignId, settings: Vec<Setting>) -> Result<Self> {
        let total: f64 = settings.iter().map(|s| s.allocation).sum();
        if settings.is_empty() || libm::fabs(total - 1.0) > NORMALIZATION_TOL {
            return Err(Error::InvalidDistribution);
        }
        let d = settings[0].povm.dim();
        if let Some(s) = settings.iter().find(|s| s.povm.dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: s.povm.dim() });
        }
        Ok(Self { id, settings })
    }

    pub fn id(&self) -> DesignId {
        self.id
    }

    pub fn settings(&self) -> &[Setting] {
        &self.settings
    }

    /// Number of independent outcome frequencies, `Σ (outcomes − 1)`.
    pub fn fpm_parameter_count(&self) -> usize {
        self.settings.iter().map(|s| s.povm.len() - 1).sum()
    }

    /// Exact integer shot allocation of `total` shots.
    pub fn shots_per_setting(&self, total: u64) -> Result<Vec<u64>> {
        let shots: Vec<u64> = self
            .settings
            .iter()
            .map(|s| libm::round(s.allocation * total as f64) as u64)
            .collect();
        if shots.iter().sum::<u64>() != total
            || self.settings.iter().zip(&shots).any(|(s, &n)| libm::fabs(s.allocation * total as f64 - n as f64) > 1e-9)
        {
            return Err(Error::OddShotCount(total));
        }
        Ok(shots)
    }

    /// Born distributions of every setting.
    pub fn probabilities(&self, rho: &ComplexMatrix) -> Result<Vec<Vec<f64>>> {
        self.settings.iter().map(|s| born_probabilities(rho, &s.povm)).collect()
    }

    pub fn check(&self, data: &Dataset) -> Result<()> {
        if data.design != self.id || data.settings.len() != self.settings.len() {
            return Err(Error::DesignMismatch);
        }
        for (s, c) in self.settings.iter().zip(&data.settings) {
            if s.povm.len() != c.counts.len() {
                return Err(Error::DesignMismatch);
            }
        }
        Ok(())
    }

    /// Draws `total_shots` shots from `rho`, split evenly over the settings.
    pub fn simulate(&self, rho: &ComplexMatrix, total_shots: u64, seed: u64) -> Result<Dataset> {
        let shots = self.shots_per_setting(total_shots)?;
        let mut settings = Vec::with_capacity(self.settings.len());
        for (stream, (s, &n)) in self.settings.iter().zip(&shots).enumerate() {
            let p = born_probabilities(rho, &s.povm)?;
            let counts = sample_counts_stream(&p, n, seed, stream as u64)?;
            settings.push(SettingCounts { label: s.label.clone(), counts });
        }
        Ok(Dataset { design: self.id, seed, settings })
    }

    /// Counts proportional to the exact Born probabilities, rounded by largest
    /// remainder so that each setting totals `shots_per_setting`.
    pub fn expected_dataset(&self, rho: &ComplexMatrix, shots_per_setting: u64) -> Result<Dataset> {
        let mut settings = Vec::with_capacity(self.settings.len());
        for s in &self.settings {
            let p = born_probabilities(rho, &s.povm)?;
            settings.push(SettingCounts { label: s.label.clone(), counts: round_counts(&p, shots_per_setting) });
        }
        Ok(Dataset { design: self.id, seed: 0, settings })
    }
}

fn round_counts(p: &[f64], shots: u64) -> Vec<u64> {
    let n = shots as f64;
    let mut counts: Vec<u64> = p.iter().map(|&x| libm::floor(x * n) as u64).collect();
    let assigned: u64 = counts.iter().sum();
    let mut remainders: Vec<(usize, f64)> =
        p.iter().enumerate().map(|(k, &x)| (k, x * n - libm::floor(x * n))).collect();
    remainders.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    for &(k, _) in remainders.iter().take(shots.saturating_sub(assigned) as usize) {
        counts[k] += 1;
    }
    counts
}

/// The four-qubit product SIC design (one setting, 256 outcomes).
pub fn product_sic_design() -> MeasurementDesign {
    MeasurementDesign {
        id: DesignId::ProductSic,
        settings: vec![Setting {
            label: String::from("sic"),
            povm: sic_povm_qubit().tensor_power(N_QUBITS),
            allocation: 1.0,
        }],
    }
}

/// All spins along x, then all spins along y; half the shots each.
pub fn collective_pauli_design() -> MeasurementDesign {
    let settings = [(Axis::X, "x"), (Axis::Y, "y")]
        .into_iter()
        .map(|(axis, label)| Setting {
            label: String::from(label),
            povm: pauli_basis_povm(axis).tensor_power(N_QUBITS),
            allocation: 0.5,
        })
        .collect();
    MeasurementDesign { id: DesignId::CollectivePauli, settings }
}

/// `p_k = Re Tr(ρ E_k)`, with tiny negative values clamped to zero.
pub fn born_probabilities(rho: &ComplexMatrix, povm: &Povm) -> Result<Vec<f64>> {
    let mut p = raw_born_probabilities(rho, povm)?;
    for (index, x) in p.iter_mut().enumerate() {
        if *x < -NEGATIVE_PROBABILITY_TOL {
            return Err(Error::NegativeProbability { index, value: *x });
        }
        if *x < 0.0 {
            *x = 0.0;
        }
    }
    Ok(p)
}

/// `Re Tr(ρ E_k)` without clamping; pseudostates may give negative entries.
pub fn raw_born_probabilities(rho: &ComplexMatrix, povm: &Povm) -> Result<Vec<f64>> {
    if !rho.is_square() || rho.rows() != povm.dim() {
        return Err(Error::DimensionMismatch { expected: povm.dim(), got: rho.rows() });
    }
    Ok(povm.effects.iter().map(|e| rho.trace_product(e).re).collect())
}

fn validate_distribution(p: &[f64]) -> Result<()> {
    if p.is_empty() || p.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::InvalidDistribution);
    }
    let total: f64 = p.iter().sum();
    if libm::fabs(total - 1.0) > NORMALIZATION_TOL {
        return Err(Error::InvalidDistribution);
    }
    Ok(())
}

/// Multinomial draw of `shots` outcomes from `probabilities`.
pub fn sample_counts(probabilities: &[f64], shots: u64, seed: u64) -> Result<Vec<u64>> {
    sample_counts_stream(probabilities, shots, seed, 0)
}

/// Like [`sample_counts`], drawing from ChaCha20 stream `stream`.
pub fn sample_counts_stream(probabilities: &[f64], shots: u64, seed: u64, stream: u64) -> Result<Vec<u64>> {
    validate_distribution(probabilities)?;
    let mut cumulative = Vec::with_capacity(probabilities.len());
    let mut acc = 0.0;
    for &p in probabilities {
        acc += p;
        cumulative.push(acc);
    }
    // the last outcome with nonzero mass absorbs round-off in the total
    let last = probabilities.iter().rposition(|&p| p > 0.0).ok_or(Error::InvalidDistribution)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut counts = vec![0u64; probabilities.len()];
    for _ in 0..shots {
        let u = rng.random::<f64>() * acc;
        let k = cumulative.partition_point(|&c| c <= u).min(last);
        counts[k] += 1;
    }
    Ok(counts)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SettingCounts {
    pub label: String,
    pub counts: Vec<u64>,
}

impl SettingCounts {
    pub fn shots(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Outcome counts per setting of one design.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub design: DesignId,
    pub seed: u64,
    pub settings: Vec<SettingCounts>,
}

impl Dataset {
    pub fn total_shots(&self) -> u64 {
        self.settings.iter().map(SettingCounts::shots).sum()
    }

    pub fn setting(&self, label: &str) -> Option<&SettingCounts> {
        self.settings.iter().find(|s| s.label == label)
    }

    /// Elementwise sum with another dataset of the same design.
    pub fn merged(&self, other: &Dataset) -> Result<Dataset> {
        if self.design != other.design || self.settings.len() != other.settings.len() {
            return Err(Error::DesignMismatch);
        }
        let settings = self
            .settings
            .iter()
            .zip(&other.settings)
            .map(|(a, b)| {
                if a.label != b.label || a.counts.len() != b.counts.len() {
                    return Err(Error::DesignMismatch);
                }
                let counts = a.counts.iter().zip(&b.counts).map(|(x, y)| x + y).collect();
                Ok(SettingCounts { label: a.label.clone(), counts })
            })
            .collect::<Result<_>>()?;
        Ok(Dataset { design: self.design, seed: self.seed, settings })
    }
}

/// Shot-level random split; per setting `floor(fraction · shots)` shots go to
/// the first part.
///
/// Shots are iid, so a uniformly random subset of the record is distributed
/// like its first half.
pub fn split_dataset(d: &Dataset, fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidFraction(fraction));
    }
    let mut first = Vec::with_capacity(d.settings.len());
    let mut second = Vec::with_capacity(d.settings.len());
    for (stream, s) in d.settings.iter().enumerate() {
        let shots = s.shots();
        if shots < 2 {
            return Err(Error::TooFewShots { setting: stream, shots });
        }
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream as u64);
        let take = libm::floor(fraction * shots as f64) as u64;
        let (a, b) = select_subset(&s.counts, take, &mut rng);
        first.push(SettingCounts { label: s.label.clone(), counts: a });
        second.push(SettingCounts { label: s.label.clone(), counts: b });
    }
    Ok((
        Dataset { design: d.design, seed, settings: first },
        Dataset { design: d.design, seed, settings: second },
    ))
}

/// Selection sampling over the shot record: each shot joins the subset with
/// probability `needed / remaining`.
fn select_subset(counts: &[u64], take: u64, rng: &mut ChaCha20Rng) -> (Vec<u64>, Vec<u64>) {
    let mut remaining: u64 = counts.iter().sum();
    let mut needed = take;
    let mut chosen = vec![0u64; counts.len()];
    for (k, &n) in counts.iter().enumerate() {
        for _ in 0..n {
            if needed > 0 && rng.random_range(0..remaining) < needed {
                chosen[k] += 1;
                needed -= 1;
            }
            remaining -= 1;
        }
    }
    let rest = counts.iter().zip(&chosen).map(|(n, c)| n - c).collect();
    (chosen, rest)
}

/// Expands counts into a shuffled shot record (outcome index per shot).
pub fn shot_record(counts: &[u64], seed: u64) -> Vec<usize> {
    let mut record: Vec<usize> =
        counts.iter().enumerate().flat_map(|(k, &n)| core::iter::repeat_n(k, n as usize)).collect();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    record.shuffle(&mut rng);
    record
}

/// `Σ_o p_o · (Σ_j s_j(o)/2)^2`: second moment of the collective spin from the
/// outcome distribution of a collective setting.
pub fn collective_second_moment(p: &[f64]) -> f64 {
    p.iter()
        .enumerate()
        .map(|(o, &po)| {
            let j: f64 = (0..N_QUBITS).map(|q| collective_sign(o, q)).sum::<f64>() / 2.0;
            po * j * j
        })
        .sum()
}

/// Empirical correlator `⟨⊗_{q∈S} σ⟩` of a collective setting; qubit `q` is in
/// `subset` when bit `3 - q` is set.
pub fn collective_correlator(freq: &[f64], subset: usize) -> f64 {
    debug_assert_eq!(freq.len(), DIM);
    freq.iter()
        .enumerate()
        .map(|(o, &f)| {
            let sign: f64 = (0..N_QUBITS)
                .filter(|&q| (subset >> (N_QUBITS - 1 - q)) & 1 == 1)
                .map(|q| collective_sign(o, q))
                .product();
            f * sign
        })
        .sum()
}
