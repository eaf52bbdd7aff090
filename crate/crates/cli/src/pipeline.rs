//! The per-cell computations behind the experiments, checks and commands.

use qselect_core::bayes::{negativity_posterior, posterior_over_params, NegativityPosterior};
use qselect_core::entanglement::Monotone;
use qselect_core::inference::{
    compare_m1_m2, cross_model_base, rank_models, CrossModelConfig, CrossModelKind, FitConfig, RankingReport,
};
use qselect_core::linalg::DensityMatrix;
use qselect_core::measurement::{split_dataset, Dataset, MeasurementDesign};
use qselect_core::states::{
    depolarize, dicke_state, physicality_map, pseudostate_from_counts, target_state, Base, ModelFamily, PhysicalityMap,
};
use qselect_core::Result;

/// Offset between a cell's data seed and the seed of its train/validation split.
pub const SPLIT_SEED_OFFSET: u64 = 1000;
/// Offset between a cell's data seed and the seed of the additional data in
/// the direct M1/M2 comparison.
pub const EXTRA_SEED_OFFSET: u64 = 5000;

/// White-noise Dicke state `(1 − α)|D₄ᵏ⟩⟨D₄ᵏ| + α𝟙/16`.
pub fn rho_actual(excitations: u8, alpha: f64) -> Result<DensityMatrix> {
    depolarize(&dicke_state(excitations)?, alpha)
}

pub fn m1_family(excitations: u8, phi: f64, variable_phase: bool) -> Result<ModelFamily> {
    let family = ModelFamily::m1(target_state(excitations, phi)?);
    if variable_phase {
        family.with_variable_phase(excitations)
    } else {
        Ok(family)
    }
}

/// Ranks `M1` at phase `phi` against the FPM bound on the whole dataset.
pub fn rank_m1(
    design: &MeasurementDesign,
    data: &Dataset,
    excitations: u8,
    phi: f64,
    variable_phase: bool,
    cfg: &FitConfig,
) -> Result<RankingReport> {
    let family = m1_family(excitations, phi, variable_phase)?;
    rank_models(&[("M1".to_string(), family)], design, data, design.fpm_parameter_count(), cfg)
}

/// The single train/validation split of the cross-modeling protocol, with the
/// base state built from the training part.
pub struct CrossSplit {
    pub base: Base,
    pub validation: Dataset,
}

pub fn cross_split(
    kind: CrossModelKind,
    design: &MeasurementDesign,
    data: &Dataset,
    seed: u64,
    cfg: &CrossModelConfig,
) -> Result<CrossSplit> {
    for s in &data.settings {
        if s.shots() % 2 != 0 {
            return Err(qselect_core::Error::OddShotCount(s.shots()));
        }
    }
    let (train, validation) = split_dataset(data, cfg.train_fraction, seed.wrapping_add(SPLIT_SEED_OFFSET))?;
    let base = cross_model_base(kind, design, &train, cfg)?;
    Ok(CrossSplit { base, validation })
}

impl CrossSplit {
    pub fn family(&self, excitations: u8, phi: f64) -> Result<ModelFamily> {
        Ok(ModelFamily::m2(target_state(excitations, phi)?, self.base.clone()))
    }

    /// Ranks `M2` at phase `phi` on the validation part.
    pub fn rank(&self, design: &MeasurementDesign, excitations: u8, phi: f64, cfg: &FitConfig) -> Result<RankingReport> {
        let family = self.family(excitations, phi)?;
        rank_models(&[("M2".to_string(), family)], design, &self.validation, design.fpm_parameter_count(), cfg)
    }

    pub fn posterior(
        &self,
        design: &MeasurementDesign,
        excitations: u8,
        phi: f64,
        grid_step: f64,
        which: Monotone,
        bins: usize,
    ) -> Result<NegativityPosterior> {
        let family = self.family(excitations, phi)?;
        let grid = posterior_over_params(&family, design, &self.validation, grid_step)?;
        negativity_posterior(&grid, &family, which, bins)
    }
}

/// Posterior of a negativity monotone under `M1` at phase `phi`.
pub fn m1_posterior(
    design: &MeasurementDesign,
    data: &Dataset,
    excitations: u8,
    phi: f64,
    grid_step: f64,
    which: Monotone,
    bins: usize,
) -> Result<NegativityPosterior> {
    let family = m1_family(excitations, phi, false)?;
    let grid = posterior_over_params(&family, design, data, grid_step)?;
    negativity_posterior(&grid, &family, which, bins)
}

/// PSD region of `M2` built on the pseudostate of the whole witness dataset.
pub fn physmap(data: &Dataset, excitations: u8, phi: f64, grid_step: f64) -> Result<PhysicalityMap> {
    let family = ModelFamily::m2(target_state(excitations, phi)?, Base::Pseudo(pseudostate_from_counts(data)?));
    physicality_map(&family, grid_step)
}

/// `AIC(M1) − AIC(M2)` on `validation`, with the pseudostate of `M2` built
/// from `extra`; positive favours `M2`.
pub fn m2_advantage(
    design: &MeasurementDesign,
    validation: &Dataset,
    extra: &Dataset,
    excitations: u8,
    phi: f64,
    cfg: &FitConfig,
) -> Result<f64> {
    let target = target_state(excitations, phi)?;
    let m1 = ModelFamily::m1(target.clone());
    let m2 = ModelFamily::m2(target, Base::Pseudo(pseudostate_from_counts(extra)?));
    Ok(-compare_m1_m2(design, validation, &m1, &m2, cfg)?)
}
