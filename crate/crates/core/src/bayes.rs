//! Grid posteriors over model parameters under a uniform prior on `[0, 1]^K`,
//! and their pushforward to the generalized negativities.

use alloc::vec::Vec;

use crate::entanglement::{generalized_negativities, Monotone};
use crate::inference::LikelihoodSurface;
use crate::measurement::{Dataset, MeasurementDesign};
use crate::states::ModelFamily;
use crate::{Error, Result};

/// Lower and upper tail mass outside the central credible interval.
pub const CREDIBLE_TAIL: f64 = 0.025;

/// Posterior weights on a regular grid; the first axis varies fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorGrid {
    axes: Vec<Vec<f64>>,
    weights: Vec<f64>,
    excluded: Vec<bool>,
}

fn axis_points(step: f64) -> Vec<f64> {
    let n = libm::round(1.0 / step).max(1.0) as usize;
    (0..=n).map(|i| i as f64 / n as f64).collect()
}

impl PosteriorGrid {
    /// Normalizes `exp(L − max L)` over the non-excluded points.
    pub fn from_log_likelihoods(axes: Vec<Vec<f64>>, log_likelihoods: &[f64], excluded: Vec<bool>) -> Result<Self> {
        let total: usize = axes.iter().map(Vec::len).product();
        if log_likelihoods.len() != total || excluded.len() != total {
            return Err(Error::DimensionMismatch { expected: total, got: log_likelihoods.len() });
        }
        let max = log_likelihoods
            .iter()
            .zip(&excluded)
            .filter(|(l, &x)| !x && l.is_finite())
            .map(|(l, _)| *l)
            .fold(f64::NEG_INFINITY, f64::max);
        if !max.is_finite() {
            return Err(Error::AllZeroWeights);
        }
        let mut weights: Vec<f64> = log_likelihoods
            .iter()
            .zip(&excluded)
            .map(|(&l, &x)| if x || !l.is_finite() { 0.0 } else { libm::exp(l - max) })
            .collect();
        let sum: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= sum;
        }
        Ok(Self { axes, weights, excluded })
    }

    pub fn axes(&self) -> &[Vec<f64>] {
        &self.axes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn excluded(&self) -> &[bool] {
        &self.excluded
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Parameter vector of grid point `index`.
    pub fn point(&self, index: usize) -> Vec<f64> {
        let mut rest = index;
        self.axes
            .iter()
            .map(|a| {
                let v = a[rest % a.len()];
                rest /= a.len();
                v
            })
            .collect()
    }

    pub fn mode(&self) -> Vec<f64> {
        let (best, _) = self
            .weights
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &w)| if w > acc.1 { (i, w) } else { acc });
        self.point(best)
    }

    /// Posterior mean of parameter `axis`.
    pub fn mean(&self, axis: usize) -> f64 {
        (0..self.len()).map(|i| self.weights[i] * self.point(i)[axis]).sum()
    }

    pub fn variance(&self, axis: usize) -> f64 {
        let m = self.mean(axis);
        (0..self.len())
            .map(|i| {
                let d = self.point(i)[axis] - m;
                self.weights[i] * d * d
            })
            .sum()
    }

    /// Fraction of grid points that are not excluded.
    pub fn physical_fraction(&self) -> f64 {
        self.excluded.iter().filter(|&&x| !x).count() as f64 / self.len() as f64
    }
}

/// Posterior on a grid of step `grid_step` per axis; φ must be fixed.
pub fn posterior_over_params(
    family: &ModelFamily,
    design: &MeasurementDesign,
    data: &Dataset,
    grid_step: f64,
) -> Result<PosteriorGrid> {
    if family.has_variable_phase() {
        return Err(Error::VariablePhaseUnsupported);
    }
    if !(grid_step > 0.0 && grid_step <= 0.05) {
        return Err(Error::InvalidGridStep(grid_step));
    }
    let surface = LikelihoodSurface::new(family, design, data)?;
    let axes: Vec<Vec<f64>> = (0..family.param_count()).map(|_| axis_points(grid_step)).collect();
    let total: usize = axes.iter().map(Vec::len).product();
    let mut logliks = Vec::with_capacity(total);
    let mut excluded = Vec::with_capacity(total);
    let mut theta = alloc::vec![0.0; axes.len()];
    for index in 0..total {
        let mut rest = index;
        for (t, a) in theta.iter_mut().zip(&axes) {
            *t = a[rest % a.len()];
            rest /= a.len();
        }
        let physical = surface.is_physical(&theta)?;
        excluded.push(!physical);
        logliks.push(if physical { surface.log_likelihood(&theta)? } else { f64::NEG_INFINITY });
    }
    PosteriorGrid::from_log_likelihoods(axes, &logliks, excluded)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramBin {
    pub left: f64,
    pub right: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NegativityPosterior {
    pub monotone: Monotone,
    pub bins: Vec<HistogramBin>,
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl NegativityPosterior {
    pub fn contains(&self, value: f64) -> bool {
        self.ci_low <= value && value <= self.ci_high
    }
}

/// Smallest value whose cumulative weight reaches `p`.
fn weighted_quantile(sorted: &[(f64, f64)], p: f64) -> f64 {
    let mut acc = 0.0;
    for &(v, w) in sorted {
        acc += w;
        if acc >= p - 1e-12 {
            return v;
        }
    }
    sorted.last().map_or(f64::NAN, |s| s.0)
}

/// Evaluates `which` at every grid point with nonzero weight and summarizes it
/// by a histogram on `[0, 1]` (values above 1 land in the last bin), the
/// posterior mean and the central 95% interval.
pub fn negativity_posterior(
    grid: &PosteriorGrid,
    family: &ModelFamily,
    which: Monotone,
    n_bins: usize,
) -> Result<NegativityPosterior> {
    if n_bins == 0 {
        return Err(Error::EmptyHistogram);
    }
    if grid.axes.len() != family.param_count() {
        return Err(Error::ParameterCount { expected: family.param_count(), got: grid.axes.len() });
    }
    let mut samples: Vec<(f64, f64)> = Vec::new();
    for (i, &w) in grid.weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        let Some(state) = family.evaluate_state(&grid.point(i))? else { continue };
        samples.push((generalized_negativities(&state)?.get(which), w));
    }
    let total: f64 = samples.iter().map(|s| s.1).sum();
    if samples.is_empty() || total <= 0.0 {
        return Err(Error::AllZeroWeights);
    }
    let width = 1.0 / n_bins as f64;
    let mut bins: Vec<HistogramBin> = (0..n_bins)
        .map(|b| HistogramBin { left: b as f64 * width, right: (b + 1) as f64 * width, weight: 0.0 })
        .collect();
    let mut mean = 0.0;
    for s in &mut samples {
        s.1 /= total;
        mean += s.0 * s.1;
        let b = ((s.0 / width) as usize).min(n_bins - 1);
        bins[b].weight += s.1;
    }
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(NegativityPosterior {
        monotone: which,
        bins,
        mean,
        ci_low: weighted_quantile(&samples, CREDIBLE_TAIL),
        ci_high: weighted_quantile(&samples, 1.0 - CREDIBLE_TAIL),
    })
}
