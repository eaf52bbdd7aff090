//! JSON wire formats.

use std::path::Path;

use qselect_core::bayes::NegativityPosterior;
use qselect_core::inference::RankingReport;
use qselect_core::measurement::{Dataset, DesignId, SettingCounts};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::format::{Cell, Table};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettingJson {
    pub label: String,
    pub shots: u64,
    pub counts: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetJson {
    pub design_id: String,
    pub seed: u64,
    pub settings: Vec<SettingJson>,
}

impl From<&Dataset> for DatasetJson {
    fn from(d: &Dataset) -> Self {
        Self {
            design_id: d.design.as_str().to_string(),
            seed: d.seed,
            settings: d
                .settings
                .iter()
                .map(|s| SettingJson { label: s.label.clone(), shots: s.shots(), counts: s.counts.clone() })
                .collect(),
        }
    }
}

impl TryFrom<DatasetJson> for Dataset {
    type Error = CliError;

    fn try_from(d: DatasetJson) -> Result<Self> {
        let design = DesignId::parse(&d.design_id).ok_or_else(|| CliError::Dataset(format!("unknown design_id {:?}", d.design_id)))?;
        let settings = d
            .settings
            .into_iter()
            .map(|s| {
                let sum: u64 = s.counts.iter().sum();
                if sum != s.shots {
                    return Err(CliError::Dataset(format!("setting {:?}: counts sum to {sum}, shots = {}", s.label, s.shots)));
                }
                Ok(SettingCounts { label: s.label, counts: s.counts })
            })
            .collect::<Result<_>>()?;
        let data = Dataset { design, seed: d.seed, settings };
        design.design().check(&data).map_err(|e| CliError::Dataset(e.to_string()))?;
        Ok(data)
    }
}

pub fn dataset_to_json(d: &Dataset) -> String {
    serde_json::to_string_pretty(&DatasetJson::from(d)).expect("dataset serializes")
}

pub fn dataset_from_json(text: &str, path: &Path) -> Result<Dataset> {
    let dto: DatasetJson = serde_json::from_str(text).map_err(|source| CliError::Json { path: path.into(), source })?;
    dto.try_into()
}

pub fn read_dataset(path: &Path) -> Result<Dataset> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    dataset_from_json(&text, path)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelJson {
    pub name: String,
    #[serde(rename = "K")]
    pub k: usize,
    pub theta_hat: Vec<f64>,
    pub loglik: f64,
    pub aic: f64,
    pub aicc: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FpmJson {
    #[serde(rename = "K")]
    pub k: usize,
    pub loglik_bound: f64,
    pub aic: f64,
    pub aicc: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingJson {
    pub models: Vec<ModelJson>,
    pub fpm: FpmJson,
    pub delta_aic: Vec<f64>,
}

impl From<&RankingReport> for RankingJson {
    fn from(r: &RankingReport) -> Self {
        Self {
            models: r
                .models
                .iter()
                .map(|m| ModelJson {
                    name: m.name.clone(),
                    k: m.fit.k,
                    theta_hat: m.fit.theta_hat.clone(),
                    loglik: m.fit.log_likelihood,
                    aic: m.fit.aic,
                    aicc: m.fit.aicc,
                })
                .collect(),
            fpm: FpmJson { k: r.fpm_k, loglik_bound: r.fpm_loglik_bound, aic: r.fpm_aic, aicc: r.fpm_aicc },
            delta_aic: r.models.iter().map(|m| m.delta_aic).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryJson {
    pub monotone: String,
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl From<&NegativityPosterior> for SummaryJson {
    fn from(p: &NegativityPosterior) -> Self {
        Self { monotone: p.monotone.as_str().to_string(), mean: p.mean, ci_low: p.ci_low, ci_high: p.ci_high }
    }
}

pub fn histogram_table(p: &NegativityPosterior) -> Table {
    let mut t = Table::new(vec!["bin_left", "bin_right", "weight"]);
    for b in &p.bins {
        t.push(vec![Cell::from(b.left), Cell::from(b.right), Cell::from(b.weight)]);
    }
    t
}
