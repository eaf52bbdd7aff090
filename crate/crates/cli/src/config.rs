//! Experiment configuration: one JSON file plus command-line overrides.

use std::f64::consts::PI;
use std::path::PathBuf;

use qselect_core::entanglement::Monotone;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentId {
    Fig1a,
    Fig1b,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 9] = [
        ExperimentId::Fig1a,
        ExperimentId::Fig1b,
        ExperimentId::Fig2,
        ExperimentId::Fig3,
        ExperimentId::Fig4,
        ExperimentId::Fig5,
        ExperimentId::Fig6,
        ExperimentId::Fig7,
        ExperimentId::Fig8,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentId::Fig1a => "fig1a",
            ExperimentId::Fig1b => "fig1b",
            ExperimentId::Fig2 => "fig2",
            ExperimentId::Fig3 => "fig3",
            ExperimentId::Fig4 => "fig4",
            ExperimentId::Fig5 => "fig5",
            ExperimentId::Fig6 => "fig6",
            ExperimentId::Fig7 => "fig7",
            ExperimentId::Fig8 => "fig8",
        }
    }

    /// Whether the experiment draws samples at all.
    pub fn is_sampled(self) -> bool {
        self != ExperimentId::Fig4
    }
}

/// Parses a phase such as `0.5`, `pi`, `pi/4`, `3pi/4` or `-2*pi/3`.
pub fn parse_phase(text: &str) -> Option<f64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
    if let Ok(v) = s.parse::<f64>() {
        return v.is_finite().then_some(v);
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().ok().filter(|d| *d != 0.0)?),
        None => (s.as_str(), 1.0),
    };
    let coeff = num.strip_suffix("pi")?.trim_end_matches('*');
    let c = match coeff {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().ok()?,
    };
    Some(c * PI / den)
}

fn de_phases<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<f64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Phase {
        Number(f64),
        Text(String),
    }
    let raw: Vec<Phase> = Vec::deserialize(d)?;
    raw.into_iter()
        .map(|p| match p {
            Phase::Number(v) => Ok(v),
            Phase::Text(t) => parse_phase(&t).ok_or_else(|| serde::de::Error::custom(format!("bad phase {t:?}"))),
        })
        .collect()
}

fn default_alpha() -> f64 {
    0.2
}
fn default_grid_step() -> f64 {
    0.01
}
fn default_phi_step() -> f64 {
    PI / 180.0
}
fn default_refine_tol() -> f64 {
    1e-6
}
fn default_bins() -> usize {
    50
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    /// Excitation number of the Dicke state; defaults to 1 for the tomography
    /// experiments and 2 for the witness ones.
    #[serde(default)]
    pub excitations: Option<u8>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(deserialize_with = "de_phases")]
    pub phis: Vec<f64>,
    #[serde(rename = "N", default)]
    pub ns: Vec<u64>,
    #[serde(default)]
    pub seeds: Vec<u64>,
    #[serde(default = "default_grid_step")]
    pub grid_step: f64,
    #[serde(default = "default_phi_step")]
    pub phi_step: f64,
    #[serde(default = "default_refine_tol")]
    pub refine_tol: f64,
    #[serde(default = "default_bins")]
    pub bins: usize,
    /// `N0`, `N1` or `N2`; defaults to `N2` for fig8 and `N0` otherwise.
    #[serde(default)]
    pub monotone: Option<String>,
    /// Treat φ as a fitted parameter (K + 1) in fig1a/fig2/fig3.
    #[serde(default)]
    pub variable_phase: bool,
    pub out: PathBuf,
}

/// Command-line replacements for config fields.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub ns: Vec<u64>,
    pub phis: Vec<f64>,
    pub seeds: Vec<u64>,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::config("config", e.to_string()))
    }

    pub fn apply(&mut self, o: &Overrides) {
        if !o.ns.is_empty() {
            self.ns = o.ns.clone();
        }
        if !o.phis.is_empty() {
            self.phis = o.phis.clone();
        }
        if !o.seeds.is_empty() {
            self.seeds = o.seeds.clone();
        }
        if let Some(out) = &o.out {
            self.out = out.clone();
        }
    }

    pub fn excitations(&self) -> u8 {
        self.excitations.unwrap_or(match self.experiment {
            ExperimentId::Fig1a | ExperimentId::Fig1b | ExperimentId::Fig2 => 1,
            _ => 2,
        })
    }

    pub fn monotone(&self) -> Monotone {
        let default = match self.experiment {
            ExperimentId::Fig8 => Monotone::N2,
            _ => Monotone::N0,
        };
        self.monotone.as_deref().and_then(Monotone::parse).unwrap_or(default)
    }

    /// Field-level validation; the first violated rule is reported.
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(CliError::config("alpha", format!("{} is outside [0, 1]", self.alpha)));
        }
        if !matches!(self.excitations(), 1 | 2) {
            return Err(CliError::config("excitations", format!("{} is not 1 or 2", self.excitations())));
        }
        if self.phis.is_empty() {
            return Err(CliError::config("phis", "must not be empty"));
        }
        if self.phis.iter().any(|p| !p.is_finite()) {
            return Err(CliError::config("phis", "phases must be finite"));
        }
        if !(self.grid_step > 0.0 && self.grid_step <= 0.05) {
            return Err(CliError::config("grid_step", format!("{} is outside (0, 0.05]", self.grid_step)));
        }
        if !(self.phi_step > 0.0 && self.phi_step.is_finite()) {
            return Err(CliError::config("phi_step", "must be positive"));
        }
        if !(self.refine_tol > 0.0 && self.refine_tol.is_finite()) {
            return Err(CliError::config("refine_tol", "must be positive"));
        }
        if let Some(m) = &self.monotone {
            if Monotone::parse(m).is_none() {
                return Err(CliError::config("monotone", format!("{m:?} is not N0, N1 or N2")));
            }
        }
        if self.bins == 0 {
            return Err(CliError::config("bins", "must be positive"));
        }
        if self.variable_phase && !matches!(self.experiment, ExperimentId::Fig1a | ExperimentId::Fig2 | ExperimentId::Fig3) {
            return Err(CliError::config("variable_phase", "only supported by fig1a, fig2 and fig3"));
        }
        if self.experiment.is_sampled() {
            if self.seeds.is_empty() {
                return Err(CliError::config("seeds", "must not be empty"));
            }
            if self.ns.is_empty() {
                return Err(CliError::config("N", "must not be empty"));
            }
            for &n in &self.ns {
                if n == 0 {
                    return Err(CliError::config("N", "zero-shot experiments are meaningless"));
                }
                if n % 2 != 0 {
                    return Err(CliError::config("N", format!("{n} is odd; every N must split evenly")));
                }
                if self.experiment == ExperimentId::Fig8 && n % 4 != 0 {
                    return Err(CliError::config("N", format!("{n}: each witness setting must split evenly, so N must be a multiple of 4")));
                }
            }
        }
        if self.out.as_os_str().is_empty() {
            return Err(CliError::config("out", "must not be empty"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ExperimentConfig {
        ExperimentConfig::from_json(r#"{"experiment":"fig3","phis":[0,"pi/6"],"N":[100],"seeds":[0],"out":"x.csv"}"#).unwrap()
    }

    #[test]
    fn phase_expressions() {
        assert_eq!(parse_phase("0"), Some(0.0));
        assert_eq!(parse_phase("pi"), Some(PI));
        assert_eq!(parse_phase("pi/4"), Some(PI / 4.0));
        assert_eq!(parse_phase("3pi/8"), Some(3.0 * PI / 8.0));
        assert_eq!(parse_phase("-2*pi/3"), Some(-2.0 * PI / 3.0));
        assert_eq!(parse_phase("PI / 2"), Some(PI / 2.0));
        assert_eq!(parse_phase("tau"), None);
        assert_eq!(parse_phase("pi/0"), None);
    }

    #[test]
    fn defaults_follow_the_experiment() {
        let c = base();
        assert_eq!(c.phis, vec![0.0, PI / 6.0]);
        assert_eq!(c.excitations(), 2);
        assert_eq!(c.alpha, 0.2);
        assert_eq!(c.grid_step, 0.01);
        c.validate().unwrap();
        let mut fig1 = c.clone();
        fig1.experiment = ExperimentId::Fig1a;
        assert_eq!(fig1.excitations(), 1);
    }

    #[test]
    fn field_level_errors() {
        let field = |c: &ExperimentConfig| match c.validate() {
            Err(CliError::ConfigInvalid { field, .. }) => field,
            other => panic!("expected ConfigInvalid, got {other:?}"),
        };
        let mut c = base();
        c.ns = vec![0];
        assert_eq!(field(&c), "N");
        c.ns = vec![101];
        assert_eq!(field(&c), "N");
        let mut c = base();
        c.seeds.clear();
        assert_eq!(field(&c), "seeds");
        let mut c = base();
        c.alpha = 1.5;
        assert_eq!(field(&c), "alpha");
        let mut c = base();
        c.grid_step = 0.1;
        assert_eq!(field(&c), "grid_step");
        let mut c = base();
        c.experiment = ExperimentId::Fig8;
        c.ns = vec![50];
        assert_eq!(field(&c), "N");
    }

    #[test]
    fn unknown_fields_are_config_errors() {
        let r = ExperimentConfig::from_json(r#"{"experiment":"fig3","phis":[0],"N":[100],"seeds":[0],"out":"x","bogus":1}"#);
        assert!(matches!(r, Err(CliError::ConfigInvalid { .. })));
    }

    #[test]
    fn overrides_replace_lists() {
        let mut c = base();
        c.apply(&Overrides { ns: vec![1000], phis: vec![], seeds: vec![4, 5], out: Some("y.csv".into()) });
        assert_eq!((c.ns.clone(), c.seeds.clone()), (vec![1000], vec![4, 5]));
        assert_eq!(c.phis.len(), 2);
        assert_eq!(c.out, PathBuf::from("y.csv"));
    }
}
