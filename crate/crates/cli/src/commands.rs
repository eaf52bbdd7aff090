//! Argument definitions and handlers of the `qselect` binary.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use qselect_core::entanglement::Monotone;
use qselect_core::inference::{CrossModelConfig, CrossModelKind, FitConfig};
use qselect_core::measurement::{DesignId, MeasurementDesign};

use crate::checks::{self, References};
use crate::config::{parse_phase, ExperimentConfig, Overrides};
use crate::dto::{dataset_to_json, histogram_table, read_dataset, RankingJson, SummaryJson};
use crate::error::{CliError, Result};
use crate::experiment::{run_experiment, sibling, write_with_manifest};
use crate::format::{Cell, Table};
use crate::pipeline;
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Parser)]
#[command(name = "qselect", version, about = "Rank few-parameter quantum state models against full tomography with the AIC")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a dataset from a white-noise Dicke state.
    Simulate(SimulateArgs),
    /// Fit M1 (or the cross-modeled M2) at each phase and rank it against the FPM bound.
    Rank(RankArgs),
    /// Posterior histogram and credible interval of a negativity monotone.
    Posterior(PosteriorArgs),
    /// Physical region of M2 built on the witness pseudostate of a dataset.
    Physmap(PhysmapArgs),
    /// Run a figure sweep described by a JSON config.
    Experiment(ExperimentArgs),
    /// Run the built-in oracles (`quick`) or the full acceptance table (`full`).
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DesignArg {
    Sic,
    Witness,
}

impl DesignArg {
    fn design(self) -> MeasurementDesign {
        match self {
            DesignArg::Sic => DesignId::ProductSic.design(),
            DesignArg::Witness => DesignId::CollectivePauli.design(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelArg {
    /// `(1 − q)|Ψ(φ)⟩⟨Ψ(φ)| + q𝟙/16` on the whole dataset.
    M1,
    /// Cross-modeled M2: base from one half, scored on the other.
    M2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Quick,
    Full,
}

fn phase_arg(s: &str) -> std::result::Result<f64, String> {
    parse_phase(s).ok_or_else(|| format!("cannot read {s:?} as a phase (try 0.5, pi/4, 3pi/8)"))
}

fn monotone_arg(s: &str) -> std::result::Result<Monotone, String> {
    Monotone::parse(s).ok_or_else(|| format!("{s:?} is not N0, N1 or N2"))
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub design: DesignArg,
    #[arg(long, default_value_t = 2)]
    pub excitations: u8,
    #[arg(long, default_value_t = 0.2)]
    pub alpha: f64,
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ModelOptions {
    #[arg(long, value_enum, default_value = "m1")]
    pub model: ModelArg,
    #[arg(long, default_value_t = 2)]
    pub excitations: u8,
    /// Seed of the train/validation split for `--model m2`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.01)]
    pub grid_step: f64,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    #[arg(long)]
    pub data: PathBuf,
    /// Target phase; repeat to rank several models.
    #[arg(long = "phi", value_parser = phase_arg, required = true)]
    pub phis: Vec<f64>,
    /// Fit φ as an extra parameter (M1 only).
    #[arg(long)]
    pub variable_phase: bool,
    #[command(flatten)]
    pub model: ModelOptions,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PosteriorArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_parser = phase_arg, default_value = "0")]
    pub phi: f64,
    #[arg(long, value_parser = monotone_arg, default_value = "N0")]
    pub monotone: Monotone,
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
    #[command(flatten)]
    pub model: ModelOptions,
    /// Histogram CSV path; the summary goes next to it as `<stem>.summary.json`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PhysmapArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_parser = phase_arg, default_value = "0")]
    pub phi: f64,
    #[arg(long, default_value_t = 2)]
    pub excitations: u8,
    #[arg(long, default_value_t = 0.01)]
    pub grid_step: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Replace the config's N list.
    #[arg(long = "N")]
    pub n: Vec<u64>,
    /// Replace the config's phase list.
    #[arg(long = "phi", value_parser = phase_arg)]
    pub phi: Vec<f64>,
    /// Replace the config's seed list.
    #[arg(long)]
    pub seed: Vec<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum, default_value = "quick")]
    pub level: Level,
    /// Replace a reference constant, `name=value` (n0, n1, n2, threshold).
    #[arg(long = "reference", alias = "override")]
    pub references: Vec<String>,
}

/// What a command produced: text for standard output and whether every check passed.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub checks_passed: bool,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, checks_passed: true }
    }
}

/// Inputs of a standalone `posterior` or `physmap` run, kept in its manifest.
#[derive(Debug, Serialize)]
struct CommandRecord {
    command: &'static str,
    data: String,
    data_sha256: String,
    phi: f64,
    excitations: u8,
    model: ModelArg,
    seed: u64,
    grid_step: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    monotone: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bins: Option<usize>,
}

fn file_sha256(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn check_excitations(k: u8) -> Result<()> {
    if matches!(k, 1 | 2) {
        Ok(())
    } else {
        Err(CliError::config("excitations", format!("{k} is not 1 or 2")))
    }
}

fn check_grid_step(step: f64) -> Result<()> {
    if step > 0.0 && step <= 0.05 {
        Ok(())
    } else {
        Err(CliError::config("grid_step", format!("{step} is outside (0, 0.05]")))
    }
}

fn simulate(a: &SimulateArgs) -> Result<Outcome> {
    check_excitations(a.excitations)?;
    if !(0.0..=1.0).contains(&a.alpha) {
        return Err(CliError::config("alpha", format!("{} is outside [0, 1]", a.alpha)));
    }
    if a.n == 0 || !a.n.is_multiple_of(2) {
        return Err(CliError::config("N", format!("{} must be a positive even number", a.n)));
    }
    let rho = pipeline::rho_actual(a.excitations, a.alpha)?;
    let data = a.design.design().simulate(rho.matrix(), a.n, a.seed)?;
    write_file(&a.out, &(dataset_to_json(&data) + "\n"))?;
    Ok(Outcome::ok(format!("wrote {} shots to {}\n", data.total_shots(), a.out.display())))
}

fn rank(a: &RankArgs) -> Result<Outcome> {
    let o = &a.model;
    check_excitations(o.excitations)?;
    check_grid_step(o.grid_step)?;
    let data = read_dataset(&a.data)?;
    let design = data.design.design();
    let fit = FitConfig { grid_step: o.grid_step, ..FitConfig::default() };
    let mut report = None;
    let split = match o.model {
        ModelArg::M1 => None,
        ModelArg::M2 => {
            if a.variable_phase {
                return Err(CliError::config("variable_phase", "only available for --model m1"));
            }
            let kind = match data.design {
                DesignId::ProductSic => CrossModelKind::Sic,
                DesignId::CollectivePauli => CrossModelKind::Witness,
            };
            let cfg = CrossModelConfig { fit, ..CrossModelConfig::default() };
            Some(pipeline::cross_split(kind, &design, &data, o.seed, &cfg)?)
        }
    };
    for &phi in &a.phis {
        let r = match &split {
            None => pipeline::rank_m1(&design, &data, o.excitations, phi, a.variable_phase, &fit)?,
            Some(s) => s.rank(&design, o.excitations, phi, &fit)?,
        };
        let mut r = r;
        r.models[0].name = format!("{}(phi={})", r.models[0].name, crate::format::g12(phi));
        match &mut report {
            None => report = Some(r),
            Some(acc) => acc.models.extend(r.models),
        }
    }
    let report = report.expect("at least one phase");
    let json = serde_json::to_string_pretty(&RankingJson::from(&report)).expect("report serializes") + "\n";
    match &a.out {
        Some(p) => {
            write_file(p, &json)?;
            Ok(Outcome::ok(format!("wrote {}\n", p.display())))
        }
        None => Ok(Outcome::ok(json)),
    }
}

fn posterior(a: &PosteriorArgs) -> Result<Outcome> {
    let o = &a.model;
    check_excitations(o.excitations)?;
    check_grid_step(o.grid_step)?;
    if a.bins == 0 {
        return Err(CliError::config("bins", "must be positive"));
    }
    let data = read_dataset(&a.data)?;
    let design = data.design.design();
    let post = match o.model {
        ModelArg::M1 => pipeline::m1_posterior(&design, &data, o.excitations, a.phi, o.grid_step, a.monotone, a.bins)?,
        ModelArg::M2 => {
            let kind = match data.design {
                DesignId::ProductSic => CrossModelKind::Sic,
                DesignId::CollectivePauli => CrossModelKind::Witness,
            };
            let split = pipeline::cross_split(kind, &design, &data, o.seed, &CrossModelConfig::default())?;
            split.posterior(&design, o.excitations, a.phi, o.grid_step, a.monotone, a.bins)?
        }
    };
    let summary = serde_json::to_string_pretty(&SummaryJson::from(&post)).expect("summary serializes") + "\n";
    let record = CommandRecord {
        command: "posterior",
        data: a.data.display().to_string(),
        data_sha256: file_sha256(&a.data)?,
        phi: a.phi,
        excitations: o.excitations,
        model: o.model,
        seed: o.seed,
        grid_step: o.grid_step,
        monotone: Some(a.monotone.as_str()),
        bins: Some(a.bins),
    };
    let hist = histogram_table(&post);
    write_with_manifest(
        &record,
        &sibling(&a.out, ".manifest.json"),
        &[(a.out.clone(), &hist)],
        vec![(sibling(&a.out, ".summary.json"), summary.clone().into_bytes())],
    )?;
    Ok(Outcome::ok(summary))
}

fn physmap(a: &PhysmapArgs) -> Result<Outcome> {
    check_excitations(a.excitations)?;
    check_grid_step(a.grid_step)?;
    let data = read_dataset(&a.data)?;
    if data.design != DesignId::CollectivePauli {
        return Err(CliError::config("data", "the physicality map needs collective_pauli data"));
    }
    let map = pipeline::physmap(&data, a.excitations, a.phi, a.grid_step)?;
    let mut t = Table::new(vec!["epsilon", "q", "physical"]);
    for (eps, q, p) in map.iter() {
        t.push(vec![Cell::from(eps), Cell::from(q), Cell::from(p)]);
    }
    let record = CommandRecord {
        command: "physmap",
        data: a.data.display().to_string(),
        data_sha256: file_sha256(&a.data)?,
        phi: a.phi,
        excitations: a.excitations,
        model: ModelArg::M2,
        seed: data.seed,
        grid_step: a.grid_step,
        monotone: None,
        bins: None,
    };
    write_with_manifest(&record, &sibling(&a.out, ".manifest.json"), &[(a.out.clone(), &t)], Vec::new())?;
    Ok(Outcome::ok(format!("physical fraction {}\n", crate::format::g12(map.fraction()))))
}

fn experiment(a: &ExperimentArgs) -> Result<Outcome> {
    let text = fs::read_to_string(&a.config).map_err(|e| CliError::io(&a.config, e))?;
    let mut cfg = ExperimentConfig::from_json(&text)?;
    cfg.apply(&Overrides { ns: a.n.clone(), phis: a.phi.clone(), seeds: a.seed.clone(), out: a.out.clone() });
    let out = run_experiment(&cfg)?;
    let mut s = format!("manifest {} (sha256 {})\n", out.manifest.display(), out.manifest_sha256);
    for t in &out.tables {
        s += &format!("table {}\n", t.display());
    }
    Ok(Outcome::ok(s))
}

fn verify(a: &VerifyArgs) -> Result<Outcome> {
    let mut refs = References::default();
    for r in &a.references {
        let (name, value) = r.split_once('=').ok_or_else(|| CliError::config("reference", format!("{r:?} is not name=value")))?;
        let value: f64 = value.parse().map_err(|_| CliError::config("reference", format!("{value:?} is not a number")))?;
        if !refs.set(name, value) {
            return Err(CliError::config("reference", format!("unknown reference {name:?}")));
        }
    }
    let mut out = String::new();
    let lines = checks::quick_checks(&refs);
    let mut passed = lines.iter().all(|l| l.pass);
    out += "quick checks\n";
    for l in &lines {
        out += &format!("    {l}\n");
    }
    if a.level == Level::Full {
        for report in checks::full_checks() {
            passed &= report.pass();
            out += &report.to_string();
        }
    }
    out += if passed { "all checks passed\n" } else { "some checks FAILED\n" };
    Ok(Outcome { stdout: out, checks_passed: passed })
}

/// Executes one parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Rank(a) => rank(a),
        Command::Posterior(a) => posterior(a),
        Command::Physmap(a) => physmap(a),
        Command::Experiment(a) => experiment(a),
        Command::Verify(a) => verify(a),
    }
}
