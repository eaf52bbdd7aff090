//! Figure sweeps: one table row per `(φ, N, seed)` cell plus a run manifest.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use qselect_core::entanglement::witness_expectation;
use qselect_core::inference::{CrossModelConfig, CrossModelKind, FitConfig};
use qselect_core::measurement::{collective_pauli_design, product_sic_design, MeasurementDesign};
use qselect_core::states::target_state;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{ExperimentConfig, ExperimentId};
use crate::error::{CliError, Result};
use crate::format::{Cell, Table};
use crate::pipeline::{self, EXTRA_SEED_OFFSET};

/// Tables produced by one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentTables {
    pub main: Table,
    pub histogram: Option<Table>,
}

#[derive(Debug, Serialize)]
struct Manifest<'a, C> {
    tool: &'static str,
    version: &'static str,
    core_version: &'static str,
    rng: &'static str,
    config: &'a C,
    outputs: Vec<String>,
}

/// Files written by [`run_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub manifest: PathBuf,
    pub tables: Vec<PathBuf>,
    pub manifest_sha256: String,
}

fn fit_config(cfg: &ExperimentConfig) -> FitConfig {
    FitConfig { grid_step: cfg.grid_step, phi_step: cfg.phi_step, refine_tol: cfg.refine_tol }
}

fn cross_config(cfg: &ExperimentConfig) -> CrossModelConfig {
    CrossModelConfig { fit: fit_config(cfg), ..CrossModelConfig::default() }
}

type Rows = Vec<Vec<Cell>>;

/// Runs `f` on every `(N, seed)` pair in parallel.
fn sweep<T, F>(cfg: &ExperimentConfig, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, u64) -> Result<T> + Sync,
{
    let jobs: Vec<(u64, u64)> = cfg.ns.iter().flat_map(|&n| cfg.seeds.iter().map(move |&s| (n, s))).collect();
    jobs.par_iter().map(|&(n, s)| f(n, s)).collect()
}

fn sweep_rows<F>(cfg: &ExperimentConfig, f: F) -> Result<Rows>
where
    F: Fn(u64, u64) -> Result<Rows> + Sync,
{
    Ok(sweep(cfg, f)?.into_iter().flatten().collect())
}

fn table(columns: Vec<&'static str>, rows: Rows) -> Table {
    let mut t = Table::new(columns);
    for r in rows {
        t.push(r);
    }
    t.sort();
    t
}

fn m1_sweep(cfg: &ExperimentConfig, design: &MeasurementDesign, excitations: u8) -> Result<Rows> {
    let fit = fit_config(cfg);
    let rho = pipeline::rho_actual(excitations, cfg.alpha)?;
    sweep_rows(cfg, |n, seed| {
        let data = design.simulate(rho.matrix(), n, seed)?;
        cfg.phis
            .iter()
            .map(|&phi| {
                let r = pipeline::rank_m1(design, &data, excitations, phi, cfg.variable_phase, &fit)?;
                Ok(vec![phi.into(), n.into(), seed.into(), r.models[0].neg_delta_aic().into()])
            })
            .collect()
    })
}

fn posterior_rows(
    key: [Cell; 3],
    post: &qselect_core::bayes::NegativityPosterior,
    extra: Option<f64>,
    main: &mut Rows,
    hist: &mut Rows,
) {
    let mut row = key.to_vec();
    if let Some(v) = extra {
        row.push(v.into());
    }
    row.extend([post.mean.into(), post.ci_low.into(), post.ci_high.into()]);
    main.push(row);
    for b in &post.bins {
        let mut h = key.to_vec();
        h.extend([b.left.into(), b.right.into(), b.weight.into()]);
        hist.push(h);
    }
}

/// Computes the tables of one experiment without touching the file system.
pub fn compute(cfg: &ExperimentConfig) -> Result<ExperimentTables> {
    cfg.validate()?;
    let k = cfg.excitations();
    let sic = product_sic_design();
    let witness = collective_pauli_design();
    let key_cols = vec!["phi", "N", "seed"];
    let aic_cols = vec!["phi", "N", "seed", "neg_delta_aic"];
    let hist_cols = vec!["phi", "N", "seed", "bin_left", "bin_right", "weight"];
    let only = |main| Ok(ExperimentTables { main, histogram: None });
    match cfg.experiment {
        ExperimentId::Fig1a => only(table(aic_cols, m1_sweep(cfg, &sic, k)?)),
        ExperimentId::Fig3 => only(table(aic_cols, m1_sweep(cfg, &witness, k)?)),
        ExperimentId::Fig2 => {
            let mut rows = Vec::new();
            for excitations in [1u8, 2] {
                rows.extend(m1_sweep(cfg, &sic, excitations)?.into_iter().map(|mut r| {
                    r.insert(0, excitations.into());
                    r
                }));
            }
            only(table(vec!["excitations", "phi", "N", "seed", "neg_delta_aic"], rows))
        }
        ExperimentId::Fig1b => {
            let cross = cross_config(cfg);
            let rho = pipeline::rho_actual(k, cfg.alpha)?;
            let rows = sweep_rows(cfg, |n, seed| {
                let data = sic.simulate(rho.matrix(), n, seed)?;
                let split = pipeline::cross_split(CrossModelKind::Sic, &sic, &data, seed, &cross)?;
                cfg.phis
                    .iter()
                    .map(|&phi| {
                        let r = split.rank(&sic, k, phi, &cross.fit)?;
                        Ok(vec![phi.into(), n.into(), seed.into(), r.models[0].neg_delta_aic().into()])
                    })
                    .collect()
            })?;
            only(table(aic_cols, rows))
        }
        ExperimentId::Fig4 => {
            let mut t = Table::new(vec!["phi", "witness_pure", "witness_mixed"]);
            for &phi in &cfg.phis {
                let pure = target_state(k, phi)?;
                let mixed = qselect_core::states::depolarize(&pure, cfg.alpha)?;
                t.push(vec![
                    phi.into(),
                    witness_expectation(&pure.projector())?.into(),
                    witness_expectation(mixed.matrix())?.into(),
                ]);
            }
            t.sort();
            only(t)
        }
        ExperimentId::Fig5 | ExperimentId::Fig8 => {
            let which = cfg.monotone();
            let rho = pipeline::rho_actual(k, cfg.alpha)?;
            let cross = cross_config(cfg);
            let parts = sweep(cfg, |n, seed| {
                let data = witness.simulate(rho.matrix(), n, seed)?;
                let (mut main, mut hist) = (Vec::new(), Vec::new());
                if cfg.experiment == ExperimentId::Fig5 {
                    for &phi in &cfg.phis {
                        let post = pipeline::m1_posterior(&witness, &data, k, phi, cfg.grid_step, which, cfg.bins)?;
                        posterior_rows([phi.into(), n.into(), seed.into()], &post, None, &mut main, &mut hist);
                    }
                } else {
                    let split = pipeline::cross_split(CrossModelKind::Witness, &witness, &data, seed, &cross)?;
                    for &phi in &cfg.phis {
                        let r = split.rank(&witness, k, phi, &cross.fit)?;
                        let post = split.posterior(&witness, k, phi, cfg.grid_step, which, cfg.bins)?;
                        let key = [phi.into(), n.into(), seed.into()];
                        posterior_rows(key, &post, Some(r.models[0].neg_delta_aic()), &mut main, &mut hist);
                    }
                }
                Ok((main, hist))
            })?;
            let (main, hist): (Vec<Rows>, Vec<Rows>) = parts.into_iter().unzip();
            let (main, hist) = (main.concat(), hist.concat());
            let mut cols = key_cols;
            if cfg.experiment == ExperimentId::Fig8 {
                cols.push("neg_delta_aic");
            }
            cols.extend(["mean", "ci_low", "ci_high"]);
            Ok(ExperimentTables { main: table(cols, main), histogram: Some(table(hist_cols, hist)) })
        }
        ExperimentId::Fig6 => {
            let rho = pipeline::rho_actual(k, cfg.alpha)?;
            let phi = cfg.phis[0];
            let rows = sweep_rows(cfg, |n, seed| {
                let data = witness.simulate(rho.matrix(), n, seed)?;
                let map = pipeline::physmap(&data, k, phi, cfg.grid_step)?;
                Ok(map.iter().map(|(eps, q, p)| vec![n.into(), seed.into(), eps.into(), q.into(), p.into()]).collect())
            })?;
            only(table(vec!["N", "seed", "epsilon", "q", "physical"], rows))
        }
        ExperimentId::Fig7 => {
            let fit = fit_config(cfg);
            let rho = pipeline::rho_actual(k, cfg.alpha)?;
            let rows = sweep_rows(cfg, |n, seed| {
                let validation = witness.simulate(rho.matrix(), n, seed)?;
                let extra = witness.simulate(rho.matrix(), n, seed.wrapping_add(EXTRA_SEED_OFFSET))?;
                cfg.phis
                    .iter()
                    .map(|&phi| {
                        let v = pipeline::m2_advantage(&witness, &validation, &extra, k, phi, &fit)?;
                        Ok(vec![phi.into(), n.into(), seed.into(), v.into()])
                    })
                    .collect()
            })?;
            only(table(aic_cols, rows))
        }
    }
}

pub(crate) fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}{suffix}"))
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

/// Writes every `(path, contents)` pair via a temporary file and rename; on
/// any failure all files of the batch are removed again.
fn write_all_atomic(files: &[(PathBuf, Vec<u8>)]) -> Result<()> {
    let mut done: Vec<PathBuf> = Vec::new();
    let result = (|| {
        for (path, bytes) in files {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            }
            let tmp = path.with_file_name(format!(".{}.{}.tmp", file_name(path), std::process::id()));
            done.push(tmp.clone());
            let mut f = fs::File::create(&tmp).map_err(|e| CliError::io(&tmp, e))?;
            f.write_all(bytes).and_then(|_| f.sync_all()).map_err(|e| CliError::io(&tmp, e))?;
            fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))?;
            done.pop();
            done.push(path.clone());
        }
        Ok(())
    })();
    if result.is_err() {
        for p in &done {
            let _ = fs::remove_file(p);
        }
    }
    result
}

/// Writes `tables` (path, table) together with a manifest recording `config`
/// at `manifest_path`, plus any `extra` files, as one atomic batch.
///
/// Every CSV starts with `# manifest_sha256=<hex>` naming the SHA-256 of the
/// manifest file written alongside it. Returns that hash.
pub fn write_with_manifest<C: Serialize>(
    config: &C,
    manifest_path: &Path,
    tables: &[(PathBuf, &Table)],
    extra: Vec<(PathBuf, Vec<u8>)>,
) -> Result<String> {
    let mut outputs: Vec<String> = tables.iter().map(|(p, _)| file_name(p)).collect();
    outputs.extend(extra.iter().map(|(p, _)| file_name(p)));
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        core_version: qselect_core::VERSION,
        rng: "ChaCha20, one stream per measurement setting",
        config,
        outputs,
    };
    let mut manifest_bytes = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
    manifest_bytes.push(b'\n');
    let hash = hex::encode(Sha256::digest(&manifest_bytes));
    let mut files = vec![(manifest_path.to_path_buf(), manifest_bytes)];
    files.extend(tables.iter().map(|(p, t)| (p.clone(), t.to_csv(Some(&hash)).into_bytes())));
    files.extend(extra);
    write_all_atomic(&files)?;
    Ok(hash)
}

/// Validates `cfg`, computes its tables and writes them next to a manifest.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let tables = compute(cfg)?;
    let manifest_path = sibling(&cfg.out, ".manifest.json");
    let mut written = vec![(cfg.out.clone(), &tables.main)];
    if let Some(h) = &tables.histogram {
        written.push((sibling(&cfg.out, ".hist.csv"), h));
    }
    let hash = write_with_manifest(cfg, &manifest_path, &written, Vec::new())?;
    Ok(RunOutput {
        manifest: manifest_path,
        tables: written.into_iter().map(|(p, _)| p).collect(),
        manifest_sha256: hash,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(json: &str) -> ExperimentConfig {
        ExperimentConfig::from_json(json).unwrap()
    }

    #[test]
    fn fig4_reproduces_the_witness_endpoints() {
        let c = cfg(r#"{"experiment":"fig4","phis":["pi", 0],"out":"w.csv"}"#);
        let t = compute(&c).unwrap().main;
        assert_eq!(t.columns, vec!["phi", "witness_pure", "witness_mixed"]);
        let Cell::Float(w0) = t.rows[0][1] else { panic!() };
        assert!((w0 - (3f64.sqrt() - 2.5)).abs() < 1e-12);
        let Cell::Float(wm) = t.rows[0][2] else { panic!() };
        assert!((wm - (3f64.sqrt() - 2.5 + 0.8)).abs() < 1e-12);
        assert_eq!(t.rows[1][0], Cell::Float(std::f64::consts::PI));
    }

    #[test]
    fn fig6_rows_cover_the_grid() {
        let c = cfg(r#"{"experiment":"fig6","phis":[0],"N":[100],"seeds":[1,0],"grid_step":0.05,"out":"m.csv"}"#);
        let t = compute(&c).unwrap().main;
        assert_eq!(t.rows.len(), 2 * 21 * 21);
        assert_eq!(t.rows[0][..2], [Cell::Int(100), Cell::Int(0)]);
    }

    #[test]
    fn sibling_names() {
        assert_eq!(sibling(Path::new("out/fig5.csv"), ".hist.csv"), PathBuf::from("out/fig5.hist.csv"));
        assert_eq!(sibling(Path::new("fig5"), ".manifest.json"), PathBuf::from("fig5.manifest.json"));
    }
}
