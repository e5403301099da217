use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use volclust::experiment::{self, ExperimentKind, ExperimentRow, Medians};
use volclust::ingest::prices_from_returns;
use volclust::{analyze as run_analysis, compute_returns, garch, load_prices, AnalysisConfig, AnalysisRecord, GarchParams, Seed};

use crate::manifest::RunManifest;
use crate::settings::{AnalysisFlags, FileSettings};
use crate::{CliError, GarchFlags};

const DEFAULT_SEED: u64 = 1;

fn read_input(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::runtime(format!("cannot read {}: {e}", path.display())))
}

fn write_output(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::runtime(format!("cannot create {}: {e}", dir.display())))
}

fn json_bytes(value: &impl Serialize) -> Vec<u8> {
    let mut text = serde_json::to_string_pretty(value).expect("value serializes");
    text.push('\n');
    text.into_bytes()
}

fn garch_params(flags: &GarchFlags) -> Result<GarchParams, CliError> {
    GarchParams::new(flags.omega, flags.alpha, flags.beta).map_err(|e| CliError::usage(e.to_string()))
}

pub fn analyze(input: &Path, flags: &AnalysisFlags, out: &Path) -> Result<(), CliError> {
    let file = flags.file_settings()?;
    let config = flags.resolve(&file)?;
    let bytes = read_input(input)?;
    let prices = load_prices(bytes.as_slice()).map_err(|e| CliError::from_lib("ingest", e))?;
    let returns = compute_returns(&prices);
    let result = run_analysis(&returns, &config).map_err(|e| CliError::from_lib("analysis failed", e))?;

    ensure_dir(out)?;
    let mut profile_csv = Vec::new();
    result
        .profile
        .write_csv(&mut profile_csv)
        .map_err(|e| CliError::from_lib("profile", e))?;
    let record = AnalysisRecord::new(result, config);
    write_output(&out.join("result.json"), &json_bytes(&record))?;
    write_output(&out.join("profile.csv"), &profile_csv)?;

    let mut manifest = RunManifest::new("analyze", config);
    manifest.input(input, &bytes);
    if let Some(path) = &flags.config {
        manifest.input(path, &read_input(path)?);
    }
    manifest.write(&out.join("manifest.json"))?;

    println!(
        "dvc_p = {:.4}  dvc_n = {:.4}  (|dvc_n| = {:.4}, points {}+{})",
        record.result.dvc_p,
        record.result.dvc_n,
        record.abs_dvc_n,
        record.result.n_points_pos,
        record.result.n_points_neg
    );
    Ok(())
}

pub fn simulate(
    flags: &GarchFlags,
    n: usize,
    seed: Option<u64>,
    scale: f64,
    config: Option<&Path>,
    out: &Path,
) -> Result<(), CliError> {
    let params = garch_params(flags)?;
    if !(scale.is_finite() && scale > 0.0) {
        return Err(CliError::usage(format!("scale must be positive, got {scale}")));
    }
    let file = match config {
        Some(path) => FileSettings::load(path)?,
        None => FileSettings::default(),
    };
    let seed = seed.or(file.seed).unwrap_or(DEFAULT_SEED);

    let returns = garch::simulate(&params, n, Seed(seed)).map_err(|e| CliError::usage(e.to_string()))?;
    let scaled = volclust::ReturnSeries::new(returns.values().iter().map(|r| r * scale).collect())
        .map_err(|e| CliError::usage(e.to_string()))?;
    let prices = prices_from_returns(&scaled, 100.0)
        .map_err(|e| CliError::usage(format!("cannot build prices (try a smaller --scale): {e}")))?;

    let mut csv = Vec::new();
    prices.write_csv(&mut csv).map_err(|e| CliError::from_lib("simulate", e))?;
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        ensure_dir(dir)?;
    }
    write_output(out, &csv)?;

    let mut manifest = RunManifest::new(
        "simulate",
        json!({"omega": params.omega(), "alpha": params.alpha(), "beta": params.beta(), "n": n, "scale": scale, "start_price": 100.0}),
    )
    .seeds(&[seed]);
    if let Some(path) = config {
        manifest.input(path, &read_input(path)?);
    }
    let mut manifest_path = out.as_os_str().to_owned();
    manifest_path.push(".manifest.json");
    manifest.write(Path::new(&manifest_path))?;
    println!("wrote {} prices to {}", prices.len(), out.display());
    Ok(())
}

#[derive(Serialize)]
struct ExperimentOutput {
    kind: ExperimentKind,
    n: usize,
    source: GarchParams,
    config: AnalysisConfig,
    rows: Vec<ExperimentRow>,
    medians: Option<Medians>,
}

pub fn experiment(
    kind: &str,
    n: usize,
    seeds: &[u64],
    garch_flags: &GarchFlags,
    flags: &AnalysisFlags,
    out: &Path,
) -> Result<(), CliError> {
    let kind: ExperimentKind = kind.parse().map_err(|e: volclust::Error| CliError::usage(e.to_string()))?;
    let source = garch_params(garch_flags)?;
    let file = flags.file_settings()?;
    let config = flags.resolve(&file)?;
    if seeds.is_empty() {
        return Err(CliError::usage("at least one seed is required"));
    }

    // par_iter + collect keeps seed order
    let rows: Vec<ExperimentRow> = seeds
        .par_iter()
        .map(|&seed| ExperimentRow::from_outcome(seed, experiment::run_pair(kind, &source, n, Seed(seed), &config)))
        .collect();
    let medians = experiment::medians(&rows);

    ensure_dir(out)?;
    let output = ExperimentOutput {
        kind,
        n,
        source,
        config,
        rows,
        medians,
    };
    write_output(&out.join("experiment.json"), &json_bytes(&output))?;
    let mut manifest = RunManifest::new(
        "experiment",
        json!({"kind": kind, "n": n, "source": source, "analysis": config}),
    )
    .seeds(seeds);
    if let Some(path) = &flags.config {
        manifest.input(path, &read_input(path)?);
    }
    manifest.write(&out.join("manifest.json"))?;

    for row in &output.rows {
        match (&row.dvc_raw, &row.dvc_transformed, &row.error) {
            (Some(raw), Some(t), _) => println!(
                "seed {:>6}: raw p={:+.4} n={:+.4}  {kind} p={:+.4} n={:+.4}",
                row.seed, raw.p, raw.n, t.p, t.n
            ),
            (_, _, Some(err)) => println!("seed {:>6}: failed: {err}", row.seed),
            _ => {}
        }
    }
    match output.medians {
        Some(m) => {
            println!(
                "median |dvc| raw: p={:.4} n={:.4}; {kind}: p={:.4} n={:.4}",
                m.raw.abs_p, m.raw.abs_n, m.transformed.abs_p, m.transformed.abs_n
            );
            Ok(())
        }
        None => Err(CliError::runtime("every seed failed")),
    }
}

struct ReportRow {
    file: String,
    record: Result<AnalysisRecord, String>,
}

fn read_record(path: &Path) -> Result<AnalysisRecord, String> {
    let bytes = fs::read(path).map_err(|e| format!("unreadable: {e}"))?;
    serde_json::from_slice(&bytes).map_err(|e| format!("invalid: {e}"))
}

pub fn report(inputs: &[PathBuf], out: &Path) -> Result<(), CliError> {
    let rows: Vec<ReportRow> = inputs
        .iter()
        .map(|path| ReportRow {
            file: path.display().to_string(),
            record: read_record(path),
        })
        .collect();

    let mut csv = String::from("file,dvc_p,dvc_n,abs_dvc_n,n_points_pos,n_points_neg,status\n");
    let width = rows.iter().map(|r| r.file.len()).max().unwrap_or(4).max(4);
    println!(
        "{:<width$}  {:>9}  {:>9}  {:>9}  {:>5}  {:>5}  status",
        "file", "dvc_p", "dvc_n", "|dvc_n|", "n_pos", "n_neg"
    );
    for row in &rows {
        let file = csv_field(&row.file);
        match &row.record {
            Ok(rec) => {
                let r = &rec.result;
                csv.push_str(&format!(
                    "{file},{},{},{},{},{},ok\n",
                    r.dvc_p,
                    r.dvc_n,
                    r.dvc_n.abs(),
                    r.n_points_pos,
                    r.n_points_neg
                ));
                println!(
                    "{:<width$}  {:>9.4}  {:>9.4}  {:>9.4}  {:>5}  {:>5}  ok",
                    row.file,
                    r.dvc_p,
                    r.dvc_n,
                    r.dvc_n.abs(),
                    r.n_points_pos,
                    r.n_points_neg
                );
            }
            Err(msg) => {
                csv.push_str(&format!("{file},,,,,,{}\n", csv_field(msg)));
                println!("{:<width$}  {:>9}  {:>9}  {:>9}  {:>5}  {:>5}  {msg}", row.file, "-", "-", "-", "-", "-");
            }
        }
    }

    ensure_dir(out)?;
    write_output(&out.join("report.csv"), csv.as_bytes())?;
    let mut manifest = RunManifest::new("report", json!({}));
    for path in inputs {
        // unreadable inputs are still listed, with the digest of nothing
        let bytes = fs::read(path).unwrap_or_default();
        manifest.input(path, &bytes);
    }
    manifest.write(&out.join("manifest.json"))?;

    if rows.iter().any(|r| r.record.is_ok()) {
        Ok(())
    } else {
        Err(CliError::usage("no valid result files"))
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

pub fn fit(input: &Path, variances: bool, out: &Path) -> Result<(), CliError> {
    let bytes = read_input(input)?;
    let prices = load_prices(bytes.as_slice()).map_err(|e| CliError::from_lib("ingest", e))?;
    let returns = compute_returns(&prices);
    let fitted = garch::fit(&returns, None).map_err(|e| CliError::from_lib("fit", e))?;

    ensure_dir(out)?;
    write_output(&out.join("fit.json"), &json_bytes(&fitted.summary()))?;
    if variances {
        let mut csv = Vec::new();
        fitted
            .write_variances_csv(&mut csv)
            .map_err(|e| CliError::from_lib("fit", e))?;
        write_output(&out.join("variances.csv"), &csv)?;
    }
    let mut manifest = RunManifest::new("fit", json!({"variances": variances}));
    manifest.input(input, &bytes);
    manifest.write(&out.join("manifest.json"))?;

    let p = fitted.params;
    println!(
        "omega = {:.6e}  alpha = {:.4}  beta = {:.4}  log-likelihood = {:.3}{}",
        p.omega(),
        p.alpha(),
        p.beta(),
        fitted.log_likelihood,
        if fitted.converged { "" } else { "  (not converged)" }
    );
    Ok(())
}
