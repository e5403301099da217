//! WebAssembly bindings for the demo page in `www/`.
//!
//! Each exported function returns a JSON string; the `*_json` functions
//! hold the logic so they can be tested natively.

use serde::Serialize;
use volclust::experiment::{run_pair, ExperimentKind};
use volclust::{analyze, compute_returns, load_prices, AnalysisConfig, DvcResult, GarchFitSummary, GarchParams, Seed};
use wasm_bindgen::prelude::*;

/// Keeps a single call responsive in the browser.
pub const MAX_STEPS: usize = 1_000_000;

#[derive(Serialize)]
struct Contrast {
    kind: ExperimentKind,
    raw: DvcResult,
    transformed: DvcResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    fit: Option<GarchFitSummary>,
}

#[derive(Serialize)]
struct CsvAnalysis {
    n_returns: usize,
    result: DvcResult,
}

fn config(n_bins: usize, clip_sigmas: f64, min_count: u32) -> Result<AnalysisConfig, String> {
    let config = AnalysisConfig {
        n_bins,
        clip_sigmas,
        min_count: u64::from(min_count),
        ..AnalysisConfig::default()
    };
    config.validate().map_err(|e| e.to_string())?;
    Ok(config)
}

fn contrast(kind: ExperimentKind, omega: f64, alpha: f64, beta: f64, n: usize, seed: u64) -> Result<String, String> {
    if n > MAX_STEPS {
        return Err(format!("n is capped at {MAX_STEPS} in the browser"));
    }
    let params = GarchParams::new(omega, alpha, beta).map_err(|e| e.to_string())?;
    let run = run_pair(kind, &params, n, Seed(seed), &AnalysisConfig::default()).map_err(|e| e.to_string())?;
    let out = Contrast {
        kind,
        raw: run.raw,
        transformed: run.transformed,
        fit: run.fit.map(|f| f.summary()),
    };
    Ok(serde_json::to_string(&out).expect("serializes"))
}

/// Simulated GARCH(1,1) series against a shuffled copy of itself.
pub fn surrogate_contrast_json(omega: f64, alpha: f64, beta: f64, n: usize, seed: u64) -> Result<String, String> {
    contrast(ExperimentKind::Surrogate, omega, alpha, beta, n, seed)
}

/// Simulated GARCH(1,1) series against its fitted standardized residuals.
pub fn filter_contrast_json(omega: f64, alpha: f64, beta: f64, n: usize, seed: u64) -> Result<String, String> {
    contrast(ExperimentKind::GarchFilter, omega, alpha, beta, n, seed)
}

/// Analyzes pasted `timestamp,price` CSV text.
pub fn analyze_csv_json(text: &str, n_bins: usize, clip_sigmas: f64, min_count: u32) -> Result<String, String> {
    let config = config(n_bins, clip_sigmas, min_count)?;
    let prices = load_prices(text.as_bytes()).map_err(|e| e.to_string())?;
    let returns = compute_returns(&prices);
    let result = analyze(&returns, &config).map_err(|e| e.to_string())?;
    let out = CsvAnalysis {
        n_returns: returns.len(),
        result,
    };
    Ok(serde_json::to_string(&out).expect("serializes"))
}

#[wasm_bindgen]
pub fn surrogate_contrast(omega: f64, alpha: f64, beta: f64, n: usize, seed: u32) -> Result<String, JsError> {
    surrogate_contrast_json(omega, alpha, beta, n, u64::from(seed)).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn filter_contrast(omega: f64, alpha: f64, beta: f64, n: usize, seed: u32) -> Result<String, JsError> {
    filter_contrast_json(omega, alpha, beta, n, u64::from(seed)).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn analyze_csv(text: &str, n_bins: usize, clip_sigmas: f64, min_count: u32) -> Result<String, JsError> {
    analyze_csv_json(text, n_bins, clip_sigmas, min_count).map_err(|e| JsError::new(&e))
}
