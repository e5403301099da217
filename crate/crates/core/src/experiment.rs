//! Paired raw-vs-transformed runs on simulated GARCH data: shuffled
//! surrogates, or standardized residuals of a fitted GARCH(1,1).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dvc::{analyze, AnalysisConfig, DvcResult};
use crate::error::{Error, Result};
use crate::garch::{self, GarchFitSummary, GarchParams};
use crate::surrogate::{shuffle, Seed};

/// Sub-stream of a seed used for the surrogate permutation.
pub const SHUFFLE_STREAM: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Surrogate,
    GarchFilter,
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExperimentKind::Surrogate => "surrogate",
            ExperimentKind::GarchFilter => "garch-filter",
        })
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "surrogate" => Ok(ExperimentKind::Surrogate),
            "garch-filter" => Ok(ExperimentKind::GarchFilter),
            other => Err(Error::InvalidArgument(format!(
                "unknown experiment kind {other:?} (expected surrogate or garch-filter)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopePair {
    pub p: f64,
    pub n: f64,
}

impl From<&DvcResult> for SlopePair {
    fn from(r: &DvcResult) -> Self {
        SlopePair { p: r.dvc_p, n: r.dvc_n }
    }
}

/// Outcome of one seed. Failed seeds carry only `error`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dvc_raw: Option<SlopePair>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dvc_transformed: Option<SlopePair>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fit: Option<GarchFitSummary>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

/// Full results of one seed, for callers that want the profiles too.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedRun {
    pub raw: DvcResult,
    pub transformed: DvcResult,
    pub fit: Option<garch::GarchFit>,
}

/// Simulates `n` steps from `source` and analyzes the series before and
/// after the transformation named by `kind`.
pub fn run_pair(
    kind: ExperimentKind,
    source: &GarchParams,
    n: usize,
    seed: Seed,
    config: &AnalysisConfig,
) -> Result<PairedRun> {
    let returns = garch::simulate(source, n, seed)?;
    let raw = analyze(&returns, config)?;
    let (transformed, fit) = match kind {
        ExperimentKind::Surrogate => (shuffle(&returns, seed.derive(SHUFFLE_STREAM))?, None),
        ExperimentKind::GarchFilter => {
            let fit = garch::fit(&returns, None)?;
            (garch::filter(&returns, &fit)?, Some(fit))
        }
    };
    let transformed = analyze(&transformed, config)?;
    Ok(PairedRun { raw, transformed, fit })
}

impl ExperimentRow {
    pub fn from_outcome(seed: u64, outcome: Result<PairedRun>) -> Self {
        match outcome {
            Ok(run) => ExperimentRow {
                seed,
                dvc_raw: Some((&run.raw).into()),
                dvc_transformed: Some((&run.transformed).into()),
                fit: run.fit.as_ref().map(|f| f.summary()),
                error: None,
            },
            Err(e) => ExperimentRow {
                seed,
                dvc_raw: None,
                dvc_transformed: None,
                fit: None,
                error: Some(e.to_string()),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MedianSlopes {
    pub p: f64,
    pub n: f64,
    pub abs_p: f64,
    pub abs_n: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Medians {
    pub raw: MedianSlopes,
    pub transformed: MedianSlopes,
    pub successful_seeds: usize,
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

fn median_slopes(pairs: &[SlopePair]) -> MedianSlopes {
    let ps: Vec<f64> = pairs.iter().map(|s| s.p).collect();
    let ns: Vec<f64> = pairs.iter().map(|s| s.n).collect();
    MedianSlopes {
        p: median(&ps),
        n: median(&ns),
        abs_p: median(&ps.iter().map(|x| x.abs()).collect::<Vec<_>>()),
        abs_n: median(&ns.iter().map(|x| x.abs()).collect::<Vec<_>>()),
    }
}

/// Medians over the successful rows; `None` if every seed failed.
pub fn medians(rows: &[ExperimentRow]) -> Option<Medians> {
    let (raw, transformed): (Vec<SlopePair>, Vec<SlopePair>) = rows
        .iter()
        .filter_map(|r| Some((r.dvc_raw?, r.dvc_transformed?)))
        .unzip();
    if raw.is_empty() {
        return None;
    }
    Some(Medians {
        raw: median_slopes(&raw),
        transformed: median_slopes(&transformed),
        successful_seeds: raw.len(),
    })
}
