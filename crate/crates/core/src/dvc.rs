//! Conditional successor distributions and the degree of volatility
//! clustering (DVC).
//!
//! For every conditioning symbol `S_T` with enough observed transitions we
//! take the conditional mean magnitude of the next symbol,
//! `abs_mean(S_T) = Σ_j |center_j| · P(S_j | S_T)`, and regress it against
//! `S_T` separately on the non-negative and negative sides. The two slopes
//! are `dvc_p` and `dvc_n`. A profile that does not depend on `S_T` gives
//! slopes near zero; volatility clustering makes `abs_mean` grow with
//! `|S_T|`, so `dvc_p > 0` and `dvc_n < 0`.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Stage};
use crate::ingest::{standardize, ReturnSeries};
use crate::symbolize::{build_bins, symbolize, BinningScheme, SymbolicSeries};

/// Control parameters of the analysis pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub n_bins: usize,
    pub clip_sigmas: f64,
    /// Minimum number of observed transitions out of a symbol for it to
    /// contribute a profile point.
    pub min_count: u64,
    pub standardize_first: bool,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            n_bins: 41,
            clip_sigmas: 3.0,
            min_count: 100,
            standardize_first: true,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_bins < 3 || self.n_bins % 2 == 0 {
            return Err(Error::InvalidBinCount(self.n_bins));
        }
        if !(self.clip_sigmas.is_finite() && self.clip_sigmas > 0.0) {
            return Err(Error::InvalidClip(self.clip_sigmas));
        }
        if self.min_count == 0 {
            return Err(Error::InvalidMinCount);
        }
        Ok(())
    }
}

/// Full transition-count matrix of a symbolic series, row = current symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionCounts {
    n_bins: usize,
    counts: Vec<u64>,
}

impl TransitionCounts {
    pub fn from_series(series: &SymbolicSeries) -> Self {
        let n_bins = series.scheme().n_bins();
        let mut counts = vec![0u64; n_bins * n_bins];
        for w in series.indices().windows(2) {
            counts[w[0] * n_bins + w[1]] += 1;
        }
        Self { n_bins, counts }
    }

    pub fn n_bins(&self) -> usize {
        self.n_bins
    }

    pub fn row(&self, from: usize) -> &[u64] {
        &self.counts[from * self.n_bins..(from + 1) * self.n_bins]
    }

    pub fn get(&self, from: usize, to: usize) -> u64 {
        self.counts[from * self.n_bins + to]
    }
}

/// Empirical distribution of the symbol following `conditioning_symbol`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionalDistribution {
    pub conditioning_symbol: usize,
    /// Successor symbol -> probability. Only observed successors appear.
    pub probabilities: BTreeMap<usize, f64>,
    /// Successor symbol -> raw transition count.
    pub counts: BTreeMap<usize, u64>,
    /// Number of transitions observed out of the conditioning symbol.
    pub support_count: u64,
}

impl ConditionalDistribution {
    /// Builds the distribution from a row of successor counts indexed by symbol.
    pub fn from_counts(conditioning_symbol: usize, row: &[u64]) -> Self {
        let support_count: u64 = row.iter().sum();
        let counts: BTreeMap<usize, u64> = row
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(j, &c)| (j, c))
            .collect();
        let probabilities = counts
            .iter()
            .map(|(&j, &c)| (j, c as f64 / support_count as f64))
            .collect();
        Self {
            conditioning_symbol,
            probabilities,
            counts,
            support_count,
        }
    }
}

pub fn conditional_distribution(
    series: &SymbolicSeries,
    conditioning_symbol: usize,
) -> Result<ConditionalDistribution> {
    let n_bins = series.scheme().n_bins();
    if conditioning_symbol >= n_bins {
        return Err(Error::SymbolOutOfRange {
            index: conditioning_symbol,
            n_bins,
        });
    }
    let mut row = vec![0u64; n_bins];
    for w in series.indices().windows(2) {
        if w[0] == conditioning_symbol {
            row[w[1]] += 1;
        }
    }
    Ok(ConditionalDistribution::from_counts(conditioning_symbol, &row))
}

/// Probability-weighted mean of the absolute successor symbol values.
pub fn conditional_abs_mean(dist: &ConditionalDistribution, scheme: &BinningScheme) -> Result<f64> {
    if dist.support_count == 0 {
        return Err(Error::EmptyDistribution(dist.conditioning_symbol));
    }
    dist.probabilities.iter().try_fold(0.0, |acc, (&j, &p)| {
        Ok(acc + scheme.symbol_value(j)?.abs() * p)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DvcPoint {
    pub s_value: f64,
    pub abs_mean: f64,
    pub count: u64,
}

/// Points `(S_T, abs_mean, N_T)` sorted by strictly increasing `S_T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DvcProfile {
    points: Vec<DvcPoint>,
}

impl DvcProfile {
    /// Validates ordering and non-negativity.
    pub fn new(points: Vec<DvcPoint>) -> Result<Self> {
        if points.windows(2).any(|w| !(w[0].s_value < w[1].s_value)) {
            return Err(Error::InvalidArgument("profile points must have strictly increasing s_value".into()));
        }
        if points.iter().any(|p| !(p.abs_mean >= 0.0) || !p.s_value.is_finite()) {
            return Err(Error::InvalidArgument("profile abs_mean must be non-negative and finite".into()));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[DvcPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `s_value,abs_mean,count` CSV.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["s_value", "abs_mean", "count"])?;
        for p in &self.points {
            out.write_record([p.s_value.to_string(), p.abs_mean.to_string(), p.count.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

pub fn dvc_profile(series: &SymbolicSeries, min_count: u64) -> Result<DvcProfile> {
    if min_count == 0 {
        return Err(Error::InvalidMinCount);
    }
    let scheme = series.scheme();
    let transitions = TransitionCounts::from_series(series);
    let mut points = Vec::new();
    for symbol in 0..scheme.n_bins() {
        let dist = ConditionalDistribution::from_counts(symbol, transitions.row(symbol));
        if dist.support_count < min_count {
            continue;
        }
        points.push(DvcPoint {
            s_value: scheme.centers()[symbol],
            abs_mean: conditional_abs_mean(&dist, scheme)?,
            count: dist.support_count,
        });
    }
    if points.is_empty() {
        return Err(Error::EmptyProfile { min_count });
    }
    Ok(DvcProfile { points })
}

/// Fitted DVC slopes and the profile they were fitted on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DvcResult {
    pub dvc_p: f64,
    pub dvc_n: f64,
    pub intercept_p: f64,
    pub intercept_n: f64,
    pub n_points_pos: usize,
    pub n_points_neg: usize,
    pub profile: DvcProfile,
}

/// Least-squares line `y = a + b x`; returns `(b, a)`. Needs two distinct x.
fn least_squares(points: &[DvcPoint]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.s_value).sum::<f64>() / n;
    let my = points.iter().map(|p| p.abs_mean).sum::<f64>() / n;
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |(sxy, sxx), p| {
        let dx = p.s_value - mx;
        (sxy + dx * (p.abs_mean - my), sxx + dx * dx)
    });
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Per-side least-squares slopes of `abs_mean` against `s_value`.
/// The zero symbol (if present) belongs to the non-negative side.
pub fn fit_dvc(profile: &DvcProfile) -> Result<DvcResult> {
    let split = profile.points.partition_point(|p| p.s_value < 0.0);
    let (neg, pos) = profile.points.split_at(split);
    if pos.len() < 2 {
        return Err(Error::TooFewPoints {
            side: "non-negative",
            found: pos.len(),
        });
    }
    if neg.len() < 2 {
        return Err(Error::TooFewPoints {
            side: "negative",
            found: neg.len(),
        });
    }
    let (dvc_p, intercept_p) = least_squares(pos);
    let (dvc_n, intercept_n) = least_squares(neg);
    Ok(DvcResult {
        dvc_p,
        dvc_n,
        intercept_p,
        intercept_n,
        n_points_pos: pos.len(),
        n_points_neg: neg.len(),
        profile: profile.clone(),
    })
}

/// Standardize (optionally), bin, symbolize, profile and fit.
pub fn analyze(returns: &ReturnSeries, config: &AnalysisConfig) -> Result<DvcResult> {
    config.validate()?;
    let standardized;
    let input = if config.standardize_first {
        standardized = standardize(returns).map_err(Error::at(Stage::Standardize))?;
        &standardized
    } else {
        returns
    };
    let scheme =
        build_bins(input, config.n_bins, config.clip_sigmas).map_err(Error::at(Stage::BuildBins))?;
    let symbols = symbolize(input, &scheme);
    let profile = dvc_profile(&symbols, config.min_count).map_err(Error::at(Stage::DvcProfile))?;
    fit_dvc(&profile).map_err(Error::at(Stage::FitDvc))
}

/// The serialized form of an analysis: the result plus the configuration
/// that produced it and the absolute value of `dvc_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisRecord {
    #[serde(flatten)]
    pub result: DvcResult,
    pub abs_dvc_n: f64,
    pub config: AnalysisConfig,
    pub method: String,
}

/// Describes how `abs_mean` and the slopes are computed; written into
/// every record so readers of the JSON know the definitions.
pub const METHOD_NOTE: &str = "abs_mean = sum_j |center_j| * P(S_j | S_T); dvc_p, dvc_n = least-squares slopes (with intercept) of abs_mean on S_T over S_T >= 0 and S_T < 0";

impl AnalysisRecord {
    pub fn new(result: DvcResult, config: AnalysisConfig) -> Self {
        Self {
            abs_dvc_n: result.dvc_n.abs(),
            result,
            config,
            method: METHOD_NOTE.to_owned(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }
}
