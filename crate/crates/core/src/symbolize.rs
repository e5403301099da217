//! Mapping returns onto a finite alphabet of equal-width bins.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::ReturnSeries;

/// Equal-width partition of the return axis.
///
/// Bins are half-open `[edges[i], edges[i+1])`; values on an interior edge
/// belong to the higher bin. Values outside the outer edges are clipped
/// into the first or last bin, so every finite return has a symbol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawScheme")]
pub struct BinningScheme {
    n_bins: usize,
    edges: Vec<f64>,
    centers: Vec<f64>,
}

#[derive(Deserialize)]
struct RawScheme {
    n_bins: usize,
    edges: Vec<f64>,
    #[allow(dead_code)]
    centers: Vec<f64>,
}

impl TryFrom<RawScheme> for BinningScheme {
    type Error = Error;

    fn try_from(raw: RawScheme) -> Result<Self> {
        let scheme = BinningScheme::from_edges(raw.edges)?;
        if scheme.n_bins != raw.n_bins {
            return Err(Error::InvalidEdges);
        }
        Ok(scheme)
    }
}

fn check_bin_count(n_bins: usize) -> Result<()> {
    if n_bins >= 3 && n_bins % 2 == 1 {
        Ok(())
    } else {
        Err(Error::InvalidBinCount(n_bins))
    }
}

impl BinningScheme {
    /// Scheme from explicit edges; centers are the bin midpoints.
    pub fn from_edges(edges: Vec<f64>) -> Result<Self> {
        if edges.len() < 2 {
            return Err(Error::InvalidEdges);
        }
        let n_bins = edges.len() - 1;
        check_bin_count(n_bins)?;
        if edges.iter().any(|e| !e.is_finite()) || edges.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidEdges);
        }
        let centers = edges.windows(2).map(|w| (w[0] + w[1]) / 2.0).collect();
        Ok(Self {
            n_bins,
            edges,
            centers,
        })
    }

    /// `n_bins` equal bins over `[location - half_width, location + half_width]`.
    ///
    /// Unit offsets are computed as `(2i - n) / n`, which is exactly
    /// antisymmetric, so with `location = 0` the edges are symmetric and the
    /// middle center is exactly zero.
    pub fn symmetric(n_bins: usize, location: f64, half_width: f64) -> Result<Self> {
        check_bin_count(n_bins)?;
        if !(half_width.is_finite() && half_width > 0.0) || !location.is_finite() {
            return Err(Error::InvalidClip(half_width));
        }
        let n = n_bins as f64;
        let edges = (0..=n_bins)
            .map(|i| location + half_width * ((2.0 * i as f64 - n) / n))
            .collect();
        Self::from_edges(edges)
    }

    pub fn n_bins(&self) -> usize {
        self.n_bins
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    /// Bin index of a single value.
    pub fn index_of(&self, value: f64) -> usize {
        // number of interior edges <= value
        self.edges[1..self.n_bins].partition_point(|&e| e <= value)
    }

    /// Numeric value of a symbol: its bin midpoint.
    pub fn symbol_value(&self, index: usize) -> Result<f64> {
        self.centers
            .get(index)
            .copied()
            .ok_or(Error::SymbolOutOfRange {
                index,
                n_bins: self.n_bins,
            })
    }
}

/// Equal-width bins spanning `mean ± clip_sigmas * stdev` of `returns`.
pub fn build_bins(returns: &ReturnSeries, n_bins: usize, clip_sigmas: f64) -> Result<BinningScheme> {
    check_bin_count(n_bins)?;
    if !(clip_sigmas.is_finite() && clip_sigmas > 0.0) {
        return Err(Error::InvalidClip(clip_sigmas));
    }
    if returns.len() < 2 || returns.stdev() <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    BinningScheme::symmetric(n_bins, returns.mean(), clip_sigmas * returns.stdev())
}

/// A sequence of bin indices together with the scheme that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicSeries {
    indices: Vec<usize>,
    scheme: BinningScheme,
}

impl SymbolicSeries {
    pub fn new(indices: Vec<usize>, scheme: BinningScheme) -> Result<Self> {
        if let Some(&index) = indices.iter().find(|&&i| i >= scheme.n_bins) {
            return Err(Error::SymbolOutOfRange {
                index,
                n_bins: scheme.n_bins,
            });
        }
        Ok(Self { indices, scheme })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn scheme(&self) -> &BinningScheme {
        &self.scheme
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// `index,symbol` CSV (position, bin index).
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["index", "symbol"])?;
        for (i, s) in self.indices.iter().enumerate() {
            out.write_record([i.to_string(), s.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

pub fn symbolize(returns: &ReturnSeries, scheme: &BinningScheme) -> SymbolicSeries {
    let indices = returns.values().iter().map(|&r| scheme.index_of(r)).collect();
    SymbolicSeries {
        indices,
        scheme: scheme.clone(),
    }
}
