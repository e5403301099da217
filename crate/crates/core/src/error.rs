use std::fmt;

use thiserror::Error;

/// Pipeline stage names used to tag errors coming out of [`crate::analyze`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Standardize,
    BuildBins,
    Symbolize,
    DvcProfile,
    FitDvc,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::Standardize => "standardize",
            Stage::BuildBins => "build_bins",
            Stage::Symbolize => "symbolize",
            Stage::DvcProfile => "dvc_profile",
            Stage::FitDvc => "fit_dvc",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    MalformedRow { line: u64, message: String },

    #[error("line {line}: price must be positive and finite, got {price}")]
    InvalidPrice { line: u64, price: f64 },

    #[error("line {line}: timestamp {timestamp:?} does not increase over previous {previous:?}")]
    NonIncreasingTimestamp {
        line: u64,
        timestamp: String,
        previous: String,
    },

    #[error("need at least 2 price rows, got {0}")]
    TooFewPrices(usize),

    #[error("series contains a non-finite value at position {0}")]
    NonFiniteValue(usize),

    #[error("series is empty")]
    EmptySeries,

    #[error("series has zero variance")]
    ZeroVariance,

    #[error("n_bins must be odd and at least 3, got {0}")]
    InvalidBinCount(usize),

    #[error("clip_sigmas must be positive and finite, got {0}")]
    InvalidClip(f64),

    #[error("bin edges must be strictly increasing and finite")]
    InvalidEdges,

    #[error("symbol index {index} out of range for {n_bins} bins")]
    SymbolOutOfRange { index: usize, n_bins: usize },

    #[error("conditional distribution for symbol {0} is empty")]
    EmptyDistribution(usize),

    #[error("min_count must be at least 1")]
    InvalidMinCount,

    #[error("no symbol has at least {min_count} observed transitions")]
    EmptyProfile { min_count: u64 },

    #[error("need at least 2 profile points with {side} symbol value, found {found}")]
    TooFewPoints { side: &'static str, found: usize },

    #[error("invalid GARCH parameters: {0}")]
    InvalidParams(String),

    #[error("likelihood evaluation produced a non-finite value")]
    NonFiniteLikelihood,

    #[error("series too short: need at least {needed} values, got {found}")]
    SeriesTooShort { needed: usize, found: usize },

    #[error("length mismatch: series has {series} values, fit has {fit}")]
    LengthMismatch { series: usize, fit: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn at(stage: Stage) -> impl FnOnce(Error) -> Error {
        move |source| Error::Stage {
            stage,
            source: Box::new(source),
        }
    }

    /// The pipeline stage this error was raised in, if it came from [`crate::analyze`].
    pub fn stage(&self) -> Option<Stage> {
        match self {
            Error::Stage { stage, .. } => Some(*stage),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
