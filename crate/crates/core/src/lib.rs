//! Measuring volatility clustering in return series.
//!
//! Returns are symbolized into equal-width bins, the distribution of the
//! next symbol is estimated for each conditioning symbol, and the mean
//! magnitude of the successor is regressed against the conditioning symbol
//! value on each side of zero. The slopes, `dvc_p` and `dvc_n`, measure
//! how strongly large moves follow large moves.
//!
//! GARCH(1,1) simulation and filtering plus shuffled surrogates provide
//! the synthetic checks: clustered data gives clearly non-zero slopes,
//! while shuffled or GARCH-filtered data gives slopes near zero.

pub mod dvc;
pub mod error;
pub mod experiment;
pub mod garch;
pub mod ingest;
pub mod optim;
pub mod surrogate;
pub mod symbolize;

pub use dvc::{
    analyze, conditional_abs_mean, conditional_distribution, dvc_profile, fit_dvc, AnalysisConfig,
    AnalysisRecord, ConditionalDistribution, DvcPoint, DvcProfile, DvcResult, TransitionCounts,
};
pub use error::{Error, Result, Stage};
pub use garch::{GarchFit, GarchFitSummary, GarchParams};
pub use ingest::{compute_returns, load_prices, standardize, PriceSeries, ReturnSeries};
pub use surrogate::{iid_gaussian, shuffle, Seed};
pub use symbolize::{build_bins, symbolize, BinningScheme, SymbolicSeries};
