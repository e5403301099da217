use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::Deserialize;
use volclust::AnalysisConfig;

use crate::CliError;

/// Analysis flags shared by the commands that run the pipeline.
#[derive(Debug, Clone, Args)]
pub struct AnalysisFlags {
    /// Number of bins (odd, at least 3) [default: 41]
    #[arg(long)]
    pub bins: Option<usize>,
    /// Bin range half-width in standard deviations [default: 3]
    #[arg(long)]
    pub clip_sigmas: Option<f64>,
    /// Minimum transitions out of a symbol for it to enter the fit [default: 100]
    #[arg(long)]
    pub min_count: Option<u64>,
    /// Bin raw returns instead of the standardized series
    #[arg(long)]
    pub no_standardize: bool,
    /// key = value settings file; flags given on the command line win
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Keys accepted in a `--config` file.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileSettings {
    pub bins: Option<usize>,
    #[serde(alias = "clip-sigmas")]
    pub clip_sigmas: Option<f64>,
    #[serde(alias = "min-count")]
    pub min_count: Option<u64>,
    pub standardize: Option<bool>,
    pub seed: Option<u64>,
}

impl FileSettings {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::runtime(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::usage(format!("invalid config {}: {e}", path.display())))
    }
}

impl AnalysisFlags {
    pub fn file_settings(&self) -> Result<FileSettings, CliError> {
        match &self.config {
            Some(path) => FileSettings::load(path),
            None => Ok(FileSettings::default()),
        }
    }

    /// Defaults, overridden by the config file, overridden by flags.
    pub fn resolve(&self, file: &FileSettings) -> Result<AnalysisConfig, CliError> {
        let defaults = AnalysisConfig::default();
        let config = AnalysisConfig {
            n_bins: self.bins.or(file.bins).unwrap_or(defaults.n_bins),
            clip_sigmas: self.clip_sigmas.or(file.clip_sigmas).unwrap_or(defaults.clip_sigmas),
            min_count: self.min_count.or(file.min_count).unwrap_or(defaults.min_count),
            standardize_first: if self.no_standardize {
                false
            } else {
                file.standardize.unwrap_or(defaults.standardize_first)
            },
        };
        config
            .validate()
            .map_err(|e| CliError::usage(format!("invalid analysis settings: {e}")))?;
        Ok(config)
    }
}
