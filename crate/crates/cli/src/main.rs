//! `volclust`: analyze price files for volatility clustering, simulate
//! GARCH(1,1) price paths, and run the surrogate / GARCH-filter
//! comparison experiments.
//!
//! Exit codes: 0 success, 1 usage or validation error (including analysis
//! stages that cannot complete on the given data), 2 runtime failure
//! (I/O, or every experiment seed failing).

mod commands;
mod manifest;
mod settings;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::settings::AnalysisFlags;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    /// Library errors: I/O is a runtime failure, anything else is a
    /// problem with the input or settings.
    pub fn from_lib(context: &str, e: volclust::Error) -> Self {
        match e {
            volclust::Error::Io(_) => Self::runtime(format!("{context}: {e}")),
            _ => Self::usage(format!("{context}: {e}")),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Debug, Parser)]
#[command(name = "volclust", version, about = "Measure volatility clustering in return series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct GarchFlags {
    #[arg(long, default_value_t = 0.05)]
    pub omega: f64,
    #[arg(long, default_value_t = 0.10)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.85)]
    pub beta: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analyze a `timestamp,price` CSV; writes result.json, profile.csv and manifest.json
    Analyze {
        input: PathBuf,
        #[command(flatten)]
        analysis: AnalysisFlags,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Simulate a GARCH(1,1) return path and write it as prices starting at 100
    Simulate {
        #[command(flatten)]
        garch: GarchFlags,
        /// Number of returns (the file has n + 1 price rows)
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Factor applied to simulated returns before they are exponentiated
        #[arg(long, default_value_t = 0.01)]
        scale: f64,
        /// settings file (only `seed` is used)
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output CSV path; the manifest goes to `<out>.manifest.json`
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare DVC of simulated GARCH series against shuffled or GARCH-filtered versions
    Experiment {
        /// surrogate or garch-filter
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 200_000)]
        n: usize,
        /// Comma-separated simulation seeds
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6,7,8,9,10")]
        seeds: Vec<u64>,
        #[command(flatten)]
        garch: GarchFlags,
        #[command(flatten)]
        analysis: AnalysisFlags,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Tabulate result.json files from `analyze`
    Report {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Fit GARCH(1,1) by maximum likelihood to the returns of a price CSV
    Fit {
        input: PathBuf,
        /// Also write the conditional variances to variances.csv
        #[arg(long)]
        variances: bool,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { input, analysis, out } => commands::analyze(&input, &analysis, &out),
        Command::Simulate {
            garch,
            n,
            seed,
            scale,
            config,
            out,
        } => commands::simulate(&garch, n, seed, scale, config.as_deref(), &out),
        Command::Experiment {
            kind,
            n,
            seeds,
            garch,
            analysis,
            out,
        } => commands::experiment(&kind, n, &seeds, &garch, &analysis, &out),
        Command::Report { inputs, out } => commands::report(&inputs, &out),
        Command::Fit { input, variances, out } => commands::fit(&input, variances, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
