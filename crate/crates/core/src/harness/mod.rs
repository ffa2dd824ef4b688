//! Seeded Monte Carlo sweeps over SNR, configuration and CLI parsing, and
//! CSV/JSON output.

mod cli;
mod config;
mod output;
mod sweep;

use std::path::PathBuf;

use thiserror::Error;

pub use cli::parse_cli;
pub use config::{
    parse_antenna_list, parse_snr_grid, Scheme, SimConfig, SnrGrid, DEFAULT_OUT, MAX_ANTENNAS,
    MAX_GRID_POINTS,
};
pub use output::{
    csv_rows, parse_results_csv, parse_sidecar, sidecar, sidecar_path, write_csv, write_results,
    CsvRow, Sidecar, CSV_HEADER, NORMALIZATION,
};
pub use sweep::{
    db_to_linear, mean_std, run_sweep, run_sweep_with_workers, run_trial, trial_rng,
    workers_from_env, CfSample, DofSlope, SchemeKind, SncSample, SweepPoint, SweepResult,
    TrialSample, TrialSetup, ABORT_WARN_FRAC, MAX_RESAMPLES, WORKERS_ENV,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Cli(#[from] clap::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed results: {0}")]
    Format(String),
    #[error("trial {trial} aborted: {reason}")]
    TrialAborted { trial: usize, reason: String },
    #[error("worker pool: {0}")]
    Pool(String),
}

impl HarnessError {
    /// Process exit status: 0 for `--help`/`--version`, 1 for usage errors,
    /// 2 for I/O and everything else.
    pub fn exit_code(&self) -> i32 {
        use clap::error::ErrorKind;
        match self {
            HarnessError::Cli(e)
                if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) =>
            {
                0
            }
            HarnessError::Cli(_) | HarnessError::Usage(_) => 1,
            _ => 2,
        }
    }
}
