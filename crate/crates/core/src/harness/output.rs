use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::SimConfig;
use super::sweep::{DofSlope, SchemeKind, SweepResult};
use super::HarnessError;
use crate::channel::ChannelModel;
use crate::snc::theoretical_dof;

/// One CSV row; field order is the column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub scheme: SchemeKind,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub n: usize,
    pub q: u64,
    pub channel_model: ChannelModel,
    pub snr_db: f64,
    pub trials: usize,
    pub mean_sum_rate: f64,
    pub std_sum_rate: f64,
    pub outage_frac: f64,
    pub detected_err_frac: f64,
}

pub const CSV_HEADER: &str = "scheme,K,L,n,q,channel_model,snr_db,trials,mean_sum_rate,\
std_sum_rate,outage_frac,detected_err_frac";

/// Run metadata written next to the CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub tool: String,
    pub version: String,
    pub config: SimConfig,
    pub seed: u64,
    pub virtual_users: usize,
    /// Extension length `N`; sum-rates are divided by it.
    pub block_len: usize,
    pub normalization: String,
    /// `(N + (M-1) N') / N`, when SNC ran.
    pub theoretical_dof: Option<f64>,
    pub dof_slopes: Vec<DofSlope>,
    pub aborted_trials: usize,
    pub warnings: Vec<String>,
}

pub const NORMALIZATION: &str = "per channel use";

pub fn csv_rows(res: &SweepResult) -> Vec<CsvRow> {
    let c = &res.config;
    res.points
        .iter()
        .map(|p| CsvRow {
            scheme: p.scheme,
            k: c.users,
            l: c.receivers,
            n: c.n,
            q: c.q,
            channel_model: c.channel,
            snr_db: p.snr_db,
            trials: p.trials,
            mean_sum_rate: p.mean_sum_rate,
            std_sum_rate: p.std_sum_rate,
            outage_frac: p.outage_frac,
            detected_err_frac: p.detected_err_frac,
        })
        .collect()
}

pub fn sidecar(res: &SweepResult) -> Result<Sidecar, HarnessError> {
    let theoretical = if res.config.scheme.runs_snc() {
        res.config.plan()?.map(|p| theoretical_dof(&p).total)
    } else {
        None
    };
    Ok(Sidecar {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: res.config.clone(),
        seed: res.config.seed,
        virtual_users: res.virtual_users,
        block_len: res.block_len,
        normalization: NORMALIZATION.to_string(),
        theoretical_dof: theoretical,
        dof_slopes: res.dof_slopes.clone(),
        aborted_trials: res.aborted_trials,
        warnings: res.warnings.clone(),
    })
}

/// Writes the CSV; the header is always present, even with no rows.
pub fn write_csv<W: Write>(res: &SweepResult, w: W) -> Result<(), HarnessError> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    wtr.write_record(CSV_HEADER.split(','))?;
    for row in csv_rows(res) {
        wtr.serialize(row)?;
    }
    wtr.flush().map_err(|e| HarnessError::Io {
        path: PathBuf::from("<csv>"),
        source: e,
    })?;
    Ok(())
}

/// `results.csv` -> `results.csv.json`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    let mut s = csv_path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes the CSV to `path` and the JSON sidecar to [`sidecar_path`].
pub fn write_results(res: &SweepResult, path: &Path) -> Result<PathBuf, HarnessError> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    write_csv(res, &mut w).map_err(|e| match e {
        HarnessError::Csv(c) => HarnessError::Io {
            path: path.to_path_buf(),
            source: std::io::Error::other(c.to_string()),
        },
        other => other,
    })?;
    w.flush().map_err(io_err(path))?;

    let side = sidecar_path(path);
    let json = serde_json::to_string_pretty(&sidecar(res)?)?;
    std::fs::write(&side, json + "\n").map_err(io_err(&side))?;
    Ok(side)
}

/// Parses CSV produced by [`write_csv`], checking the header.
pub fn parse_results_csv<R: Read>(r: R) -> Result<Vec<CsvRow>, HarnessError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let header = rdr.headers()?.iter().collect::<Vec<_>>().join(",");
    if header != CSV_HEADER {
        return Err(HarnessError::Format(format!(
            "unexpected CSV header `{header}`"
        )));
    }
    rdr.deserialize()
        .map(|r| r.map_err(HarnessError::from))
        .collect()
}

pub fn parse_sidecar(s: &str) -> Result<Sidecar, HarnessError> {
    let side: Sidecar = serde_json::from_str(s)?;
    side.config.validate()?;
    Ok(side)
}
