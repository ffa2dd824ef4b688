use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;

use super::config::{parse_antenna_list, parse_snr_grid, Scheme, SimConfig, SnrGrid, DEFAULT_OUT};
use super::HarnessError;
use crate::channel::ChannelModel;

fn snr_arg(s: &str) -> Result<SnrGrid, String> {
    parse_snr_grid(s).map_err(|e| e.to_string())
}

fn scheme_arg(s: &str) -> Result<Scheme, String> {
    s.parse::<Scheme>().map_err(|e| e.to_string())
}

fn channel_arg(s: &str) -> Result<ChannelModel, String> {
    s.parse::<ChannelModel>().map_err(|e| e.to_string())
}

/// Monte Carlo sum-rate sweeps for signal-aligned network coding and the
/// compute-and-forward baseline.
#[derive(Debug, Parser)]
#[command(name = "snc-sim", version)]
struct Args {
    /// Number of transmitters K.
    #[arg(long, default_value_t = 2)]
    users: usize,
    /// Number of receivers L [default: K].
    #[arg(long)]
    rx: Option<usize>,
    /// Comma-separated antenna count per transmitter [default: all 1].
    #[arg(long)]
    antennas_tx: Option<String>,
    /// Comma-separated antenna count per receiver [default: all 1].
    #[arg(long)]
    antennas_rx: Option<String>,
    /// Extension parameter n.
    #[arg(long, default_value_t = 2)]
    ext_n: usize,
    /// snc, cf or both.
    #[arg(long, default_value = "both", value_parser = scheme_arg)]
    scheme: Scheme,
    /// real or complex Gaussian channels.
    #[arg(long, default_value = "real", value_parser = channel_arg)]
    channel: ChannelModel,
    /// Prime field size q.
    #[arg(long, default_value_t = 2)]
    field_size: u64,
    /// SNR grid in dB as start:stop:step.
    #[arg(long, default_value = "0:60:5", value_parser = snr_arg)]
    snr: SnrGrid,
    /// Channel realizations per SNR point.
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Per-signal transmit power.
    #[arg(long, default_value_t = 1.0)]
    p_max: f64,
    /// Compute-and-forward coefficient search radius.
    #[arg(long, default_value_t = crate::cf::DEFAULT_RADIUS)]
    cf_radius: i64,
    /// Disable the per-stream backhaul cap log2(1 + SNR).
    #[arg(long)]
    no_backhaul_cap: bool,
    /// CSV output path; the JSON sidecar is written next to it.
    #[arg(long, default_value = DEFAULT_OUT)]
    out: PathBuf,
}

/// Parses command-line arguments (program name first) into a validated
/// configuration. `--help` and `--version` surface as [`HarnessError::Cli`].
pub fn parse_cli<I, T>(argv: I) -> Result<SimConfig, HarnessError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let a = Args::try_parse_from(argv)?;
    let receivers = a.rx.unwrap_or(a.users);
    let cfg = SimConfig {
        users: a.users,
        receivers,
        tx_antennas: a
            .antennas_tx
            .as_deref()
            .map_or(Ok(vec![1; a.users]), parse_antenna_list)?,
        rx_antennas: a
            .antennas_rx
            .as_deref()
            .map_or(Ok(vec![1; receivers]), parse_antenna_list)?,
        n: a.ext_n,
        scheme: a.scheme,
        channel: a.channel,
        q: a.field_size,
        snr: a.snr,
        trials: a.trials,
        seed: a.seed,
        p_max: a.p_max,
        out: a.out,
        cf_radius: a.cf_radius,
        cap_enabled: !a.no_backhaul_cap,
        ..SimConfig::default()
    };
    cfg.validate()?;
    Ok(cfg)
}
