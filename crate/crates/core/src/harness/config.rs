use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::channel::{expand_mimo_to_virtual, ChannelModel, Topology};
use crate::gf::is_prime;
use crate::snc::ExtensionPlan;

/// Which schemes a sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Snc,
    Cf,
    Both,
}

impl Scheme {
    pub fn runs_snc(self) -> bool {
        matches!(self, Scheme::Snc | Scheme::Both)
    }

    pub fn runs_cf(self) -> bool {
        matches!(self, Scheme::Cf | Scheme::Both)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Snc => "snc",
            Scheme::Cf => "cf",
            Scheme::Both => "both",
        })
    }
}

impl FromStr for Scheme {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "snc" => Ok(Scheme::Snc),
            "cf" => Ok(Scheme::Cf),
            "both" => Ok(Scheme::Both),
            other => Err(HarnessError::Usage(format!(
                "unknown scheme `{other}` (expected snc, cf or both)"
            ))),
        }
    }
}

/// Inclusive SNR grid in dB.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

/// Grids longer than this are rejected as a likely typo.
pub const MAX_GRID_POINTS: usize = 100_000;

impl SnrGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self, HarnessError> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(HarnessError::Usage("SNR grid values must be finite".into()));
        }
        if step <= 0.0 {
            return Err(HarnessError::Usage(format!(
                "SNR step must be positive, got {step}"
            )));
        }
        if stop < start {
            return Err(HarnessError::Usage(format!(
                "SNR stop {stop} is below start {start}"
            )));
        }
        let grid = Self { start, stop, step };
        if ((stop - start) / step) >= MAX_GRID_POINTS as f64 {
            return Err(HarnessError::Usage(format!(
                "SNR grid has more than {MAX_GRID_POINTS} points"
            )));
        }
        Ok(grid)
    }

    /// `start + i * step` for every `i` keeping the point at or below `stop`.
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| self.start + i as f64 * self.step)
            .collect()
    }
}

impl FromStr for SnrGrid {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_snr_grid(s)
    }
}

/// Parses `start:stop:step` in dB.
pub fn parse_snr_grid(s: &str) -> Result<SnrGrid, HarnessError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(HarnessError::Usage(format!(
            "SNR grid `{s}` is not start:stop:step"
        )));
    }
    let mut vals = [0.0; 3];
    for (v, p) in vals.iter_mut().zip(&parts) {
        *v = p
            .trim()
            .parse::<f64>()
            .map_err(|_| HarnessError::Usage(format!("`{p}` in SNR grid is not a number")))?;
    }
    SnrGrid::new(vals[0], vals[1], vals[2])
}

/// Largest antenna count accepted on one node.
pub const MAX_ANTENNAS: usize = 64;

/// Parses a comma-separated list of positive antenna counts.
pub fn parse_antenna_list(s: &str) -> Result<Vec<usize>, HarnessError> {
    s.split(',')
        .map(|p| {
            let a: usize = p
                .trim()
                .parse()
                .map_err(|_| HarnessError::Usage(format!("`{p}` is not an antenna count")))?;
            if a == 0 || a > MAX_ANTENNAS {
                return Err(HarnessError::Usage(format!(
                    "antenna count {a} outside 1..={MAX_ANTENNAS}"
                )));
            }
            Ok(a)
        })
        .collect()
}

/// Everything that determines a sweep. Serialized into the JSON sidecar so a
/// run can be replayed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Physical transmitters `K`.
    pub users: usize,
    /// Physical receivers `L`.
    pub receivers: usize,
    pub tx_antennas: Vec<usize>,
    pub rx_antennas: Vec<usize>,
    /// Extension parameter `n`.
    pub n: usize,
    pub scheme: Scheme,
    pub channel: ChannelModel,
    pub q: u64,
    pub snr: SnrGrid,
    pub trials: usize,
    pub seed: u64,
    pub p_max: f64,
    pub out: PathBuf,
    pub cf_radius: i64,
    pub cap_enabled: bool,
    /// SNR window (dB, inclusive) for the empirical DoF slope.
    pub dof_window: (f64, f64),
}

pub const DEFAULT_OUT: &str = "sweep.csv";

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            users: 2,
            receivers: 2,
            tx_antennas: vec![1, 1],
            rx_antennas: vec![1, 1],
            n: 2,
            scheme: Scheme::Both,
            channel: ChannelModel::Real,
            q: 2,
            snr: SnrGrid {
                start: 0.0,
                stop: 60.0,
                step: 5.0,
            },
            trials: 1000,
            seed: 0,
            p_max: 1.0,
            out: PathBuf::from(DEFAULT_OUT),
            cf_radius: crate::cf::DEFAULT_RADIUS,
            cap_enabled: true,
            dof_window: (40.0, 60.0),
        }
    }
}

/// Largest CF search box accepted, `(2r+1)^M` candidates per receiver.
const MAX_CF_CANDIDATES: u64 = 10_000_000;

impl SimConfig {
    pub fn topology(&self) -> Result<Topology, HarnessError> {
        Topology::new(self.tx_antennas.clone(), self.rx_antennas.clone())
            .map_err(|e| HarnessError::Usage(e.to_string()))
    }

    /// Virtual users `M` after antenna expansion.
    pub fn virtual_users(&self) -> Result<usize, HarnessError> {
        Ok(expand_mimo_to_virtual(&self.topology()?).m)
    }

    /// SNC extension plan, when the SNC scheme can run.
    pub fn plan(&self) -> Result<Option<ExtensionPlan>, HarnessError> {
        let m = self.virtual_users()?;
        if m < 2 {
            return Ok(None);
        }
        ExtensionPlan::new(m, self.n)
            .map(Some)
            .map_err(|e| HarnessError::Usage(e.to_string()))
    }

    /// Slots per trial: `N` when an extension plan exists, else 1.
    pub fn block_len(&self) -> Result<usize, HarnessError> {
        Ok(self.plan()?.map_or(1, |p| p.n_ext()))
    }

    /// Checks every invariant and every scheme-specific restriction.
    pub fn validate(&self) -> Result<(), HarnessError> {
        let usage = |m: String| Err(HarnessError::Usage(m));
        if self.users == 0 || self.receivers == 0 {
            return usage("need at least one transmitter and one receiver".into());
        }
        if self.tx_antennas.len() != self.users {
            return usage(format!(
                "{} transmit antenna counts for {} transmitters",
                self.tx_antennas.len(),
                self.users
            ));
        }
        if self.rx_antennas.len() != self.receivers {
            return usage(format!(
                "{} receive antenna counts for {} receivers",
                self.rx_antennas.len(),
                self.receivers
            ));
        }
        if self
            .tx_antennas
            .iter()
            .chain(&self.rx_antennas)
            .any(|&a| a == 0 || a > MAX_ANTENNAS)
        {
            return usage(format!("antenna counts must lie in 1..={MAX_ANTENNAS}"));
        }
        if self.n == 0 {
            return usage("extension parameter n must be at least 1".into());
        }
        if self.trials == 0 {
            return usage("trials must be at least 1".into());
        }
        SnrGrid::new(self.snr.start, self.snr.stop, self.snr.step)?;
        if !(self.p_max.is_finite() && self.p_max > 0.0) {
            return usage(format!(
                "p-max must be positive and finite, got {}",
                self.p_max
            ));
        }
        if self.q > u32::MAX as u64 || !is_prime(self.q) {
            return usage(format!("field size {} is not a prime", self.q));
        }
        let (lo, hi) = self.dof_window;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return usage(format!("DoF window ({lo}, {hi}) is empty"));
        }
        let m = self.virtual_users()?;
        if self.scheme.runs_snc() {
            if self.q != 2 {
                return usage(format!(
                    "snc uses BPSK and needs --field-size 2, got {}",
                    self.q
                ));
            }
            if m < 2 {
                return usage("snc needs at least two virtual users".into());
            }
            self.plan()?;
        }
        if self.scheme.runs_cf() {
            if self.users != self.receivers {
                return usage(format!(
                    "cf needs as many receivers as transmitters (K={}, L={})",
                    self.users, self.receivers
                ));
            }
            if self.channel != ChannelModel::Real {
                return usage("cf runs on real channels only".into());
            }
            if self.cf_radius < 1 {
                return usage(format!(
                    "cf radius must be at least 1, got {}",
                    self.cf_radius
                ));
            }
            let side = 2 * self.cf_radius.unsigned_abs() + 1;
            let fits = u32::try_from(m)
                .ok()
                .and_then(|m| side.checked_pow(m))
                .is_some_and(|c| c <= MAX_CF_CANDIDATES);
            if !fits {
                return usage(format!(
                    "cf search with radius {} over {m} users is too large",
                    self.cf_radius
                ));
            }
        }
        Ok(())
    }
}
