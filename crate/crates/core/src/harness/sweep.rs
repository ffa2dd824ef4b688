use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::SimConfig;
use super::HarnessError;
use crate::cf::cf_trial_sum_rate;
use crate::channel::{sample_extended_channel, sample_noise, ChannelRealization, NoiseModel};
use crate::gf::PrimeField;
use crate::phy::{
    backhaul_capacity, end_to_end_sum_rate, estimate_dof_slope, filter_and_demodulate, link_rates,
    modulate_bpsk, signal_rate, transmit, MessageVector, RateReport,
};
use crate::snc::{
    build_effective_system, build_filters, build_precoders, cp_recover, EffectiveSystem,
    ExtensionPlan, FilterSet, PrecoderSet, SncError,
};

/// Channel redraws allowed after the first when the SNC construction fails.
pub const MAX_RESAMPLES: usize = 3;

/// Aborted-trial fraction above which a sweep carries a warning.
pub const ABORT_WARN_FRAC: f64 = 0.01;

/// Environment variable overriding the worker count.
pub const WORKERS_ENV: &str = "SNC_WORKERS";

/// Per-trial random generator: the master seed selects the key, the trial
/// index selects the stream.
pub fn trial_rng(seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial_index);
    rng
}

struct SncState {
    precoders: PrecoderSet,
    filters: FilterSet,
    eff: EffectiveSystem,
    messages: Vec<MessageVector>,
    unit_noise: Vec<Vec<Complex64>>,
}

/// Everything drawn once per trial and reused at every SNR point, so the
/// curves are paired across SNR and across schemes.
pub struct TrialSetup {
    cfg: SimConfig,
    channel: ChannelRealization,
    snc: Option<SncState>,
    resamples: usize,
}

/// SNC outcome at one SNR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SncSample {
    /// Bits per channel use.
    pub sum_rate: f64,
    pub detected_error: bool,
    /// Recovered messages differ from the transmitted ones.
    pub message_error: bool,
}

/// CF outcome at one SNR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CfSample {
    /// Bits per channel use.
    pub sum_rate: f64,
    pub outage_slots: usize,
    pub slots: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSample {
    pub snc: Option<SncSample>,
    pub cf: Option<CfSample>,
}

fn build_snc(
    h: &ChannelRealization,
    plan: &ExtensionPlan,
    cfg: &SimConfig,
) -> Result<(PrecoderSet, FilterSet, EffectiveSystem), SncError> {
    let precoders = build_precoders(h, plan, cfg.p_max)?;
    let filters = build_filters(h, &precoders)?;
    let field = PrimeField::new(cfg.q)?;
    let eff = build_effective_system(h, &precoders, &filters, plan, field)?;
    if eff.field() != field {
        return Err(SncError::Plan(format!(
            "effective system needs {}",
            eff.field()
        )));
    }
    Ok((precoders, filters, eff))
}

impl TrialSetup {
    /// Draws the channel (redrawing up to [`MAX_RESAMPLES`] times when the SNC
    /// construction fails), the messages and unit-variance noise.
    pub fn new(cfg: &SimConfig, trial_index: usize) -> Result<Self, HarnessError> {
        let mut rng = trial_rng(cfg.seed, trial_index as u64);
        let plan = cfg.plan()?;
        let m = cfg.virtual_users()?;
        let n_ext = cfg.block_len()?;
        let draw = |rng: &mut ChaCha8Rng| sample_extended_channel(m, m, n_ext, cfg.channel, rng);

        let (channel, built, resamples) = match plan.as_ref().filter(|_| cfg.scheme.runs_snc()) {
            None => (draw(&mut rng), None, 0),
            Some(plan) => {
                let mut attempt = 0;
                loop {
                    let h = draw(&mut rng);
                    match build_snc(&h, plan, cfg) {
                        Ok(b) => break (h, Some(b), attempt),
                        Err(e) if attempt == MAX_RESAMPLES => {
                            return Err(HarnessError::TrialAborted {
                                trial: trial_index,
                                reason: e.to_string(),
                            })
                        }
                        Err(_) => attempt += 1,
                    }
                }
            }
        };

        let snc = built.map(|(precoders, filters, eff)| {
            let messages = (0..eff.transmitters())
                .map(|k| {
                    let bits = (0..eff.streams(k))
                        .map(|_| rng.random_range(0..2u32))
                        .collect();
                    MessageVector::new(eff.field(), bits).expect("bits lie in GF(2)")
                })
                .collect();
            let unit = NoiseModel::new(1.0).expect("unit variance");
            let unit_noise = (0..eff.receivers())
                .map(|_| sample_noise(n_ext, unit, cfg.channel, &mut rng))
                .collect();
            SncState {
                precoders,
                filters,
                eff,
                messages,
                unit_noise,
            }
        });
        Ok(Self {
            cfg: cfg.clone(),
            channel,
            snc,
            resamples,
        })
    }

    pub fn channel(&self) -> &ChannelRealization {
        &self.channel
    }

    /// Channel redraws this trial needed.
    pub fn resamples(&self) -> usize {
        self.resamples
    }

    pub fn effective_system(&self) -> Option<&EffectiveSystem> {
        self.snc.as_ref().map(|s| &s.eff)
    }

    /// Full SNC rate report at `snr_db`.
    pub fn snc_rate_report(&self, snr_db: f64) -> Option<RateReport> {
        let s = self.snc.as_ref()?;
        let rho = db_to_linear(snr_db);
        let sigma2 = self.cfg.p_max / rho;
        let links = link_rates(&self.channel, &s.precoders, &s.filters, &s.eff, sigma2);
        let per_signal = signal_rate(&links, &s.eff).expect("full-rank F covers every stream");
        let cap = self.cfg.cap_enabled.then(|| backhaul_capacity(rho));
        Some(end_to_end_sum_rate(links, per_signal, cap))
    }

    fn snc_sample(&self, snr_db: f64) -> Option<SncSample> {
        let s = self.snc.as_ref()?;
        let report = self.snc_rate_report(snr_db)?;
        let scale = (self.cfg.p_max / db_to_linear(snr_db)).sqrt();
        let noise: Vec<Vec<Complex64>> = s
            .unit_noise
            .iter()
            .map(|n| n.iter().map(|z| z * scale).collect())
            .collect();
        let x = s
            .messages
            .iter()
            .map(modulate_bpsk)
            .collect::<Result<Vec<_>, _>>()
            .expect("SNC runs over GF(2)");
        let y = transmit(&self.channel, &s.precoders, &x, &noise).expect("shapes follow the plan");
        let forwarded: Vec<u32> = filter_and_demodulate(&y, &s.filters, &s.eff)
            .expect("shapes follow the plan")
            .into_iter()
            .flat_map(MessageVector::into_symbols)
            .collect();
        let rec = cp_recover(&s.eff, &forwarded).expect("demodulated bits lie in GF(2)");
        let message_error = rec
            .messages
            .iter()
            .zip(&s.messages)
            .any(|(got, sent)| got != sent.symbols());
        Some(SncSample {
            sum_rate: report.sum_rate / s.eff.n_ext() as f64,
            detected_error: rec.detected_error,
            message_error,
        })
    }

    fn cf_sample(&self, snr_db: f64) -> Result<Option<CfSample>, HarnessError> {
        if !self.cfg.scheme.runs_cf() {
            return Ok(None);
        }
        let rho = db_to_linear(snr_db);
        let field = PrimeField::new(self.cfg.q).map_err(|e| HarnessError::Usage(e.to_string()))?;
        let cap = self.cfg.cap_enabled.then(|| backhaul_capacity(rho));
        let t = cf_trial_sum_rate(&self.channel, rho, field, self.cfg.cf_radius, cap)
            .map_err(|e| HarnessError::Usage(e.to_string()))?;
        Ok(Some(CfSample {
            sum_rate: t.sum_rate / t.slots as f64,
            outage_slots: t.outage_slots,
            slots: t.slots,
        }))
    }

    /// Evaluates every configured scheme at `snr_db`.
    pub fn evaluate(&self, snr_db: f64) -> Result<TrialSample, HarnessError> {
        Ok(TrialSample {
            snc: self.snc_sample(snr_db),
            cf: self.cf_sample(snr_db)?,
        })
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// One trial at one SNR. Deterministic in `(cfg.seed, trial_index)`.
pub fn run_trial(
    cfg: &SimConfig,
    snr_db: f64,
    trial_index: usize,
) -> Result<TrialSample, HarnessError> {
    TrialSetup::new(cfg, trial_index)?.evaluate(snr_db)
}

/// Which scheme a CSV row describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    Snc,
    Cf,
}

impl SchemeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SchemeKind::Snc => "snc",
            SchemeKind::Cf => "cf",
        }
    }
}

/// Aggregate of one `(scheme, snr)` grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub scheme: SchemeKind,
    pub snr_db: f64,
    pub trials: usize,
    /// Bits per channel use.
    pub mean_sum_rate: f64,
    /// Sample standard deviation across trials.
    pub std_sum_rate: f64,
    /// Fraction of slots in rank-deficiency outage (CF only).
    pub outage_frac: f64,
    /// Fraction of trials whose redundant equations exposed a bit error (SNC only).
    pub detected_err_frac: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DofSlope {
    pub scheme: SchemeKind,
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: SimConfig,
    pub virtual_users: usize,
    pub block_len: usize,
    pub points: Vec<SweepPoint>,
    /// Empirical DoF per channel use, only when the backhaul cap is disabled.
    pub dof_slopes: Vec<DofSlope>,
    pub aborted_trials: usize,
    pub warnings: Vec<String>,
}

impl SweepResult {
    pub fn point(&self, scheme: SchemeKind, snr_db: f64) -> Option<&SweepPoint> {
        self.points
            .iter()
            .find(|p| p.scheme == scheme && p.snr_db == snr_db)
    }

    pub fn curve(&self, scheme: SchemeKind) -> Vec<&SweepPoint> {
        self.points.iter().filter(|p| p.scheme == scheme).collect()
    }

    pub fn dof_slope(&self, scheme: SchemeKind) -> Option<f64> {
        self.dof_slopes
            .iter()
            .find(|d| d.scheme == scheme)
            .map(|d| d.slope)
    }
}

/// Mean and sample standard deviation (0 for a single sample).
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Worker count from [`WORKERS_ENV`], if set to a positive integer.
pub fn workers_from_env() -> Option<usize> {
    std::env::var(WORKERS_ENV)
        .ok()?
        .trim()
        .parse()
        .ok()
        .filter(|&w| w > 0)
}

/// Runs the sweep on a pool sized by [`WORKERS_ENV`] (rayon's default otherwise).
pub fn run_sweep(cfg: &SimConfig) -> Result<SweepResult, HarnessError> {
    run_sweep_with_workers(cfg, workers_from_env())
}

/// Runs every trial at every grid point. Trials are computed in parallel and
/// merged in index order, so the result does not depend on `workers`.
pub fn run_sweep_with_workers(
    cfg: &SimConfig,
    workers: Option<usize>,
) -> Result<SweepResult, HarnessError> {
    cfg.validate()?;
    let snrs = cfg.snr.points();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| HarnessError::Pool(e.to_string()))?;

    let per_trial: Vec<Result<Option<Vec<TrialSample>>, HarnessError>> = pool.install(|| {
        (0..cfg.trials)
            .into_par_iter()
            .map(|t| match TrialSetup::new(cfg, t) {
                Ok(setup) => snrs
                    .iter()
                    .map(|&s| setup.evaluate(s))
                    .collect::<Result<_, _>>()
                    .map(Some),
                Err(HarnessError::TrialAborted { .. }) => Ok(None),
                Err(e) => Err(e),
            })
            .collect()
    });
    let mut completed = Vec::with_capacity(cfg.trials);
    let mut aborted_trials = 0;
    for r in per_trial {
        match r? {
            Some(samples) => completed.push(samples),
            None => aborted_trials += 1,
        }
    }
    aggregate(cfg, &snrs, &completed, aborted_trials)
}

fn aggregate(
    cfg: &SimConfig,
    snrs: &[f64],
    completed: &[Vec<TrialSample>],
    aborted_trials: usize,
) -> Result<SweepResult, HarnessError> {
    let mut points = Vec::new();
    let mut dof_slopes = Vec::new();
    let mut warnings = Vec::new();
    let block_len = cfg.block_len()?;
    let kinds = [
        (SchemeKind::Snc, cfg.scheme.runs_snc()),
        (SchemeKind::Cf, cfg.scheme.runs_cf()),
    ];

    for (kind, _) in kinds.iter().filter(|(_, on)| *on) {
        if completed.is_empty() {
            warnings.push(format!("{}: every trial aborted, no points", kind.as_str()));
            continue;
        }
        let mut means = Vec::with_capacity(snrs.len());
        for (i, &snr_db) in snrs.iter().enumerate() {
            let (rates, outage, detected): (Vec<f64>, f64, f64) = match kind {
                SchemeKind::Snc => {
                    let s: Vec<&SncSample> = completed
                        .iter()
                        .map(|t| t[i].snc.as_ref().expect("snc ran"))
                        .collect();
                    let det = s.iter().filter(|x| x.detected_error).count() as f64;
                    (
                        s.iter().map(|x| x.sum_rate).collect(),
                        0.0,
                        det / s.len() as f64,
                    )
                }
                SchemeKind::Cf => {
                    let s: Vec<&CfSample> = completed
                        .iter()
                        .map(|t| t[i].cf.as_ref().expect("cf ran"))
                        .collect();
                    let out: usize = s.iter().map(|x| x.outage_slots).sum();
                    let slots: usize = s.iter().map(|x| x.slots).sum();
                    (
                        s.iter().map(|x| x.sum_rate).collect(),
                        out as f64 / slots as f64,
                        0.0,
                    )
                }
            };
            let (mean, std) = mean_std(&rates);
            means.push(mean);
            points.push(SweepPoint {
                scheme: *kind,
                snr_db,
                trials: rates.len(),
                mean_sum_rate: mean,
                std_sum_rate: std,
                outage_frac: outage,
                detected_err_frac: detected,
            });
        }
        if !cfg.cap_enabled {
            // Means are already per channel use.
            if let Ok(slope) = estimate_dof_slope(snrs, &means, cfg.dof_window, 1) {
                dof_slopes.push(DofSlope {
                    scheme: *kind,
                    slope,
                });
            }
        }
    }

    let frac = aborted_trials as f64 / cfg.trials as f64;
    if frac > ABORT_WARN_FRAC {
        warnings.push(format!(
            "{aborted_trials} of {} trials aborted ({:.2}%) after {MAX_RESAMPLES} channel redraws",
            cfg.trials,
            100.0 * frac
        ));
    }
    Ok(SweepResult {
        config: cfg.clone(),
        virtual_users: cfg.virtual_users()?,
        block_len,
        points,
        dof_slopes,
        aborted_trials,
        warnings,
    })
}
