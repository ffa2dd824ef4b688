//! BPSK signalling, the noisy end-to-end link, PNC demodulation and the
//! per-stream rate accounting.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::channel::ChannelRealization;
use crate::gf::PrimeField;
use crate::snc::{EffectiveSystem, FilterSet, PrecoderSet};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhyError {
    #[error("BPSK needs GF(2), got {0}")]
    UnsupportedModulation(PrimeField),
    #[error("symbol {0} is not a residue of the message field")]
    SymbolOutOfRange(u32),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("stream ({transmitter}, {stream}) is decoded by no receiver")]
    Coverage { transmitter: usize, stream: usize },
    #[error("DoF estimation needs at least 2 points in the window, found {0}")]
    WindowTooSmall(usize),
}

/// Message symbols over GF(q).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageVector {
    field: PrimeField,
    symbols: Vec<u32>,
}

impl MessageVector {
    pub fn new(field: PrimeField, symbols: Vec<u32>) -> Result<Self, PhyError> {
        if let Some(&bad) = symbols.iter().find(|&&s| s >= field.q()) {
            return Err(PhyError::SymbolOutOfRange(bad));
        }
        Ok(Self { field, symbols })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<u32> {
        self.symbols
    }
}

pub type SignalVector = Vec<Complex64>;

/// `0 -> +1`, `1 -> -1`.
pub fn modulate_bpsk(b: &MessageVector) -> Result<SignalVector, PhyError> {
    if b.field.q() != 2 {
        return Err(PhyError::UnsupportedModulation(b.field));
    }
    Ok(b.symbols
        .iter()
        .map(|&s| Complex64::new(if s == 0 { 1.0 } else { -1.0 }, 0.0))
        .collect())
}

/// `y_l = sum_k H_{l,k} V_k x_k + n_l` for every receiver.
pub fn transmit(
    h: &ChannelRealization,
    p: &PrecoderSet,
    x: &[SignalVector],
    noise: &[Vec<Complex64>],
) -> Result<Vec<Vec<Complex64>>, PhyError> {
    if x.len() != p.transmitters() || p.transmitters() != h.transmitters() {
        return Err(PhyError::Dimension(format!(
            "{} signal vectors, {} precoders, {} transmitters",
            x.len(),
            p.transmitters(),
            h.transmitters()
        )));
    }
    if noise.len() != h.receivers() || noise.iter().any(|n| n.len() != h.n_ext()) {
        return Err(PhyError::Dimension(
            "noise vectors do not match the channel".into(),
        ));
    }
    let precoded = x
        .iter()
        .enumerate()
        .map(|(k, xk)| {
            let v = p.v(k);
            if v.ncols() != xk.len() || v.nrows() != h.n_ext() {
                return Err(PhyError::Dimension(format!(
                    "transmitter {k}: precoder {}x{} against {} symbols",
                    v.nrows(),
                    v.ncols(),
                    xk.len()
                )));
            }
            Ok((0..v.nrows())
                .map(|r| (0..v.ncols()).map(|c| v[(r, c)] * xk[c]).sum::<Complex64>())
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>, _>>()?;

    Ok((0..h.receivers())
        .map(|l| {
            (0..h.n_ext())
                .map(|i| {
                    precoded
                        .iter()
                        .enumerate()
                        .map(|(k, s)| h.coefficient(l, k, i) * s[i])
                        .sum::<Complex64>()
                        + noise[l][i]
                })
                .collect()
        })
        .collect())
}

/// Nearest point of the `m`-fold BPSK sum constellation `{(m - 2j) a}`.
///
/// Returns `j`, the number of `-1` symbols in the superposition; ties go to
/// the smaller `j`. The network-coded bit is `j mod 2`.
pub fn nearest_sum_level(value: Complex64, m: usize, amplitude: f64) -> usize {
    let mut best = (0, f64::INFINITY);
    for j in 0..=m {
        let level = (m as f64 - 2.0 * j as f64) * amplitude;
        let d = (value - Complex64::new(level, 0.0)).norm();
        if d < best.1 {
            best = (j, d);
        }
    }
    best.0
}

/// Filters every received vector and hard-decides each output as the XOR of
/// the streams in its row. Rows with a single stream reduce to ordinary BPSK
/// detection. The filters absorb the precoder scale, so every aligned stream
/// arrives with unit amplitude.
pub fn filter_and_demodulate(
    y: &[Vec<Complex64>],
    filters: &FilterSet,
    eff: &EffectiveSystem,
) -> Result<Vec<MessageVector>, PhyError> {
    let field = eff.field();
    if field.q() != 2 {
        return Err(PhyError::UnsupportedModulation(field));
    }
    if y.len() != filters.receivers() {
        return Err(PhyError::Dimension(format!(
            "{} received vectors for {} filters",
            y.len(),
            filters.receivers()
        )));
    }
    let n_ext = eff.n_ext();
    y.iter()
        .enumerate()
        .map(|(l, yl)| {
            let u_h = filters.u_h(l);
            if yl.len() != u_h.ncols() {
                return Err(PhyError::Dimension(format!(
                    "receiver {l}: {} samples",
                    yl.len()
                )));
            }
            let bits = (0..n_ext)
                .map(|r| {
                    let filtered: Complex64 = (0..u_h.ncols()).map(|c| u_h[(r, c)] * yl[c]).sum();
                    let m = eff.row_support()[l * n_ext + r].len();
                    (nearest_sum_level(filtered, m, 1.0) % 2) as u32
                })
                .collect();
            MessageVector::new(field, bits)
        })
        .collect()
}

/// `log2(1 + |u^H H v|^2 / (sigma^2 ||u||^2))` for a diagonal `H`.
pub fn link_rate(u: &[Complex64], v: &[Complex64], h_diag: &[Complex64], sigma2: f64) -> f64 {
    let gain: Complex64 = u
        .iter()
        .zip(h_diag)
        .zip(v)
        .map(|((ui, hi), vi)| ui.conj() * hi * vi)
        .sum();
    let u_norm2: f64 = u.iter().map(|z| z.norm_sqr()).sum();
    (1.0 + gain.norm_sqr() / (sigma2 * u_norm2)).log2()
}

/// Rate of stream `stream` of `transmitter` towards `receiver`, decoded from
/// filter output `row`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkRate {
    pub receiver: usize,
    pub transmitter: usize,
    pub stream: usize,
    pub row: usize,
    pub rate: f64,
}

/// `R_{l,k}^{(n)}` for every stream in every row's support.
pub fn link_rates(
    h: &ChannelRealization,
    p: &PrecoderSet,
    filters: &FilterSet,
    eff: &EffectiveSystem,
    sigma2: f64,
) -> Vec<LinkRate> {
    let n_ext = eff.n_ext();
    let mut out = Vec::new();
    for l in 0..filters.receivers() {
        let u = filters.u(l);
        for r in 0..n_ext {
            let u_col: Vec<Complex64> = u.column(r).iter().copied().collect();
            for &(k, c) in &eff.row_support()[l * n_ext + r] {
                let v_col: Vec<Complex64> = p.v(k).column(c).iter().copied().collect();
                out.push(LinkRate {
                    receiver: l,
                    transmitter: k,
                    stream: c,
                    row: r,
                    rate: link_rate(&u_col, &v_col, h.diag(l, k), sigma2),
                });
            }
        }
    }
    out
}

/// `R_k^{(n)}`: minimum over the receivers whose equations contain the stream.
pub fn signal_rate(
    per_link: &[LinkRate],
    eff: &EffectiveSystem,
) -> Result<Vec<Vec<f64>>, PhyError> {
    let mut rates: Vec<Vec<f64>> = (0..eff.transmitters())
        .map(|k| vec![f64::INFINITY; eff.streams(k)])
        .collect();
    for lr in per_link {
        let slot = &mut rates[lr.transmitter][lr.stream];
        *slot = slot.min(lr.rate);
    }
    for (k, streams) in rates.iter().enumerate() {
        if let Some(stream) = streams.iter().position(|r| *r == f64::INFINITY) {
            return Err(PhyError::Coverage {
                transmitter: k,
                stream,
            });
        }
    }
    Ok(rates)
}

/// Capacity `log2(1 + rho)` of one cooperation link.
pub fn backhaul_capacity(rho_bar: f64) -> f64 {
    (1.0 + rho_bar).log2()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateReport {
    pub per_link: Vec<LinkRate>,
    pub per_signal: Vec<Vec<f64>>,
    /// Bits per extension block.
    pub sum_rate: f64,
    /// `None` when the backhaul cap is disabled.
    pub backhaul_cap: Option<f64>,
}

/// Sums `min(R_k^{(n)}, cap)` over every stream of every transmitter.
pub fn end_to_end_sum_rate(
    per_link: Vec<LinkRate>,
    per_signal: Vec<Vec<f64>>,
    backhaul_cap: Option<f64>,
) -> RateReport {
    let cap = backhaul_cap.unwrap_or(f64::INFINITY);
    let sum_rate = per_signal.iter().flatten().map(|&r| r.min(cap)).sum();
    RateReport {
        per_link,
        per_signal,
        sum_rate,
        backhaul_cap,
    }
}

/// Least-squares slope of `sum_rate` against `log2(rho)` over the SNR points
/// inside `window` (dB, inclusive), divided by `block_len`.
pub fn estimate_dof_slope(
    snr_db: &[f64],
    sum_rates: &[f64],
    window: (f64, f64),
    block_len: usize,
) -> Result<f64, PhyError> {
    if snr_db.len() != sum_rates.len() {
        return Err(PhyError::Dimension(
            "SNR grid and rates differ in length".into(),
        ));
    }
    let pts: Vec<(f64, f64)> = snr_db
        .iter()
        .zip(sum_rates)
        .filter(|(s, _)| **s >= window.0 && **s <= window.1)
        .map(|(&s, &r)| (s / 10.0 * std::f64::consts::LOG2_10, r))
        .collect();
    if pts.len() < 2 {
        return Err(PhyError::WindowTooSmall(pts.len()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(PhyError::WindowTooSmall(1));
    }
    Ok(sxy / sxx / block_len as f64)
}
