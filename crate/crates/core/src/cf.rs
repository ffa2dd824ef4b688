//! Compute-and-forward baseline: every receiver decodes one integer
//! combination of the messages per slot and the central processor inverts
//! the stacked coefficient matrix.
//!
//! Coefficients are chosen by exhaustive search over a bounded integer box.
//! Only vectors whose first nonzero entry is positive are searched, since
//! the computation rate is invariant under `a -> -a`.

use serde::Serialize;
use thiserror::Error;

use crate::channel::{ChannelModel, ChannelRealization};
use crate::gf::{GfMatrix, IntMatrix, PrimeField};

/// Default search radius `max |a_k|`.
pub const DEFAULT_RADIUS: i64 = 3;

const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CfError {
    #[error("coefficient vector must have a nonzero entry")]
    ZeroCoefficients,
    #[error("compute-and-forward needs as many receivers as transmitters ({receivers} vs {transmitters})")]
    NotSquare {
        receivers: usize,
        transmitters: usize,
    },
    #[error("compute-and-forward runs on real channels only")]
    ComplexChannel,
    #[error("search radius must be at least 1, got {0}")]
    Radius(i64),
}

/// Integer network-coding coefficients, one per transmitter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CoeffVector(Vec<i64>);

impl CoeffVector {
    pub fn new(a: Vec<i64>) -> Result<Self, CfError> {
        if a.iter().all(|&x| x == 0) {
            return Err(CfError::ZeroCoefficients);
        }
        Ok(Self(a))
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn norm_sqr(&self) -> i64 {
        self.0.iter().map(|x| x * x).sum()
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|x| -x).collect())
    }
}

/// `1/2 log2+ ( 1 / (||a||^2 - rho (h.a)^2 / (1 + rho ||h||^2)) )`.
///
/// The penalty is evaluated as
/// `(||a||^2 + rho sum_{i<j} (a_i h_j - a_j h_i)^2) / (1 + rho ||h||^2)`,
/// which is algebraically identical and stays positive in floating point.
pub fn cf_computation_rate(h: &[f64], a: &CoeffVector, rho: f64) -> f64 {
    let a: Vec<f64> = a.0.iter().map(|&x| x as f64).collect();
    let a_norm2: f64 = a.iter().map(|x| x * x).sum();
    let h_norm2: f64 = h.iter().map(|x| x * x).sum();
    let mut cross = 0.0;
    for i in 0..h.len() {
        for j in i + 1..h.len() {
            let t = a[i] * h[j] - a[j] * h[i];
            cross += t * t;
        }
    }
    let ratio = (1.0 + rho * h_norm2) / (a_norm2 + rho * cross);
    (0.5 * ratio.log2()).max(0.0)
}

fn candidates(k: usize, radius: i64) -> impl Iterator<Item = Vec<i64>> {
    let side = (2 * radius + 1) as usize;
    let total = side.pow(k as u32);
    (0..total).filter_map(move |mut idx| {
        let mut a = vec![0i64; k];
        for slot in a.iter_mut().rev() {
            *slot = (idx % side) as i64 - radius;
            idx /= side;
        }
        match a.iter().find(|&&x| x != 0) {
            Some(&first) if first > 0 => Some(a),
            _ => None,
        }
    })
}

/// Best coefficient vector with `max |a_k| <= radius`; ties go to the
/// smaller `||a||^2`, then to the lexicographically smaller vector.
pub fn cf_select_coeffs(h: &[f64], rho: f64, radius: i64) -> Result<CoeffVector, CfError> {
    if radius < 1 {
        return Err(CfError::Radius(radius));
    }
    let mut best: Option<(f64, CoeffVector)> = None;
    for a in candidates(h.len(), radius) {
        let a = CoeffVector(a);
        let rate = cf_computation_rate(h, &a, rho);
        let better = match &best {
            None => true,
            Some((best_rate, best_a)) => {
                let tol = TIE_TOL * best_rate.abs().max(1.0);
                rate > best_rate + tol
                    || ((rate - best_rate).abs() <= tol && a.norm_sqr() < best_a.norm_sqr())
            }
        };
        if better {
            best = Some((rate, a));
        }
    }
    Ok(best.expect("radius >= 1 yields candidates").1)
}

/// Outcome of one extension block of compute-and-forward.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CfTrial {
    /// Bits per extension block, summed over all slots.
    pub sum_rate: f64,
    pub slots: usize,
    /// Slots lost to a rank-deficient coefficient matrix.
    pub outage_slots: usize,
}

/// Sum-rate of one slot for fixed coefficients: `K * min(min_l R_l, cap)`
/// when the coefficient matrix is invertible over GF(q), else 0.
pub fn cf_slot_sum_rate(
    h_rows: &[Vec<f64>],
    coeffs: &[CoeffVector],
    rho: f64,
    field: PrimeField,
    cap: Option<f64>,
) -> (f64, bool) {
    let k = coeffs.len();
    let a = IntMatrix::from_rows(&coeffs.iter().map(|c| c.0.clone()).collect::<Vec<_>>())
        .expect("coefficient vectors share a length");
    if GfMatrix::from_integers(field, &a).rank() < k {
        return (0.0, true);
    }
    let min_rate = h_rows
        .iter()
        .zip(coeffs)
        .map(|(h, a)| cf_computation_rate(h, a, rho))
        .fold(f64::INFINITY, f64::min);
    (k as f64 * min_rate.min(cap.unwrap_or(f64::INFINITY)), false)
}

/// Runs compute-and-forward slot by slot over the extension block, each
/// receiver choosing its own best coefficients.
pub fn cf_trial_sum_rate(
    h: &ChannelRealization,
    rho: f64,
    field: PrimeField,
    radius: i64,
    cap: Option<f64>,
) -> Result<CfTrial, CfError> {
    if h.receivers() != h.transmitters() {
        return Err(CfError::NotSquare {
            receivers: h.receivers(),
            transmitters: h.transmitters(),
        });
    }
    if h.model() != ChannelModel::Real {
        return Err(CfError::ComplexChannel);
    }
    let k = h.transmitters();
    let mut sum_rate = 0.0;
    let mut outage_slots = 0;
    for slot in 0..h.n_ext() {
        let rows: Vec<Vec<f64>> = (0..k)
            .map(|l| (0..k).map(|t| h.coefficient(l, t, slot).re).collect())
            .collect();
        let coeffs = rows
            .iter()
            .map(|r| cf_select_coeffs(r, rho, radius))
            .collect::<Result<Vec<_>, _>>()?;
        let (rate, outage) = cf_slot_sum_rate(&rows, &coeffs, rho, field, cap);
        sum_rate += rate;
        outage_slots += usize::from(outage);
    }
    Ok(CfTrial {
        sum_rate,
        slots: h.n_ext(),
        outage_slots,
    })
}
