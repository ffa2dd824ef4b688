use num_complex::Complex64;

use super::plan::ExtensionPlan;
use super::SncError;
use crate::channel::ChannelRealization;
use crate::linalg::{numerical_rank, scale_rows, CMatrix};

/// Relative singular-value threshold for precoder rank checks.
pub const RANK_REL_TOL: f64 = 1e-9;

/// Relative tolerance for column equality in the alignment check.
pub const ALIGNMENT_REL_TOL: f64 = 1e-9;

/// Transmit precoders `V_k` built from one seed vector `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecoderSet {
    v: Vec<CMatrix>,
    w: Vec<Complex64>,
    power_scale: f64,
}

impl PrecoderSet {
    /// Wraps arbitrary precoders; `power_scale` is recorded, not applied.
    pub fn from_matrices(v: Vec<CMatrix>, power_scale: f64) -> Self {
        let n = v.first().map_or(0, |m| m.nrows());
        Self {
            v,
            w: vec![Complex64::new(1.0, 0.0); n],
            power_scale,
        }
    }

    pub fn v(&self, k: usize) -> &CMatrix {
        &self.v[k]
    }

    pub fn transmitters(&self) -> usize {
        self.v.len()
    }

    pub fn w(&self) -> &[Complex64] {
        &self.w
    }

    /// Global amplitude applied to every column of every precoder.
    pub fn power_scale(&self) -> f64 {
        self.power_scale
    }

    /// Largest `||v||^2` over all columns of all transmitters.
    pub fn max_column_power(&self) -> f64 {
        self.v
            .iter()
            .flat_map(|m| {
                m.column_iter()
                    .map(|c| c.norm_squared())
                    .collect::<Vec<_>>()
            })
            .fold(0.0, f64::max)
    }

    /// Multiplies every precoder by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            v: self.v.iter().map(|m| m.map(|z| z * c)).collect(),
            w: self.w.clone(),
            power_scale: self.power_scale * c,
        }
    }
}

/// Diagonal of `G_{i,j} = H_{i,1}^{-1} H_{i,j}` (zero-based `i`, `j`).
pub fn cross_gain(h: &ChannelRealization, i: usize, j: usize) -> Result<Vec<Complex64>, SncError> {
    h.diag(i, 0)
        .iter()
        .zip(h.diag(i, j))
        .map(|(&direct, &cross)| {
            let g = cross / direct;
            if direct.norm() == 0.0 || !g.is_finite() || g.norm() == 0.0 {
                Err(SncError::DegenerateChannel { receiver: i })
            } else {
                Ok(g)
            }
        })
        .collect()
}

/// Builds `V_1` (columns `prod G^e w`, `|e| = n`) and `V_k'` (`|e| = n - 1`),
/// then applies one global scalar so the largest column power is `p_max`.
pub fn build_precoders(
    h: &ChannelRealization,
    plan: &ExtensionPlan,
    p_max: f64,
) -> Result<PrecoderSet, SncError> {
    let k_users = plan.users();
    let n_ext = plan.n_ext();
    if h.transmitters() != k_users || h.receivers() != k_users || h.n_ext() != n_ext {
        return Err(SncError::Shape(format!(
            "channel is {}x{} over {} slots, plan needs {k_users}x{k_users} over {n_ext}",
            h.receivers(),
            h.transmitters(),
            h.n_ext()
        )));
    }
    if !(p_max > 0.0 && p_max.is_finite()) {
        return Err(SncError::InvalidPower(p_max));
    }

    let gains = plan
        .slots()
        .iter()
        .map(|&(i, j)| cross_gain(h, i, j))
        .collect::<Result<Vec<_>, _>>()?;
    let w = vec![Complex64::new(1.0, 0.0); n_ext];

    let column = |exps: &[u32], row: usize| -> Complex64 {
        exps.iter()
            .zip(&gains)
            .filter(|(&e, _)| e > 0)
            .fold(w[row], |acc, (&e, g)| acc * g[row].powu(e))
    };
    let raw: Vec<CMatrix> = (0..k_users)
        .map(|k| {
            let exps = plan.column_exponents(k);
            CMatrix::from_fn(n_ext, exps.len(), |r, c| column(&exps[c], r))
        })
        .collect();

    let unscaled = PrecoderSet {
        v: raw,
        w,
        power_scale: 1.0,
    };
    let max_power = unscaled.max_column_power();
    if !(max_power > 0.0 && max_power.is_finite()) {
        return Err(SncError::DegenerateChannel { receiver: 0 });
    }
    Ok(unscaled.scaled((p_max / max_power).sqrt()))
}

/// Numerical ranks of all precoders against their required ranks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankReport {
    pub ranks: Vec<usize>,
    pub expected: Vec<usize>,
}

pub fn precoder_ranks(p: &PrecoderSet, plan: &ExtensionPlan) -> RankReport {
    RankReport {
        ranks: p
            .v
            .iter()
            .map(|m| numerical_rank(m, RANK_REL_TOL))
            .collect(),
        expected: (0..p.transmitters()).map(|k| plan.streams(k)).collect(),
    }
}

/// Passes iff `V_1` has rank `N` and every other precoder rank `N'`.
pub fn check_precoder_ranks(p: &PrecoderSet, plan: &ExtensionPlan) -> Result<RankReport, SncError> {
    let report = precoder_ranks(p, plan);
    for (k, (&rank, &expected)) in report.ranks.iter().zip(&report.expected).enumerate() {
        if rank != expected {
            return Err(SncError::AlignmentDegenerate {
                transmitter: k,
                rank,
                expected,
            });
        }
    }
    Ok(report)
}

/// Outcome of checking `H_{l,k'} V_k'` against the columns of `H_{l,1} V_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentCheck {
    pub aligned: bool,
    /// `witness[l][k' - 1][c]` is the column of `H_{l,1} V_1` that column `c`
    /// of `H_{l,k'} V_k'` coincides with.
    pub witness: Vec<Vec<Vec<usize>>>,
    /// First `(receiver, transmitter, column)` without a match.
    pub first_failure: Option<(usize, usize, usize)>,
}

pub fn verify_alignment(h: &ChannelRealization, p: &PrecoderSet) -> AlignmentCheck {
    let mut witness = Vec::with_capacity(h.receivers());
    for l in 0..h.receivers() {
        let direct = scale_rows(h.diag(l, 0), p.v(0));
        let mut per_tx = Vec::new();
        for k in 1..p.transmitters() {
            let cross = scale_rows(h.diag(l, k), p.v(k));
            let mut cols = Vec::with_capacity(cross.ncols());
            for c in 0..cross.ncols() {
                let a = cross.column(c);
                let hit = (0..direct.ncols()).find(|&j| {
                    let b = direct.column(j);
                    let scale = a.norm().max(b.norm());
                    (a - b).norm() <= ALIGNMENT_REL_TOL * scale
                });
                match hit {
                    Some(j) => cols.push(j),
                    None => {
                        return AlignmentCheck {
                            aligned: false,
                            witness,
                            first_failure: Some((l, k, c)),
                        }
                    }
                }
            }
            per_tx.push(cols);
        }
        witness.push(per_tx);
    }
    AlignmentCheck {
        aligned: true,
        witness,
        first_failure: None,
    }
}
