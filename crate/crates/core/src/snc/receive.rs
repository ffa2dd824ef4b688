use num_complex::Complex64;

use super::plan::ExtensionPlan;
use super::precode::PrecoderSet;
use super::SncError;
use crate::channel::ChannelRealization;
use crate::gf::{find_valid_field_size, GfMatrix, IntMatrix, PrimeField, DEFAULT_Q_MAX};
use crate::linalg::{condition_number, scale_rows, CMatrix};

/// Largest admissible condition number of `H_{l,1} V_1`.
pub const MAX_CONDITION: f64 = 1e12;

/// Entries of the effective matrix must sit this close to 0 or 1.
pub const BINARY_TOL: f64 = 1e-6;

/// Receive filters, stored as the applied matrices `U_l^H`.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterSet {
    u_h: Vec<CMatrix>,
}

impl FilterSet {
    pub fn from_matrices(u_h: Vec<CMatrix>) -> Self {
        Self { u_h }
    }

    pub fn receivers(&self) -> usize {
        self.u_h.len()
    }

    /// `U_l^H`, applied to the received vector.
    pub fn u_h(&self, l: usize) -> &CMatrix {
        &self.u_h[l]
    }

    /// `U_l` itself; its column `r` is the decoding vector of output `r`.
    pub fn u(&self, l: usize) -> CMatrix {
        self.u_h[l].adjoint()
    }
}

/// Zero-forcing filters `U_l^H = (H_{l,1} V_1)^{-1}`.
pub fn build_filters(h: &ChannelRealization, p: &PrecoderSet) -> Result<FilterSet, SncError> {
    let u_h = (0..h.receivers())
        .map(|l| {
            let a = scale_rows(h.diag(l, 0), p.v(0));
            if !a.is_square() {
                return Err(SncError::Shape(format!(
                    "H_{{l,1}} V_1 is {}x{}",
                    a.nrows(),
                    a.ncols()
                )));
            }
            let condition = condition_number(&a);
            if condition > MAX_CONDITION {
                return Err(SncError::IllConditioned {
                    receiver: l,
                    condition,
                });
            }
            a.try_inverse().ok_or(SncError::IllConditioned {
                receiver: l,
                condition,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FilterSet { u_h })
}

/// A stream of the stacked message vector: `(transmitter, stream)`.
pub type StreamRef = (usize, usize);

/// The stacked linear system the central processor receives.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveSystem {
    f_real: CMatrix,
    f_int: IntMatrix,
    q: PrimeField,
    row_support: Vec<Vec<StreamRef>>,
    n_ext: usize,
    streams: Vec<usize>,
}

impl EffectiveSystem {
    /// Blocks `U_l^H H_{l,k} V_k`, receivers stacked top to bottom.
    pub fn f_real(&self) -> &CMatrix {
        &self.f_real
    }

    pub fn f_int(&self) -> &IntMatrix {
        &self.f_int
    }

    pub fn field(&self) -> PrimeField {
        self.q
    }

    pub fn f_gf(&self) -> GfMatrix {
        GfMatrix::from_integers(self.q, &self.f_int)
    }

    /// Streams with coefficient 1 in each row.
    pub fn row_support(&self) -> &[Vec<StreamRef>] {
        &self.row_support
    }

    pub fn n_ext(&self) -> usize {
        self.n_ext
    }

    pub fn receivers(&self) -> usize {
        self.f_int.rows() / self.n_ext
    }

    pub fn transmitters(&self) -> usize {
        self.streams.len()
    }

    pub fn streams(&self, k: usize) -> usize {
        self.streams[k]
    }

    pub fn stream_offset(&self, k: usize) -> usize {
        self.streams[..k].iter().sum()
    }

    pub fn total_streams(&self) -> usize {
        self.streams.iter().sum()
    }

    /// Stacks per-transmitter messages into the column order of `F`.
    pub fn stack(&self, per_tx: &[Vec<u32>]) -> Vec<u32> {
        per_tx.concat()
    }

    /// Forward map `b' = F b` over GF(q).
    pub fn forward(&self, b: &[u32]) -> Result<Vec<u32>, SncError> {
        Ok(self.f_gf().mul_vec(b)?)
    }
}

/// Forms `F`, checks it is binary, and picks the field: `q_default` when `F`
/// has full column rank there, otherwise the smallest prime that works.
pub fn build_effective_system(
    h: &ChannelRealization,
    p: &PrecoderSet,
    filters: &FilterSet,
    plan: &ExtensionPlan,
    q_default: PrimeField,
) -> Result<EffectiveSystem, SncError> {
    let n_ext = plan.n_ext();
    let streams: Vec<usize> = (0..p.transmitters()).map(|k| p.v(k).ncols()).collect();
    let total: usize = streams.iter().sum();
    let receivers = filters.receivers();

    let mut f_real = CMatrix::zeros(receivers * n_ext, total);
    for l in 0..receivers {
        let mut offset = 0;
        for (k, &cols) in streams.iter().enumerate() {
            let block = filters.u_h(l) * scale_rows(h.diag(l, k), p.v(k));
            f_real
                .view_mut((l * n_ext, offset), (n_ext, cols))
                .copy_from(&block);
            offset += cols;
        }
    }

    let mut data = Vec::with_capacity(f_real.nrows() * total);
    let mut row_support = Vec::with_capacity(f_real.nrows());
    for r in 0..f_real.nrows() {
        let mut support = Vec::new();
        let mut offset = 0;
        for (k, &cols) in streams.iter().enumerate() {
            for c in 0..cols {
                let z = f_real[(r, offset + c)];
                let bit = binary_entry(z).ok_or(SncError::AlignmentViolation {
                    row: r,
                    col: offset + c,
                    value: z,
                })?;
                if bit == 1 {
                    support.push((k, c));
                }
                data.push(bit);
            }
            offset += cols;
        }
        row_support.push(support);
    }
    let f_int = IntMatrix::new(f_real.nrows(), total, data)?;

    let q = if GfMatrix::from_integers(q_default, &f_int).rank() == total {
        q_default
    } else {
        find_valid_field_size(&f_int, total, DEFAULT_Q_MAX).map_err(SncError::FieldSearch)?
    };
    Ok(EffectiveSystem {
        f_real,
        f_int,
        q,
        row_support,
        n_ext,
        streams,
    })
}

fn binary_entry(z: Complex64) -> Option<i64> {
    [0i64, 1]
        .into_iter()
        .find(|&b| (z - Complex64::new(b as f64, 0.0)).norm() <= BINARY_TOL)
}
