#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use snc::channel::{sample_extended_channel, ChannelModel, ChannelRealization};
use snc::gf::{GfMatrix, PrimeField};
use snc::phy::{filter_and_demodulate, modulate_bpsk, transmit, MessageVector};
use snc::snc::{
    build_effective_system, build_filters, build_precoders, cp_recover, EffectiveSystem,
    ExtensionPlan, FilterSet, PrecoderSet,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Vectors over GF(q) of a fixed length, encoded as base-q integers
/// (first coordinate most significant), with addition and scaling tables.
pub struct VecSpace {
    pub q: u32,
    pub len: usize,
    pub size: usize,
    pub digits: Vec<Vec<u32>>,
    add: Vec<u16>,
    smul: Vec<u16>,
}

impl VecSpace {
    pub fn new(q: u32, len: usize) -> Self {
        let size = (q as usize).pow(len as u32);
        let digits: Vec<Vec<u32>> = (0..size)
            .map(|mut code| {
                let mut d = vec![0; len];
                for slot in d.iter_mut().rev() {
                    *slot = (code % q as usize) as u32;
                    code /= q as usize;
                }
                d
            })
            .collect();
        let encode = |d: &[u32]| {
            d.iter()
                .fold(0usize, |acc, &x| acc * q as usize + x as usize)
        };
        let mut add = vec![0u16; size * size];
        for a in 0..size {
            for b in 0..size {
                let s: Vec<u32> = digits[a]
                    .iter()
                    .zip(&digits[b])
                    .map(|(x, y)| (x + y) % q)
                    .collect();
                add[a * size + b] = encode(&s) as u16;
            }
        }
        let mut smul = vec![0u16; q as usize * size];
        for s in 0..q {
            for a in 0..size {
                let v: Vec<u32> = digits[a].iter().map(|x| x * s % q).collect();
                smul[s as usize * size + a] = encode(&v) as u16;
            }
        }
        Self {
            q,
            len,
            size,
            digits,
            add,
            smul,
        }
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b] as usize
    }

    pub fn scale(&self, s: u32, a: usize) -> usize {
        self.smul[s as usize * self.size + a] as usize
    }

    /// Span of `span` extended by `v`, as a membership bitmap.
    pub fn extend_span(&self, span: &[bool], v: usize) -> Vec<bool> {
        let mut out = vec![false; self.size];
        for (m, _) in span.iter().enumerate().filter(|(_, &b)| b) {
            for s in 0..self.q {
                out[self.add(m, self.scale(s, v))] = true;
            }
        }
        out
    }

    pub fn zero_span(&self) -> Vec<bool> {
        let mut s = vec![false; self.size];
        s[0] = true;
        s
    }
}

/// Calls `visit(rows, oracle_rank)` for every `rows x cols` matrix over
/// GF(q). The oracle rank is the number of rows that leave the span of
/// their predecessors, i.e. the dimension of the row space built up by
/// explicit closure.
pub fn for_each_matrix_with_rank<F: FnMut(&[usize], usize)>(
    space: &VecSpace,
    rows: usize,
    mut visit: F,
) {
    fn rec<F: FnMut(&[usize], usize)>(
        space: &VecSpace,
        rows: usize,
        span: &[bool],
        rank: usize,
        acc: &mut Vec<usize>,
        visit: &mut F,
    ) {
        if acc.len() == rows {
            visit(acc, rank);
            return;
        }
        let last = acc.len() + 1 == rows;
        for v in 0..space.size {
            acc.push(v);
            let grows = !span[v];
            if last {
                visit(acc, rank + usize::from(grows));
            } else if grows {
                let next = space.extend_span(span, v);
                rec(space, rows, &next, rank + 1, acc, visit);
            } else {
                rec(space, rows, span, rank, acc, visit);
            }
            acc.pop();
        }
    }
    let mut acc = Vec::with_capacity(rows);
    rec(space, rows, &space.zero_span(), 0, &mut acc, &mut visit);
}

pub fn matrix_from_codes(field: PrimeField, space: &VecSpace, rows: &[usize]) -> GfMatrix {
    let mut data = Vec::with_capacity(rows.len() * space.len);
    for &r in rows {
        data.extend_from_slice(&space.digits[r]);
    }
    GfMatrix::from_flat(field, rows.len(), space.len, data).unwrap()
}

/// Greedy ascending independent-row selection by span membership.
pub fn independent_rows_oracle(space: &VecSpace, rows: &[usize]) -> Vec<usize> {
    let mut span = space.zero_span();
    let mut kept = Vec::new();
    for (i, &r) in rows.iter().enumerate() {
        if !span[r] {
            span = space.extend_span(&span, r);
            kept.push(i);
        }
    }
    kept
}

/// Every solution of `A x = b` for a matrix given by row codes, by trying
/// all `q^cols` vectors `x`. Returns `(count, first solution)` per `b`,
/// indexed by the code of `b` in `rhs_space`.
pub fn brute_solutions(
    a: &GfMatrix,
    x_space: &VecSpace,
    rhs_space: &VecSpace,
) -> Vec<(usize, Option<Vec<u32>>)> {
    let q = a.field().q();
    let mut out = vec![(0usize, None); rhs_space.size];
    for x in &x_space.digits {
        let code = (0..a.rows()).fold(0usize, |acc, r| {
            let dot = a.row(r).iter().zip(x).map(|(&m, &v)| m * v).sum::<u32>() % q;
            acc * q as usize + dot as usize
        });
        let slot = &mut out[code];
        slot.0 += 1;
        if slot.1.is_none() {
            slot.1 = Some(x.clone());
        }
    }
    out
}

pub struct SncSystem {
    pub plan: ExtensionPlan,
    pub h: ChannelRealization,
    pub p: PrecoderSet,
    pub filters: FilterSet,
    pub eff: EffectiveSystem,
}

pub fn snc_system<R: Rng>(k: usize, n: usize, model: ChannelModel, rng: &mut R) -> SncSystem {
    let plan = ExtensionPlan::new(k, n).unwrap();
    let h = sample_extended_channel(k, k, plan.n_ext(), model, rng);
    let p = build_precoders(&h, &plan, 1.0).unwrap();
    let filters = build_filters(&h, &p).unwrap();
    let eff = build_effective_system(&h, &p, &filters, &plan, PrimeField::binary()).unwrap();
    SncSystem {
        plan,
        h,
        p,
        filters,
        eff,
    }
}

pub fn random_messages<R: Rng>(eff: &EffectiveSystem, rng: &mut R) -> Vec<Vec<u32>> {
    (0..eff.transmitters())
        .map(|k| {
            (0..eff.streams(k))
                .map(|_| rng.random_range(0..2))
                .collect()
        })
        .collect()
}

/// Modulate, transmit, filter, demodulate and recover with no noise.
/// Returns the forwarded network-coded bits and the recovered messages.
pub fn zero_noise_pipeline(
    s: &SncSystem,
    messages: &[Vec<u32>],
) -> (Vec<u32>, Vec<Vec<u32>>, bool) {
    let field = PrimeField::binary();
    let x: Vec<_> = messages
        .iter()
        .map(|m| modulate_bpsk(&MessageVector::new(field, m.clone()).unwrap()).unwrap())
        .collect();
    let zero = vec![vec![Complex64::new(0.0, 0.0); s.h.n_ext()]; s.h.receivers()];
    let y = transmit(&s.h, &s.p, &x, &zero).unwrap();
    let forwarded: Vec<u32> = filter_and_demodulate(&y, &s.filters, &s.eff)
        .unwrap()
        .into_iter()
        .flat_map(MessageVector::into_symbols)
        .collect();
    let rec = cp_recover(&s.eff, &forwarded).unwrap();
    (forwarded, rec.messages, rec.detected_error)
}

/// `prod_{i<j} (x_j - x_i)`, the determinant of the Vandermonde matrix
/// with rows `(1, x_i, x_i^2, ...)`.
pub fn vandermonde_det(x: &[Complex64]) -> Complex64 {
    let mut d = Complex64::new(1.0, 0.0);
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            d *= x[j] - x[i];
        }
    }
    d
}
