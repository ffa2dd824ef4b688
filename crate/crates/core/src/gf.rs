//! Exact arithmetic and dense linear algebra over prime fields GF(q).
//!
//! The central processor sees the network-coded messages as a linear system
//! `F b = b'` over GF(q). Everything here is exact: residues are stored as
//! `u32` and products are formed in `u64`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("field size {0} is not prime")]
    NotPrime(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("entry {value} at ({row}, {col}) is not a residue modulo {q}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: u32,
        q: u32,
    },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("system has rank {rank} but {unknowns} unknowns")]
    Unsolvable { rank: usize, unknowns: usize },
    #[error("right-hand side is inconsistent at row {row}")]
    Inconsistent { row: usize },
    #[error("no prime q <= {q_max} gives rank {target}")]
    SearchExhausted { target: usize, q_max: u64 },
    #[error("integer overflow during exact elimination")]
    Overflow,
}

/// Trial division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `(a * b) mod q` for `q, a, b < 16`, indexed `q << 8 | a << 4 | b`.
static SMALL_MUL: [u8; 4096] = {
    let mut t = [0u8; 4096];
    let mut i = 0;
    while i < 4096 {
        let (q, a, b) = (i >> 8, (i >> 4) & 15, i & 15);
        if q > 0 {
            t[i] = ((a * b) % q) as u8;
        }
        i += 1;
    }
    t
};

/// Inverse of `a` modulo a prime `q < 16`, indexed `q << 4 | a`; 0 when
/// `a` is 0 mod q.
static SMALL_INV: [u8; 256] = {
    let mut t = [0u8; 256];
    let mut i = 0;
    while i < 256 {
        let (q, a) = (i >> 4, i & 15);
        let mut x = 1;
        while x < q {
            if (a * x) % q == 1 {
                t[i] = x as u8;
            }
            x += 1;
        }
        i += 1;
    }
    t
};

/// The prime field GF(q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    q: u32,
    /// `floor((2^64 - 1) / q) + 1`, for division-free reduction of `u32`s.
    recip: u64,
}

impl PrimeField {
    pub fn new(q: u64) -> Result<Self, GfError> {
        if q > u64::from(u32::MAX) || !is_prime(q) {
            return Err(GfError::NotPrime(q));
        }
        Ok(Self::with_q(q as u32))
    }

    fn with_q(q: u32) -> Self {
        Self {
            q,
            recip: u64::MAX / u64::from(q) + 1,
        }
    }

    /// GF(2), the field matched to BPSK.
    pub fn binary() -> Self {
        Self::with_q(2)
    }

    /// `a mod q` without a division (Lemire's fastmod).
    fn fastmod(&self, a: u32) -> u32 {
        let low = self.recip.wrapping_mul(u64::from(a));
        ((u128::from(low) * u128::from(self.q)) >> 64) as u32
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn reduce(&self, v: i64) -> u32 {
        v.rem_euclid(i64::from(self.q)) as u32
    }

    /// Sum of two residues (both must lie in `[0, q)`).
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = u64::from(a) + u64::from(b);
        let q = u64::from(self.q);
        (if s >= q { s - q } else { s }) as u32
    }

    /// Difference of two residues (both must lie in `[0, q)`).
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            ((u64::from(a) + u64::from(self.q)) - u64::from(b)) as u32
        }
    }

    pub fn neg(&self, a: u32) -> u32 {
        self.sub(0, a)
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if (self.q | a | b) < 16 {
            return u32::from(SMALL_MUL[(self.q << 8 | a << 4 | b) as usize]);
        }
        let p = u64::from(a) * u64::from(b);
        match u32::try_from(p) {
            Ok(p) => self.fastmod(p),
            Err(_) => (p % u64::from(self.q)) as u32,
        }
    }

    pub fn pow(&self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = self.fastmod(1);
        base = self.fastmod(base);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat's little theorem.
    pub fn inv(&self, a: u32) -> Result<u32, GfError> {
        if (self.q | a) < 16 {
            return match SMALL_INV[(self.q << 4 | a) as usize] {
                0 => Err(GfError::ZeroInverse),
                x => Ok(u32::from(x)),
            };
        }
        if self.fastmod(a) == 0 {
            return Err(GfError::ZeroInverse);
        }
        Ok(self.pow(a, u64::from(self.q) - 2))
    }

    fn check(&self, row: usize, col: usize, value: u32) -> Result<u32, GfError> {
        if value < self.q {
            Ok(value)
        } else {
            Err(GfError::EntryOutOfRange {
                row,
                col,
                value,
                q: self.q,
            })
        }
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

/// Dense row-major matrix over a prime field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GfMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

struct Reduced<'a> {
    /// Reduced kept rows, row-major.
    basis: &'a [u32],
    pivots: &'a [usize],
    /// Rows examined before the early stop.
    rows_seen: usize,
    /// First redundant row whose right-hand side did not reduce to zero.
    first_residual: Option<usize>,
}

/// Solution of the square subsystem picked out by greedy row selection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemSolution {
    pub x: Vec<u32>,
    /// Rows of the full system used to determine `x`.
    pub pivot_rows: Vec<usize>,
    /// First redundant row whose equation `x` does not satisfy.
    pub first_inconsistent_row: Option<usize>,
}

impl GfMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, dim: usize) -> Self {
        let mut m = Self::zeros(field, dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1 % field.q;
        }
        m
    }

    /// Builds a matrix from residues, rejecting any entry outside `[0, q)`.
    pub fn from_rows(field: PrimeField, rows: &[Vec<u32>]) -> Result<Self, GfError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(GfError::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                data.push(field.check(i, j, v)?);
            }
        }
        Ok(Self {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix from row-major residues.
    pub fn from_flat(
        field: PrimeField,
        rows: usize,
        cols: usize,
        data: Vec<u32>,
    ) -> Result<Self, GfError> {
        if rows.checked_mul(cols) != Some(data.len()) {
            return Err(GfError::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        for (i, &v) in data.iter().enumerate() {
            field.check(i / cols.max(1), i % cols.max(1), v)?;
        }
        Ok(Self {
            field,
            rows,
            cols,
            data,
        })
    }

    /// Reduces arbitrary integers modulo q.
    pub fn from_integers(field: PrimeField, int: &IntMatrix) -> Self {
        Self {
            field,
            rows: int.rows,
            cols: int.cols,
            data: int.data.iter().map(|&v| field.reduce(v)).collect(),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &[u32]) -> Result<Vec<u32>, GfError> {
        if x.len() != self.cols {
            return Err(GfError::Dimension(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        let f = self.field;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, f.fastmod(b))))
            })
            .collect())
    }

    /// Rank by forward elimination on a scratch copy.
    pub fn rank(&self) -> usize {
        let f = self.field;
        let mut small = [0u32; 64];
        let mut heap;
        let m: &mut [u32] = if self.data.len() <= small.len() {
            let s = &mut small[..self.data.len()];
            s.copy_from_slice(&self.data);
            s
        } else {
            heap = self.data.clone();
            &mut heap
        };
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&r| m[r * cols + c] != 0) else {
                continue;
            };
            if p != rank {
                for j in 0..cols {
                    m.swap(p * cols + j, rank * cols + j);
                }
            }
            let inv = f.inv(m[rank * cols + c]).expect("pivot is nonzero");
            for r in rank + 1..rows {
                let factor = f.mul(m[r * cols + c], inv);
                if factor == 0 {
                    continue;
                }
                for j in c..cols {
                    let t = f.mul(factor, m[rank * cols + j]);
                    m[r * cols + j] = f.sub(m[r * cols + j], t);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Greedy ascending row reduction. A row is kept (and pushed onto
    /// `kept`) iff it raises the rank of the rows kept so far. The kept rows
    /// are held fully reduced, each with a 1 at its pivot column and 0 in
    /// every other pivot column; when `rhs` is given it rides along as an
    /// extra column. Stops once the rank reaches the column count, since no
    /// later row can be independent.
    fn eliminate<R>(
        &self,
        rhs: Option<&[u32]>,
        mut kept: Option<&mut Vec<usize>>,
        done: impl FnOnce(Reduced<'_>) -> R,
    ) -> R {
        const STACK_WORDS: usize = 96;
        const STACK_PIVOTS: usize = 16;
        let f = self.field;
        let cols = self.cols;
        let w = cols + usize::from(rhs.is_some());
        let cap = self.rows.min(cols);
        let need = (cap + 1) * w;
        let mut stack_words = [0u32; STACK_WORDS];
        let mut stack_pivots = [0usize; STACK_PIVOTS];
        let (mut heap_words, mut heap_pivots);
        let words: &mut [u32] = if need <= STACK_WORDS {
            &mut stack_words[..need]
        } else {
            heap_words = vec![0u32; need];
            &mut heap_words
        };
        let pivots: &mut [usize] = if cap <= STACK_PIVOTS {
            &mut stack_pivots[..cap]
        } else {
            heap_pivots = vec![0usize; cap];
            &mut heap_pivots
        };
        let (basis, v) = words.split_at_mut(cap * w);
        let mut rank = 0;
        let mut rows_seen = 0;
        let mut first_residual = None;
        for r in 0..self.rows {
            if rank == cols {
                break;
            }
            rows_seen = r + 1;
            v[..cols].copy_from_slice(self.row(r));
            if let Some(rhs) = rhs {
                v[cols] = f.fastmod(rhs[r]);
            }
            for (b, &pc) in basis[..rank * w].chunks_exact(w).zip(&pivots[..rank]) {
                let factor = v[pc];
                if factor != 0 {
                    for (x, &bj) in v.iter_mut().zip(b) {
                        *x = f.sub(*x, f.mul(factor, bj));
                    }
                }
            }
            let Some(pc) = v[..cols].iter().position(|&x| x != 0) else {
                if rhs.is_some() && v[cols] != 0 && first_residual.is_none() {
                    first_residual = Some(r);
                }
                continue;
            };
            let inv = f.inv(v[pc]).expect("pivot is nonzero");
            for x in v.iter_mut() {
                *x = f.mul(*x, inv);
            }
            for b in basis[..rank * w].chunks_exact_mut(w) {
                let factor = b[pc];
                if factor != 0 {
                    for (bj, &vj) in b.iter_mut().zip(v.iter()) {
                        *bj = f.sub(*bj, f.mul(factor, vj));
                    }
                }
            }
            basis[rank * w..(rank + 1) * w].copy_from_slice(v);
            pivots[rank] = pc;
            rank += 1;
            if let Some(k) = kept.as_deref_mut() {
                k.push(r);
            }
        }
        done(Reduced {
            basis: &basis[..rank * w],
            pivots: &pivots[..rank],
            rows_seen,
            first_residual,
        })
    }

    /// Indices of a maximal independent set of rows, chosen greedily in
    /// ascending order: a row is kept iff it raises the rank of the rows kept
    /// so far.
    pub fn independent_rows(&self) -> Vec<usize> {
        let mut kept = Vec::with_capacity(self.rows.min(self.cols));
        self.eliminate(None, Some(&mut kept), |_| ());
        kept
    }

    /// Solution from the greedily selected rows and the first row it
    /// violates. A redundant row seen during elimination is violated iff its
    /// right-hand side does not reduce to zero; rows after the early stop
    /// are checked directly.
    fn solve_kept(
        &self,
        rhs: &[u32],
        kept: Option<&mut Vec<usize>>,
    ) -> Result<(Vec<u32>, Option<usize>), GfError> {
        if rhs.len() != self.rows {
            return Err(GfError::Dimension(format!(
                "right-hand side of length {} for {} rows",
                rhs.len(),
                self.rows
            )));
        }
        let f = self.field;
        let n = self.cols;
        self.eliminate(Some(rhs), kept, |red| {
            if red.pivots.len() < n {
                return Err(GfError::Unsolvable {
                    rank: red.pivots.len(),
                    unknowns: n,
                });
            }
            let mut x = vec![0u32; n];
            for (b, &pc) in red.basis.chunks_exact(n + 1).zip(red.pivots) {
                x[pc] = b[n];
            }
            let bad = red.first_residual.or_else(|| {
                (red.rows_seen..self.rows).find(|&r| {
                    let dot = self
                        .row(r)
                        .iter()
                        .zip(&x)
                        .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
                    dot != f.fastmod(rhs[r])
                })
            });
            Ok((x, bad))
        })
    }

    /// Solves the square subsystem formed by the greedily selected
    /// independent rows and reports the first redundant row the solution
    /// violates, if any.
    pub fn solve_subsystem(&self, rhs: &[u32]) -> Result<SubsystemSolution, GfError> {
        let mut kept = Vec::with_capacity(self.rows.min(self.cols));
        let (x, first_inconsistent_row) = self.solve_kept(rhs, Some(&mut kept))?;
        Ok(SubsystemSolution {
            x,
            pivot_rows: kept,
            first_inconsistent_row,
        })
    }

    /// Unique solution of `self * x = rhs`; requires full column rank and a
    /// consistent right-hand side.
    pub fn solve(&self, rhs: &[u32]) -> Result<Vec<u32>, GfError> {
        match self.solve_kept(rhs, None)? {
            (_, Some(row)) => Err(GfError::Inconsistent { row }),
            (x, None) => Ok(x),
        }
    }
}

/// Dense integer matrix, the exact form of the effective system before it is
/// read over a finite field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> Result<Self, GfError> {
        if data.len() != rows * cols {
            return Err(GfError::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, GfError> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(GfError::Dimension(format!("row {bad} is ragged")));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Rank over the rationals by fraction-free (Bareiss) elimination.
    pub fn exact_rank(&self) -> Result<usize, GfError> {
        let (rows, cols) = (self.rows, self.cols);
        let mut m: Vec<i128> = self.data.iter().map(|&v| i128::from(v)).collect();
        let mut prev: i128 = 1;
        let mut rank = 0;
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&r| m[r * cols + c] != 0) else {
                continue;
            };
            if p != rank {
                for j in 0..cols {
                    m.swap(p * cols + j, rank * cols + j);
                }
            }
            let pivot = m[rank * cols + c];
            for r in rank + 1..rows {
                let lead = m[r * cols + c];
                for j in c..cols {
                    let a = m[r * cols + j]
                        .checked_mul(pivot)
                        .ok_or(GfError::Overflow)?;
                    let b = lead
                        .checked_mul(m[rank * cols + j])
                        .ok_or(GfError::Overflow)?;
                    m[r * cols + j] = a.checked_sub(b).ok_or(GfError::Overflow)? / prev;
                }
            }
            prev = pivot;
            rank += 1;
        }
        Ok(rank)
    }
}

/// Default upper bound for [`find_valid_field_size`].
pub const DEFAULT_Q_MAX: u64 = 101;

/// Smallest prime `q <= q_max` for which `f_int mod q` has `target_rank`.
pub fn find_valid_field_size(
    f_int: &IntMatrix,
    target_rank: usize,
    q_max: u64,
) -> Result<PrimeField, GfError> {
    (2..=q_max)
        .filter(|&q| is_prime(q))
        .map(|q| PrimeField::new(q).expect("q is prime"))
        .find(|&field| GfMatrix::from_integers(field, f_int).rank() == target_rank)
        .ok_or(GfError::SearchExhausted {
            target: target_rank,
            q_max,
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    fn f_k2_n1() -> Vec<Vec<u32>> {
        vec![vec![1, 0, 1], vec![0, 1, 0], vec![1, 0, 0], vec![0, 1, 1]]
    }

    #[test]
    fn field_construction() {
        assert!(PrimeField::new(7).is_ok());
        assert_eq!(PrimeField::new(1), Err(GfError::NotPrime(1)));
        assert_eq!(PrimeField::new(9), Err(GfError::NotPrime(9)));
        assert_eq!(PrimeField::new(0), Err(GfError::NotPrime(0)));
    }

    #[test]
    fn field_ops() {
        let f2 = gf(2);
        assert_eq!(f2.add(1, 1), 0);
        let f7 = gf(7);
        // 3 * 5 = 15 = 2*7 + 1
        assert_eq!(f7.inv(3), Ok(5));
        for x in 0..7 {
            assert_eq!(f7.mul(0, x), 0);
        }
        assert_eq!(f7.inv(0), Err(GfError::ZeroInverse));
        assert_eq!(f7.sub(2, 5), 4);
        assert_eq!(f7.neg(3), 4);
        assert_eq!(f7.reduce(-1), 6);
    }

    #[test]
    fn inverse_matches_exhaustive_search() {
        for q in [2u64, 3, 5, 7, 11, 13, 101] {
            let f = gf(q);
            for a in 1..q as u32 {
                let brute = (1..q as u32).find(|&x| f.mul(a, x) == 1).unwrap();
                assert_eq!(f.inv(a).unwrap(), brute);
            }
        }
    }

    #[test]
    fn rank_examples() {
        let f2 = gf(2);
        assert_eq!(GfMatrix::identity(f2, 2).rank(), 2);
        let ones = GfMatrix::from_rows(f2, &vec![vec![1; 3]; 3]).unwrap();
        assert_eq!(ones.rank(), 1);
        let f = GfMatrix::from_rows(f2, &f_k2_n1()).unwrap();
        assert_eq!(f.rank(), 3);
    }

    #[test]
    fn out_of_range_entries_rejected() {
        let err = GfMatrix::from_rows(gf(3), &[vec![0, 3]]).unwrap_err();
        assert!(matches!(
            err,
            GfError::EntryOutOfRange {
                row: 0,
                col: 1,
                value: 3,
                q: 3
            }
        ));
        assert!(GfMatrix::from_rows(gf(3), &[vec![0, 1], vec![1]]).is_err());
    }

    #[test]
    fn independent_row_selection() {
        let f2 = gf(2);
        assert_eq!(GfMatrix::identity(f2, 3).independent_rows(), vec![0, 1, 2]);
        let dup = GfMatrix::from_rows(f2, &[vec![1, 1], vec![1, 1], vec![0, 1]]).unwrap();
        assert_eq!(dup.independent_rows(), vec![0, 2]);
        let f = GfMatrix::from_rows(f2, &f_k2_n1()).unwrap();
        assert_eq!(f.independent_rows(), vec![0, 1, 2]);
    }

    #[test]
    fn solve_examples() {
        let f2 = gf(2);
        let id = GfMatrix::identity(f2, 3);
        assert_eq!(id.solve(&[1, 0, 1]).unwrap(), vec![1, 0, 1]);

        let f = GfMatrix::from_rows(f2, &f_k2_n1()).unwrap();
        let b = [1, 0, 1];
        let forwarded = f.mul_vec(&b).unwrap();
        assert_eq!(f.solve(&forwarded).unwrap(), b.to_vec());

        let a = GfMatrix::from_rows(f2, &[vec![1, 1], vec![0, 1]]).unwrap();
        assert_eq!(a.solve(&[0, 1]).unwrap(), vec![1, 1]);
    }

    #[test]
    fn solve_errors() {
        let f2 = gf(2);
        let deficient = GfMatrix::from_rows(f2, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(
            deficient.solve(&[0, 0]),
            Err(GfError::Unsolvable {
                rank: 1,
                unknowns: 2
            })
        );
        let f = GfMatrix::from_rows(f2, &f_k2_n1()).unwrap();
        // Rows 0..3 determine b = [0, 0, 1]; row 3 then predicts 1.
        let sol = f.solve_subsystem(&[1, 0, 0, 0]).unwrap();
        assert_eq!(sol.first_inconsistent_row, Some(3));
        assert_eq!(
            f.solve(&[1, 0, 0, 0]),
            Err(GfError::Inconsistent { row: 3 })
        );
        assert!(f.solve(&[1, 0]).is_err());
    }

    #[test]
    fn exact_rank_over_rationals() {
        let m = IntMatrix::from_rows(&[vec![1, 0, 1], vec![0, 1, 0], vec![1, 0, 0], vec![0, 1, 1]])
            .unwrap();
        assert_eq!(m.exact_rank(), Ok(3));
        // Rank 2 over Q but rank 1 over GF(2).
        let m = IntMatrix::from_rows(&[vec![1, 1], vec![1, -1]]).unwrap();
        assert_eq!(m.exact_rank(), Ok(2));
        assert_eq!(GfMatrix::from_integers(gf(2), &m).rank(), 1);
        assert_eq!(
            IntMatrix::from_rows(&[vec![0, 0]]).unwrap().exact_rank(),
            Ok(0)
        );
    }

    #[test]
    fn field_size_search() {
        let f = IntMatrix::from_rows(&[vec![1, 0, 1], vec![0, 1, 0], vec![1, 0, 0], vec![0, 1, 1]])
            .unwrap();
        assert_eq!(find_valid_field_size(&f, 3, DEFAULT_Q_MAX).unwrap().q(), 2);
        let two = IntMatrix::from_rows(&[vec![2]]).unwrap();
        assert_eq!(
            find_valid_field_size(&two, 1, DEFAULT_Q_MAX).unwrap().q(),
            3
        );
        let id = IntMatrix::from_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(find_valid_field_size(&id, 2, DEFAULT_Q_MAX).unwrap().q(), 2);
        let zero = IntMatrix::from_rows(&[vec![0]]).unwrap();
        assert_eq!(
            find_valid_field_size(&zero, 1, 10),
            Err(GfError::SearchExhausted {
                target: 1,
                q_max: 10
            })
        );
    }
}
