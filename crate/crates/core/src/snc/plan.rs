use serde::Serialize;

use super::SncError;

/// Largest extension length the construction will materialise.
pub const MAX_EXTENSION_LEN: u64 = 4096;

/// Checked binomial coefficient.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(u128::from(n - i))? / u128::from(i + 1);
    }
    u64::try_from(acc).ok()
}

/// Dimensions and column layout of the symbol-extension scheme for `K` users
/// and extension parameter `n`.
///
/// Each precoder column is indexed by an exponent tuple over the `K(K-1)`
/// alignment slots `(i, j)`, receiver `i` in `0..K` (major) and transmitter
/// `j` in `1..K` (minor). Tuples are ordered descending-lexicographically,
/// which for `K = 2` gives `G12^n w, G12^(n-1) G22 w, .., G22^n w`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionPlan {
    users: usize,
    n: usize,
    n_ext: usize,
    n_short: usize,
    slots: Vec<(usize, usize)>,
    long_exponents: Vec<Vec<u32>>,
    short_exponents: Vec<Vec<u32>>,
}

/// Every tuple of `parts` non-negative integers summing to `total`, in
/// descending lexicographic order.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=total).rev() {
            prefix.push(first);
            rec(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

impl ExtensionPlan {
    pub fn new(users: usize, n: usize) -> Result<Self, SncError> {
        if users < 2 || n < 1 {
            return Err(SncError::Plan(format!(
                "need K >= 2 and n >= 1, got K={users}, n={n}"
            )));
        }
        let slot_count = users
            .checked_mul(users - 1)
            .ok_or_else(|| SncError::Capacity(format!("K={users}")))?
            as u64;
        let n64 = n as u64;
        let overflow = || SncError::Capacity(format!("binomial overflow for K={users}, n={n}"));
        let n_ext = binomial(n64 + slot_count - 1, n64).ok_or_else(overflow)?;
        let n_short = binomial(n64 + slot_count - 2, n64 - 1).ok_or_else(overflow)?;
        if n_ext > MAX_EXTENSION_LEN {
            return Err(SncError::Capacity(format!(
                "extension length {n_ext} exceeds {MAX_EXTENSION_LEN}"
            )));
        }
        let slots = (0..users)
            .flat_map(|i| (1..users).map(move |j| (i, j)))
            .collect::<Vec<_>>();
        let long_exponents = compositions(n as u32, slots.len());
        let short_exponents = compositions(n as u32 - 1, slots.len());
        debug_assert_eq!(long_exponents.len() as u64, n_ext);
        debug_assert_eq!(short_exponents.len() as u64, n_short);
        Ok(Self {
            users,
            n,
            n_ext: n_ext as usize,
            n_short: n_short as usize,
            slots,
            long_exponents,
            short_exponents,
        })
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Extension length `N`.
    pub fn n_ext(&self) -> usize {
        self.n_ext
    }

    /// Stream count `N'` of every transmitter but the first.
    pub fn n_short(&self) -> usize {
        self.n_short
    }

    /// Alignment slots `(receiver, transmitter)`, zero-based.
    pub fn slots(&self) -> &[(usize, usize)] {
        &self.slots
    }

    pub fn slot_index(&self, receiver: usize, transmitter: usize) -> usize {
        receiver * (self.users - 1) + (transmitter - 1)
    }

    /// Exponent tuples defining the columns of transmitter `k`'s precoder.
    pub fn column_exponents(&self, k: usize) -> &[Vec<u32>] {
        if k == 0 {
            &self.long_exponents
        } else {
            &self.short_exponents
        }
    }

    pub fn streams(&self, k: usize) -> usize {
        if k == 0 {
            self.n_ext
        } else {
            self.n_short
        }
    }

    /// Column of the stacked message vector where transmitter `k` starts.
    pub fn stream_offset(&self, k: usize) -> usize {
        if k == 0 {
            0
        } else {
            self.n_ext + (k - 1) * self.n_short
        }
    }

    /// `N + (K-1) N'`.
    pub fn total_streams(&self) -> usize {
        self.n_ext + (self.users - 1) * self.n_short
    }
}

/// Achievable DoF of the scheme over one extension block.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DofTuple {
    pub per_user: Vec<f64>,
    pub total: f64,
    /// `total / K`, the fraction of the full `K` DoF.
    pub normalized: f64,
}

pub fn theoretical_dof(plan: &ExtensionPlan) -> DofTuple {
    let n_ext = plan.n_ext() as f64;
    let per_user: Vec<f64> = (0..plan.users())
        .map(|k| plan.streams(k) as f64 / n_ext)
        .collect();
    let total = plan.total_streams() as f64 / n_ext;
    DofTuple {
        per_user,
        total,
        normalized: total / plan.users() as f64,
    }
}
