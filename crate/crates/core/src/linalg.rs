//! Small complex dense-matrix helpers on top of nalgebra.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values above `rel_tol * sigma_max`.
pub fn numerical_rank(m: &CMatrix, rel_tol: f64) -> usize {
    let s = singular_values(m);
    let Some(&max) = s.first() else {
        return 0;
    };
    if max == 0.0 || !max.is_finite() {
        return 0;
    }
    s.iter().filter(|&&v| v > rel_tol * max).count()
}

/// 2-norm condition number; infinite for singular or empty input.
pub fn condition_number(m: &CMatrix) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&max), Some(&min)) if min > 0.0 && max.is_finite() => max / min,
        _ => f64::INFINITY,
    }
}

/// `diag(d) * m`, the action of a diagonal channel on a precoder.
pub fn scale_rows(d: &[Complex64], m: &CMatrix) -> CMatrix {
    let mut out = m.clone();
    for (i, &di) in d.iter().enumerate() {
        for z in out.row_mut(i).iter_mut() {
            *z *= di;
        }
    }
    out
}

/// Determinant by LU; exposed for identity checks on small matrices.
pub fn determinant(m: &CMatrix) -> Complex64 {
    m.clone().determinant()
}
