//! Dense linear algebra helpers over `Complex64`.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

pub fn cone() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let se = m.clone().symmetric_eigen();
    let mut ev: Vec<f64> = se.eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Largest singular value.
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(0.0f64, |a, &b| a.max(b))
}

pub fn frobenius_norm(m: &CMatrix) -> f64 {
    m.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Operator norm, short-circuited through the Frobenius upper bound.
///
/// Intended for pass/fail deviation checks: the returned value is always an
/// upper bound on the true operator norm, and equals it whenever it exceeds
/// `threshold`.
pub fn deviation_norm(m: &CMatrix, threshold: f64) -> f64 {
    let f = frobenius_norm(m);
    if f <= threshold {
        f
    } else {
        operator_norm(m)
    }
}

/// Zero out the columns not flagged `true` (restriction to a subspace of
/// admissible inputs).
pub fn restrict_columns(m: &CMatrix, keep: &[bool]) -> CMatrix {
    let mut out = m.clone();
    for (j, &k) in keep.iter().enumerate() {
        if !k {
            for i in 0..out.nrows() {
                out[(i, j)] = czero();
            }
        }
    }
    out
}

/// `|| M - M^dagger ||` (operator norm).
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    deviation_norm(&(m - m.adjoint()), 1e-13)
}

/// Pair two ascending sorted multisets and report the max pointwise gap.
/// Returns `f64::INFINITY` on length mismatch.
pub fn max_pairwise_deviation(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
