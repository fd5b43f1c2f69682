//! Oracles shared by the integration tests. Nothing here calls into the
//! numerical routines under test beyond basic matrix arithmetic.

#![allow(dead_code)]

use rqm_core::{CMatrix, CVector, C64};

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `exp(m)` by scaling and squaring of a truncated Taylor series.
pub fn expm(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    let norm: f64 = m.row_iter().map(|r| r.iter().map(|v| v.norm()).sum::<f64>()).fold(0.0, f64::max);
    let mut s = 0;
    while norm / 2f64.powi(s) > 0.25 {
        s += 1;
    }
    let a = m * c(1.0 / 2f64.powi(s));
    let mut term = CMatrix::identity(n, n);
    let mut sum = CMatrix::identity(n, n);
    for k in 1..=24 {
        term = &term * &a * c(1.0 / k as f64);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// Determinant by cofactor expansion along the first row.
pub fn det(m: &CMatrix) -> C64 {
    let n = m.nrows();
    if n == 1 {
        return m[(0, 0)];
    }
    let mut total = C64::new(0.0, 0.0);
    for j in 0..n {
        let minor = CMatrix::from_fn(n - 1, n - 1, |r, cc| m[(r + 1, if cc < j { cc } else { cc + 1 })]);
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        total += m[(0, j)] * det(&minor) * sign;
    }
    total
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

pub fn max_abs_vec(v: &CVector) -> f64 {
    v.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// `log₂(coarse / fine)`.
pub fn order(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}

/// Null vector of a (numerically) singular matrix: the right singular vector
/// of the smallest singular value.
pub fn null_vector(m: &CMatrix) -> CVector {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let (j, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");
    v_t.row(j).adjoint()
}
