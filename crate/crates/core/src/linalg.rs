//! Small dense linear-algebra helpers over [`CMatrix`].

use nalgebra::SymmetricEigen;
use rand::Rng;

use crate::{CMatrix, CVector, Error, Result, C64};

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn inverse(m: &CMatrix, what: &'static str) -> Result<CMatrix> {
    m.clone().try_inverse().ok_or(Error::SingularMatrix(what))
}

/// 2-norm condition number from the singular values; `inf` when singular.
pub fn condition_number(m: &CMatrix) -> f64 {
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Spectral norm (largest singular value).
pub fn spectral_norm(m: &CMatrix) -> f64 {
    m.clone().singular_values().iter().cloned().fold(0.0, f64::max)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

pub fn max_abs_vec(v: &CVector) -> f64 {
    v.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// `max|a - b| / max(max|b|, tiny)`.
pub fn relative_deviation(a: &CMatrix, b: &CMatrix) -> f64 {
    let scale = max_abs(b).max(f64::MIN_POSITIVE);
    max_abs(&(a - b)) / scale
}

/// `max|m - m†|`.
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// `max|m†m - 1|`.
pub fn unitarity_deviation(m: &CMatrix) -> f64 {
    max_abs(&(m.adjoint() * m - identity(m.ncols())))
}

/// Block-diagonal matrix with `blocks` along the diagonal.
pub fn block_diagonal(blocks: &[CMatrix]) -> CMatrix {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let m: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(n, m);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.view_mut((r, c), (b.nrows(), b.ncols())).copy_from(b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

/// `1_count ⊗ block`: the same block repeated along the diagonal.
pub fn repeat_diagonal(block: &CMatrix, count: usize) -> CMatrix {
    let k = block.nrows();
    let mut out = CMatrix::zeros(k * count, k * count);
    for i in 0..count {
        out.view_mut((i * k, i * k), (k, k)).copy_from(block);
    }
    out
}

/// Crank–Nicolson step `(1 + iHΔt/2ħ)⁻¹ (1 − iHΔt/2ħ)`.
pub fn crank_nicolson_step(h: &CMatrix, dt: f64, hbar: f64) -> Result<CMatrix> {
    let n = h.nrows();
    let a = h * C64::new(0.0, 0.5 * dt / hbar);
    let lhs = identity(n) + &a;
    let rhs = identity(n) - &a;
    let lu = lhs.lu();
    lu.solve(&rhs).ok_or(Error::SingularMatrix("Crank-Nicolson step"))
}

/// Implicit-midpoint step `(1 − MΔt/2)⁻¹ (1 + MΔt/2)` for `ẏ = M y`.
pub fn midpoint_step(m: &CMatrix, dt: f64) -> Result<CMatrix> {
    let n = m.nrows();
    let a = m * c(0.5 * dt);
    let lhs = identity(n) - &a;
    let rhs = identity(n) + &a;
    lhs.lu().solve(&rhs).ok_or(Error::SingularMatrix("implicit midpoint step"))
}

/// Eigendecomposition of a Hermitian matrix; eigenvalues ascending.
pub fn hermitian_eigen(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(h.nrows(), h.ncols());
    for (j, &i) in order.iter().enumerate() {
        vectors.set_column(j, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Matrix with independent entries uniform in the unit square of ℂ.
pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn random_vector(rng: &mut impl Rng, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn random_scalar(rng: &mut impl Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn crank_nicolson_is_unitary_for_hermitian_input() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let a = random_matrix(&mut rng, 12, 12);
        let h = &a + a.adjoint();
        let u = crank_nicolson_step(&h, 0.1, 1.0).unwrap();
        assert!(unitarity_deviation(&u) < 1e-13);
    }

    #[test]
    fn eigen_reconstructs_hermitian_matrix() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let a = random_matrix(&mut rng, 10, 10);
        let h = &a + a.adjoint();
        let (e, v) = hermitian_eigen(&h);
        assert!(e.windows(2).all(|w| w[0] <= w[1]));
        let d = CMatrix::from_diagonal(&CVector::from_iterator(e.len(), e.iter().map(|&x| c(x))));
        assert!(relative_deviation(&(&v * d * v.adjoint()), &h) < 1e-12);
    }

    #[test]
    fn block_diagonal_places_blocks() {
        let a = CMatrix::from_element(1, 1, c(2.0));
        let b = identity(2);
        let m = block_diagonal(&[a, b]);
        assert_eq!(m.nrows(), 3);
        assert_eq!(m[(0, 0)], c(2.0));
        assert_eq!(m[(2, 2)], c(1.0));
        assert_eq!(m[(0, 2)], c(0.0));
    }
}
