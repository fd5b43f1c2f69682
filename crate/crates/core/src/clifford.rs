//! Dirac γ-matrices, the 5×5 Γ-matrices of the first-order Klein-Gordon
//! system, and slash contraction.
//!
//! The γ-matrices are in the standard (Dirac) representation:
//!
//! ```text
//! γ⁰ = diag(1, 1, -1, -1),    γᵏ = [[0, σₖ], [-σₖ, 0]]
//! ```
//!
//! Every entry is one of `0, ±1, ±i`, so products and anticommutators are
//! exact in floating point.

use crate::{linalg, CMatrix, Error, Result, C64};

/// The Minkowski metric `diag(+1, -1, -1, -1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Metric {
    signature: [i8; 4],
}

impl Metric {
    pub const fn minkowski() -> Self {
        Metric { signature: [1, -1, -1, -1] }
    }

    pub fn signature(&self) -> [i8; 4] {
        self.signature
    }

    /// `η^{μν}` (equal to `η_{μν}` for this metric).
    pub fn eta(&self, mu: usize, nu: usize) -> f64 {
        if mu == nu {
            self.signature[mu] as f64
        } else {
            0.0
        }
    }
}

impl Default for Metric {
    fn default() -> Self {
        Metric::minkowski()
    }
}

/// A family of four matrices indexed by a spacetime index.
pub trait CliffordSet {
    fn dim(&self) -> usize;
    fn metric(&self) -> Metric;
    /// Matrix with upper index `mu`; panics if `mu > 3`.
    fn matrix(&self, mu: usize) -> &CMatrix;
}

/// The four 4×4 Dirac matrices.
#[derive(Debug, Clone)]
pub struct GammaSet {
    gamma: [CMatrix; 4],
    metric: Metric,
}

/// The four 5×5 matrices with `(Γ^μ)^i_j = 1` at `(μ,4)`, `η_{μμ}` at `(4,μ)`.
#[derive(Debug, Clone)]
pub struct Gamma5Set {
    gamma5: [CMatrix; 4],
    metric: Metric,
}

impl CliffordSet for GammaSet {
    fn dim(&self) -> usize {
        4
    }
    fn metric(&self) -> Metric {
        self.metric
    }
    fn matrix(&self, mu: usize) -> &CMatrix {
        &self.gamma[mu]
    }
}

impl CliffordSet for Gamma5Set {
    fn dim(&self) -> usize {
        5
    }
    fn metric(&self) -> Metric {
        self.metric
    }
    fn matrix(&self, mu: usize) -> &CMatrix {
        &self.gamma5[mu]
    }
}

pub fn build_gamma_set() -> GammaSet {
    let o = C64::new(0.0, 0.0);
    let p = C64::new(1.0, 0.0);
    let i = linalg::I;
    let m = |rows: [[C64; 4]; 4]| CMatrix::from_fn(4, 4, |r, c| rows[r][c]);
    let g0 = m([[p, o, o, o], [o, p, o, o], [o, o, -p, o], [o, o, o, -p]]);
    // γᵏ = [[0, σₖ], [-σₖ, 0]]
    let g1 = m([[o, o, o, p], [o, o, p, o], [o, -p, o, o], [-p, o, o, o]]);
    let g2 = m([[o, o, o, -i], [o, o, i, o], [o, i, o, o], [-i, o, o, o]]);
    let g3 = m([[o, o, p, o], [o, o, o, -p], [-p, o, o, o], [o, p, o, o]]);
    GammaSet { gamma: [g0, g1, g2, g3], metric: Metric::minkowski() }
}

pub fn build_gamma5_set() -> Gamma5Set {
    let metric = Metric::minkowski();
    let gamma5 = std::array::from_fn(|mu| {
        CMatrix::from_fn(5, 5, |i, j| {
            if (i, j) == (mu, 4) {
                C64::new(1.0, 0.0)
            } else if (i, j) == (4, mu) {
                C64::new(metric.eta(mu, mu), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    });
    Gamma5Set { gamma5, metric }
}

impl GammaSet {
    pub fn gamma(&self, mu: usize) -> &CMatrix {
        &self.gamma[mu]
    }

    /// `(γ⁰)⁻¹`, which equals `γ⁰`.
    pub fn gamma0_inverse(&self) -> CMatrix {
        self.gamma[0].clone()
    }

    /// `Σ_μ γ^μ a_μ` for lower-index coefficients `a`.
    pub fn slash(&self, a: [C64; 4]) -> CMatrix {
        let mut out = CMatrix::zeros(4, 4);
        for (g, &coef) in self.gamma.iter().zip(a.iter()) {
            out += g * coef;
        }
        out
    }
}

impl Gamma5Set {
    pub fn gamma5(&self, mu: usize) -> &CMatrix {
        &self.gamma5[mu]
    }
}

/// `A^μ A^ν + A^ν A^μ` for any of the matrix sets.
pub fn anticommutator<S: CliffordSet + ?Sized>(set: &S, mu: usize, nu: usize) -> Result<CMatrix> {
    for idx in [mu, nu] {
        if idx > 3 {
            return Err(Error::IndexOutOfRange { index: idx, bound: 4 });
        }
    }
    let a = set.matrix(mu);
    let b = set.matrix(nu);
    Ok(a * b + b * a)
}

/// Largest entrywise deviation of all sixteen anticommutators from `2η^{μν}·1`.
pub fn clifford_violation<S: CliffordSet + ?Sized>(set: &S) -> f64 {
    let n = set.dim();
    let mut worst = 0.0_f64;
    for mu in 0..4 {
        for nu in 0..4 {
            let ac = anticommutator(set, mu, nu).expect("indices in range");
            let expected = linalg::identity(n) * C64::new(2.0 * set.metric().eta(mu, nu), 0.0);
            worst = worst.max(linalg::max_abs(&(ac - expected)));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4() -> CMatrix {
        CMatrix::zeros(4, 4)
    }

    #[test]
    fn dirac_matrices_satisfy_clifford_relation_exactly() {
        let g = build_gamma_set();
        assert_eq!(clifford_violation(&g), 0.0);
        assert_eq!(anticommutator(&g, 0, 0).unwrap(), linalg::identity(4) * C64::new(2.0, 0.0));
        assert_eq!(anticommutator(&g, 1, 1).unwrap(), linalg::identity(4) * C64::new(-2.0, 0.0));
        assert_eq!(anticommutator(&g, 1, 2).unwrap(), z4());
        assert_eq!(anticommutator(&g, 0, 3).unwrap(), z4());
    }

    #[test]
    fn gamma0_is_diagonal_and_self_inverse() {
        let g = build_gamma_set();
        let diag: Vec<f64> = (0..4).map(|i| g.gamma(0)[(i, i)].re).collect();
        assert_eq!(diag, vec![1.0, 1.0, -1.0, -1.0]);
        assert_eq!(g.gamma(0) * g.gamma(0), linalg::identity(4));
    }

    #[test]
    fn hermiticity_pattern() {
        let g = build_gamma_set();
        assert_eq!(g.gamma(0).adjoint(), *g.gamma(0));
        for k in 1..4 {
            assert_eq!(g.gamma(k).adjoint(), -g.gamma(k));
        }
    }

    #[test]
    fn gamma5_entries() {
        let g5 = build_gamma5_set();
        assert_eq!(g5.gamma5(0)[(0, 4)], C64::new(1.0, 0.0));
        assert_eq!(g5.gamma5(1)[(4, 1)], C64::new(-1.0, 0.0));
        assert_eq!(g5.gamma5(2)[(0, 0)], C64::new(0.0, 0.0));
        for mu in 0..4 {
            let nonzero = g5.gamma5(mu).iter().filter(|v| v.norm() != 0.0).count();
            assert_eq!(nonzero, 2);
        }
    }

    #[test]
    fn gamma5_anticommutator_regression() {
        // Direct multiplication: Γ⁰Γ⁰ has 1 at (0,0) and (4,4).
        let g5 = build_gamma5_set();
        let ac = anticommutator(&g5, 0, 0).unwrap();
        let mut expected = CMatrix::zeros(5, 5);
        expected[(0, 0)] = C64::new(2.0, 0.0);
        expected[(4, 4)] = C64::new(2.0, 0.0);
        assert_eq!(ac, expected);
        // Γ¹Γ¹ = -E₁₁ - E₄₄, so the 5×5 set is not a Clifford set.
        let ac11 = anticommutator(&g5, 1, 1).unwrap();
        assert_eq!(ac11[(1, 1)], C64::new(-2.0, 0.0));
        assert_eq!(ac11[(4, 4)], C64::new(-2.0, 0.0));
        assert_eq!(ac11[(0, 0)], C64::new(0.0, 0.0));
        // Γ⁰Γ¹ + Γ¹Γ⁰ = E₁₀ - E₀₁
        let ac01 = anticommutator(&g5, 0, 1).unwrap();
        assert_eq!(ac01[(0, 1)], C64::new(-1.0, 0.0));
        assert_eq!(ac01[(1, 0)], C64::new(1.0, 0.0));
        assert_eq!(ac01.iter().filter(|v| v.norm() != 0.0).count(), 2);
    }

    #[test]
    fn anticommutator_rejects_bad_index() {
        let g = build_gamma_set();
        assert!(matches!(anticommutator(&g, 4, 0), Err(Error::IndexOutOfRange { index: 4, .. })));
    }

    #[test]
    fn slash_basics() {
        let g = build_gamma_set();
        let e0 = [C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
        assert_eq!(g.slash(e0), *g.gamma(0));
        assert_eq!(g.slash([C64::new(0.0, 0.0); 4]), z4());
    }
}
