//! Orthonormal eigenbases of slice Hamiltonians.

use crate::{linalg, CMatrix, CVector, Error, Result, C64};

/// Eigenvalues `E_a` and eigenvectors `ψ_a` of a Hermitian slice
/// Hamiltonian, normalized so that `Σ_x ψ_a*(x)ψ_b(x)Δx = δ_ab`.
#[derive(Debug, Clone)]
pub struct SpectralBasis {
    energies: Vec<f64>,
    vectors: CMatrix,
    dx: f64,
}

impl SpectralBasis {
    pub fn new(h: &CMatrix, dx: f64) -> Result<Self> {
        let dev = linalg::hermiticity_deviation(h);
        if dev > 1e-12 * linalg::max_abs(h).max(1.0) {
            return Err(Error::NonHermitian(dev));
        }
        let (energies, v) = linalg::hermitian_eigen(h);
        Ok(SpectralBasis { energies, vectors: v * C64::new(1.0 / dx.sqrt(), 0.0), dx })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Columns are the `ψ_a`.
    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    /// `max|⟨ψ_a, ψ_b⟩Δx − δ_ab|`.
    pub fn orthonormality_deviation(&self) -> f64 {
        let g = self.vectors.adjoint() * &self.vectors * C64::new(self.dx, 0.0);
        linalg::max_abs(&(g - linalg::identity(self.energies.len())))
    }

    /// `max|Σ_a ψ_a(x')ψ_a*(x) − δ_{x'x}/Δx|·Δx`.
    pub fn completeness_deviation(&self) -> f64 {
        let s = &self.vectors * self.vectors.adjoint() * C64::new(self.dx, 0.0);
        linalg::max_abs(&(s - linalg::identity(self.energies.len())))
    }

    /// `Δx Σ_a ψ_a ψ_a† e^{−iE_aτ/ħ}`, the evolution over time `τ`.
    pub fn evolution(&self, tau: f64, hbar: f64) -> CMatrix {
        let phases = CVector::from_iterator(
            self.energies.len(),
            self.energies.iter().map(|e| C64::from_polar(1.0, -e * tau / hbar)),
        );
        let mut vd = self.vectors.clone();
        for (j, mut col) in vd.column_iter_mut().enumerate() {
            col *= phases[j];
        }
        vd * self.vectors.adjoint() * C64::new(self.dx, 0.0)
    }
}
