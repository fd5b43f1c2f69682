//! Retarded Green kernels and their correspondence with evolution operators.
//!
//! A kernel block `g(t', t)` maps the state on slice `t` to the field on slice
//! `t'`. At coincidence the retarded step function is taken as `θ(0) = 1`, so
//! `g(t, t)` is the discrete delta `δ_{x'x}/Δx` times the family's
//! normalization and reconstruction reproduces the state itself.

mod born;
mod builders;
mod io;
mod kernel;
mod spectral;
mod window;

pub use born::{born_equation_residual, born_iterate, born_solve, born_weight, BornOutcome};
pub use builders::{dirac_green, evolution_green, kg_green_tilde, kg_reconstruct, kg_scalar_green, schrodinger_green};
pub use io::{KernelDump, MAGIC, VERSION};
pub use kernel::{kernel_budget, GreenKernel, KernelFamily, Theta, BUDGET_ENV, DEFAULT_KERNEL_BUDGET};
pub use spectral::SpectralBasis;
pub use window::{finite_window_evolution, finite_window_from, window_center};

/// `l⁻¹(x') g(x', x) l(x)` blockwise; see [`GreenKernel::morphism`].
pub fn green_morphism(g: &GreenKernel, frame: &crate::transport::FrameField) -> crate::Result<GreenKernel> {
    g.morphism(frame)
}

/// Applies a kernel to a slice state; see [`GreenKernel::apply`].
pub fn apply_kernel(g: &GreenKernel, psi: &crate::CVector, t: usize, tp: usize) -> crate::Result<crate::CVector> {
    g.apply(psi, t, tp)
}
