//! Born iteration of the integral equation `g = g₀ + g₀ ⋆ (e/c)A̸ ⋆ g` on the
//! full spacetime kernel.
//!
//! The contraction `⋆` sums over spacetime sites with the measure of
//! `d⁴y = c dt dy`, so the interaction weight on site `(t, x)` is
//! `(e/c) · cΔtΔx · A̸(t, x) = eΔtΔx A̸(t, x)`.

use crate::clifford::build_gamma_set;
use crate::potential::PotentialField;
use crate::{linalg, CMatrix, Error, Result, C64};

use super::kernel::{GreenKernel, KernelFamily, Theta};

/// Outcome of [`born_iterate`].
#[derive(Debug, Clone)]
pub struct BornOutcome {
    pub kernel: GreenKernel,
    /// `‖g⁽ᵏ⁾ − g₀ − g₀Wg⁽ᵏ⁾‖ / ‖g₀‖` (max norm) for `k = 1..=n`.
    pub residuals: Vec<f64>,
    /// `‖g⁽ᵏ⁾ − g⁽ᵏ⁻¹⁾‖ / ‖g₀‖` for `k = 1..=n`.
    pub updates: Vec<f64>,
    /// Set when an update grew compared to the previous one.
    pub diverging: bool,
}

/// Block-diagonal spacetime weight `eΔtΔx A̸(t, x)`.
pub fn born_weight(potential: &PotentialField) -> CMatrix {
    let lat = *potential.lattice();
    let g = build_gamma_set();
    let e = potential.charge();
    let s = e * lat.dt() * lat.dx();
    let blocks: Vec<CMatrix> = (0..lat.sites())
        .map(|i| {
            let (t, x) = lat.site(i);
            g.slash([
                C64::new(s * potential.a(0, t, x), 0.0),
                C64::new(s * potential.a(1, t, x), 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
            ])
        })
        .collect();
    linalg::block_diagonal(&blocks)
}

/// `‖g − g₀ − g₀Wg‖ / ‖g₀‖` in the max norm.
pub fn born_equation_residual(g: &CMatrix, g0: &CMatrix, w: &CMatrix) -> f64 {
    let r = g - g0 - g0 * (w * g);
    linalg::max_abs(&r) / linalg::max_abs(g0).max(f64::MIN_POSITIVE)
}

fn check_free_kernel(g0: &GreenKernel, potential: &PotentialField) -> Result<()> {
    if g0.family() != KernelFamily::Dirac || g0.theta() != Theta::Retarded || g0.frame().is_some() {
        return Err(Error::KernelFamily("Born iteration needs a plain retarded Dirac kernel".into()));
    }
    g0.lattice().check_same(potential.lattice())
}

/// Runs `iterations` steps of `g⁽ᵏ⁺¹⁾ = g₀ + g₀Wg⁽ᵏ⁾` from `g⁽⁰⁾ = g₀`.
pub fn born_iterate(g0: &GreenKernel, potential: &PotentialField, iterations: usize, budget: u64) -> Result<BornOutcome> {
    run(g0, potential, budget, |k, _| k < iterations)
}

/// Iterates until the relative update drops below `tol` or `max_iterations`
/// is reached.
pub fn born_solve(g0: &GreenKernel, potential: &PotentialField, tol: f64, max_iterations: usize, budget: u64) -> Result<BornOutcome> {
    run(g0, potential, budget, |k, last| k < max_iterations && last.is_none_or(|u| u > tol))
}

fn run(
    g0: &GreenKernel,
    potential: &PotentialField,
    budget: u64,
    keep_going: impl Fn(usize, Option<f64>) -> bool,
) -> Result<BornOutcome> {
    check_free_kernel(g0, potential)?;
    let free = g0.materialize(budget)?;
    let norm0 = linalg::max_abs(&free).max(f64::MIN_POSITIVE);
    let p = &free * born_weight(potential);
    let mut g = free.clone();
    let mut updates = Vec::new();
    let mut residuals = Vec::new();
    let mut next = &free + &p * &g;
    while keep_going(updates.len(), updates.last().copied()) {
        let update = linalg::max_abs(&(&next - &g)) / norm0;
        updates.push(update);
        g = next;
        next = &free + &p * &g;
        residuals.push(linalg::max_abs(&(&next - &g)) / norm0);
    }
    let diverging = updates.windows(2).any(|w| w[1] > w[0]);
    let lat = *g0.lattice();
    let kernel = GreenKernel::dense(lat, KernelFamily::Born, 4, g0.hbar(), g, Some(build_gamma_set().gamma(0).clone()));
    Ok(BornOutcome { kernel, residuals, updates, diverging })
}
