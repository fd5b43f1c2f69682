//! Constructors of the Schrödinger, Dirac and Klein-Gordon kernels.

use std::sync::Arc;

use crate::clifford::build_gamma_set;
use crate::potential::PotentialField;
use crate::waveeq::{DiracHamiltonian, KgTwoComponent, Propagator, Scheme, SliceHamiltonian};
use crate::{CVector, Error, Result, C64};

use super::kernel::{BlockSource, GreenKernel, KernelFamily};
use super::spectral::SpectralBasis;

/// `g(x', t'; x, t) = (1/iħ) θ(t'−t) Σ_a ψ_a(x')ψ_a*(x) e^{−iE_a(t'−t)/ħ}` for a
/// time-independent Hermitian Hamiltonian.
pub fn schrodinger_green<H: SliceHamiltonian + ?Sized>(h: &H) -> Result<GreenKernel> {
    if !h.is_static() {
        return Err(Error::TimeDependentHamiltonian);
    }
    let lat = *h.lattice();
    let basis = SpectralBasis::new(&h.at(0), lat.dx())?;
    let hbar = h.hbar();
    Ok(GreenKernel::new(
        lat,
        KernelFamily::Schrodinger,
        h.components(),
        hbar,
        BlockSource::Spectral(Arc::new(basis)),
        C64::new(0.0, -1.0 / (hbar * lat.dx())),
        None,
        None,
    ))
}

/// Retarded kernel of a Schrödinger-type evolution given step by step.
pub fn evolution_green(propagator: Propagator, hbar: f64) -> GreenKernel {
    let lat = *propagator.lattice();
    let k = propagator.components();
    GreenKernel::new(
        lat,
        KernelFamily::Schrodinger,
        k,
        hbar,
        BlockSource::Evolution(Arc::new(propagator)),
        C64::new(0.0, -1.0 / (hbar * lat.dx())),
        None,
        None,
    )
}

/// Dirac kernel `g(t', t) = (1/(iħΔx)) U(t', t) (γ⁰)⁻¹` sitewise, so that
/// `iħ Σ_x g γ⁰ ψ Δx = U(t', t)ψ`.
pub fn dirac_green(potential: &PotentialField, mass: f64, scheme: Scheme) -> Result<GreenKernel> {
    let lat = *potential.lattice();
    let hbar = potential.units().hbar;
    let p = Propagator::new(&DiracHamiltonian::new(potential.clone(), mass), scheme)?;
    let g = build_gamma_set();
    Ok(GreenKernel::new(
        lat,
        KernelFamily::Dirac,
        4,
        hbar,
        BlockSource::Evolution(Arc::new(p)),
        C64::new(0.0, -1.0 / (hbar * lat.dx())),
        Some(g.gamma0_inverse()),
        Some(g.gamma(0).clone()),
    ))
}

/// Kernel of the two-component Klein-Gordon evolution, `G̃(t', t) = Ũ(t', t)/Δx`.
pub fn kg_green_tilde(potential: &PotentialField, mass: f64) -> Result<GreenKernel> {
    let lat = *potential.lattice();
    let p = KgTwoComponent::new(potential.clone(), mass).propagator()?;
    Ok(GreenKernel::new(
        lat,
        KernelFamily::KgTilde,
        2,
        potential.units().hbar,
        BlockSource::Evolution(Arc::new(p)),
        C64::new(1.0 / lat.dx(), 0.0),
        None,
        None,
    ))
}

/// The scalar Klein-Gordon Green function `g = G̃¹₂`, the entry of the tilde
/// kernel that carries `χ = ∂_0φ` into `φ`.
pub fn kg_scalar_green(tilde: &GreenKernel) -> Result<GreenKernel> {
    if tilde.family() != KernelFamily::KgTilde || tilde.frame().is_some() {
        return Err(Error::KernelFamily(format!("expected a plain kg-tilde kernel, got {}", tilde.family().name())));
    }
    Ok(GreenKernel::new(
        *tilde.lattice(),
        KernelFamily::KgScalar,
        1,
        tilde.hbar(),
        BlockSource::Component { inner: Box::new(tilde.clone()), row: 0, col: 1 },
        C64::new(1.0, 0.0),
        None,
        None,
    ))
}

/// Reconstructs `φ(t')` from Cauchy data `(φ, ∂_0φ)` on slice `t < t'`:
///
/// `θφ(x') = Σ_x [g ∂_0φ − (∂_0g)φ + 2iqA_0 gφ] Δx`,
///
/// where `∂_0g` differentiates the scalar kernel in its source time with the
/// lattice stencil.
pub fn kg_reconstruct(
    g: &GreenKernel,
    phi: &CVector,
    dphi: &CVector,
    potential: &PotentialField,
    t: usize,
    tp: usize,
) -> Result<CVector> {
    if g.family() != KernelFamily::KgScalar {
        return Err(Error::KernelFamily(format!("expected kg-scalar, got {}", g.family().name())));
    }
    let lat = *g.lattice();
    lat.check_same(potential.lattice())?;
    let nx = lat.nx();
    for v in [phi, dphi] {
        if v.len() != nx {
            return Err(Error::DimensionMismatch { expected: nx, found: v.len() });
        }
    }
    let stencil = lat.stencil(crate::Axis::Time, t.min(lat.nt() - 1), 0);
    let reach = stencil.iter().map(|(i, _)| lat.site(i).0).max().unwrap_or(t);
    if tp <= t || tp >= lat.nt() || reach > tp {
        return Err(Error::TimeRange { t0: t, t1: tp, nt: lat.nt() });
    }
    let c = potential.units().c;
    let q = potential.coupling();
    let g0 = g.block(tp, t)?;
    let mut dg = crate::CMatrix::zeros(nx, nx);
    for (i, w) in stencil.iter() {
        dg += g.block(tp, lat.site(i).0)? * C64::new(w / c, 0.0);
    }
    let gauge = CVector::from_iterator(nx, (0..nx).map(|x| C64::new(0.0, 2.0 * q * potential.a(0, t, x)) * phi[x]));
    Ok((&g0 * dphi - dg * phi + &g0 * gauge) * C64::new(lat.dx(), 0.0))
}
