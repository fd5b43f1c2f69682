//! The Dirac equation in the bundle picture: states are sections
//! `Ψ(x) = l_x⁻¹ψ(x)` and operators are conjugated by the frame.

use crate::clifford::GammaSet;
use crate::lattice::Lattice;
use crate::matrixop::MatrixField;
use crate::potential::PotentialField;
use crate::transport::{bundle_morphism, FrameField};
use crate::waveeq::dirac::DiracHamiltonian;
use crate::waveeq::evolution::{Evolved, Propagator, Scheme};
use crate::{linalg, CMatrix, CVector, Error, Result, C64};

fn slashed_potential_at(gamma: &GammaSet, potential: &PotentialField, t: usize, x: usize) -> CMatrix {
    gamma.slash([
        C64::new(potential.a(0, t, x), 0.0),
        C64::new(potential.a(1, t, x), 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
    ])
}

/// `A̸(x) = γ^μA_μ(x)` at every site.
pub fn conventional_slashed_potential(gamma: &GammaSet, potential: &PotentialField) -> MatrixField {
    let lat = *potential.lattice();
    let mats = (0..lat.sites())
        .map(|i| {
            let (t, x) = lat.site(i);
            slashed_potential_at(gamma, potential, t, x)
        })
        .collect();
    MatrixField::new(lat, mats).expect("one matrix per site")
}

/// `G^μ(x)A_μ(x)` with `G^μ = l⁻¹γ^μl`, the slashed potential seen in the
/// bundle.
pub fn bundle_slashed_potential(frame: &FrameField, gamma: &GammaSet, potential: &PotentialField) -> Result<MatrixField> {
    check(frame, potential)?;
    bundle_morphism(frame, &conventional_slashed_potential(gamma, potential))
}

/// The Diracian `mc·1₄ + (e/c)A̸` at every site.
pub fn conventional_diracian(gamma: &GammaSet, potential: &PotentialField, mass: f64) -> MatrixField {
    let c = potential.units().c;
    let e = potential.charge();
    let a = conventional_slashed_potential(gamma, potential);
    a.map(|m| linalg::identity(4) * C64::new(mass * c, 0.0) + m * C64::new(e / c, 0.0))
}

/// The bundle Diracian `l⁻¹(mc·1₄ + (e/c)A̸)l`.
pub fn bundle_diracian(frame: &FrameField, gamma: &GammaSet, potential: &PotentialField, mass: f64) -> Result<MatrixField> {
    check(frame, potential)?;
    bundle_morphism(frame, &conventional_diracian(gamma, potential, mass))
}

fn check(frame: &FrameField, potential: &PotentialField) -> Result<()> {
    frame.lattice().check_same(potential.lattice())?;
    if frame.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: frame.dim() });
    }
    Ok(())
}

/// Evolves a bundle slice state `Ψ(t0)` to slice `t1`. Each step is
/// `Ψ(t+1) = l_{t+1}⁻¹ U(t+1,t) l_t Ψ(t)`, applied sitewise.
pub fn evolve_dirac_bundle(
    psi0: &CVector,
    frame: &FrameField,
    potential: &PotentialField,
    mass: f64,
    t0: usize,
    t1: usize,
    scheme: Scheme,
) -> Result<Evolved> {
    check(frame, potential)?;
    let lat = *potential.lattice();
    if t1 < t0 || t1 >= lat.nt() {
        return Err(Error::TimeRange { t0, t1, nt: lat.nt() });
    }
    let p = Propagator::new(&DiracHamiltonian::new(potential.clone(), mass), scheme)?;
    let mut s = psi0.clone();
    for t in t0..t1 {
        let conventional = frame.from_bundle_slice(t, &s)?;
        s = frame.to_bundle_slice(t + 1, &(p.step(t) * conventional))?;
    }
    Ok(Evolved { state: s, accuracy_warning: p.accuracy_warning() })
}

/// `sqrt(Σ_x |l_x Ψ(x)|² Δx)`, the norm of the conventional state a bundle
/// slice represents.
pub fn frame_weighted_norm(frame: &FrameField, lattice: &Lattice, t: usize, state: &CVector) -> Result<f64> {
    let conventional = frame.from_bundle_slice(t, state)?;
    Ok((conventional.norm_squared() * lattice.dx()).sqrt())
}
