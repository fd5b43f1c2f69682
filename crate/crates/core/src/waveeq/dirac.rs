//! The Dirac equation `(iħγ^μD_μ − mc)ψ = 0` and its Hamiltonian form
//! `iħ∂_tψ = Hψ` with `H = γ⁰(−iħcγ¹D_1 + mc²) + eA_0`.

use crate::clifford::{build_gamma_set, GammaSet};
use crate::lattice::{Field, Lattice};
use crate::matrixop::dirac_operator;
use crate::potential::{PotentialField, Units};
use crate::waveeq::evolution::{Evolved, Propagator, Scheme, SliceHamiltonian};
use crate::{linalg, CMatrix, CVector, Error, Result, C64};

/// `(iħγ^μD_μ − mc)ψ` with lattice first differences.
pub fn dirac_residual(psi: &Field, potential: &PotentialField, mass: f64) -> Result<Field> {
    if psi.components() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: psi.components() });
    }
    dirac_operator(&build_gamma_set(), potential, mass).apply(psi)
}

/// The Dirac Hamiltonian on every slice of a potential's lattice.
#[derive(Debug, Clone)]
pub struct DiracHamiltonian {
    potential: PotentialField,
    mass: f64,
    gamma: GammaSet,
}

impl DiracHamiltonian {
    pub fn new(potential: PotentialField, mass: f64) -> Self {
        DiracHamiltonian { potential, mass, gamma: build_gamma_set() }
    }

    pub fn potential(&self) -> &PotentialField {
        &self.potential
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }
}

impl SliceHamiltonian for DiracHamiltonian {
    fn lattice(&self) -> &Lattice {
        self.potential.lattice()
    }

    fn components(&self) -> usize {
        4
    }

    fn hbar(&self) -> f64 {
        self.potential.units().hbar
    }

    fn is_static(&self) -> bool {
        self.potential.is_static()
    }

    fn at(&self, t: usize) -> CMatrix {
        let lat = *self.potential.lattice();
        let Units { hbar, c } = self.potential.units();
        let nx = lat.nx();
        let e = self.potential.charge();
        let g0 = self.gamma.gamma(0);
        let g0g1 = g0 * self.gamma.gamma(1);
        let hop = &g0g1 * C64::new(0.0, -hbar * c / (2.0 * lat.dx()));
        let rest = g0 * C64::new(self.mass * c * c, 0.0);
        let mut h = CMatrix::zeros(4 * nx, 4 * nx);
        for x in 0..nx {
            let onsite = &rest
                + linalg::identity(4) * C64::new(e * self.potential.a(0, t, x), 0.0)
                + &g0g1 * C64::new(e * self.potential.a(1, t, x), 0.0);
            let mut d = h.view_mut((4 * x, 4 * x), (4, 4));
            d += onsite;
            let mut fwd = h.view_mut((4 * x, 4 * lat.wrap(x, 1)), (4, 4));
            fwd += &hop;
            let mut bwd = h.view_mut((4 * x, 4 * lat.wrap(x, -1)), (4, 4));
            bwd -= &hop;
        }
        h
    }
}

/// `H` on slice `t`, checked to be Hermitian.
pub fn dirac_hamiltonian(potential: &PotentialField, mass: f64, t: usize) -> Result<CMatrix> {
    let nt = potential.lattice().nt();
    if t >= nt {
        return Err(Error::TimeRange { t0: t, t1: t, nt });
    }
    let h = DiracHamiltonian::new(potential.clone(), mass).at(t);
    let dev = linalg::hermiticity_deviation(&h);
    if dev > 1e-12 * linalg::max_abs(&h).max(1.0) {
        return Err(Error::NonHermitian(dev));
    }
    Ok(h)
}

/// Evolves a slice state from slice `t0` to slice `t1 ≥ t0`.
pub fn evolve_dirac(
    psi0: &CVector,
    potential: &PotentialField,
    mass: f64,
    t0: usize,
    t1: usize,
    scheme: Scheme,
) -> Result<Evolved> {
    let p = Propagator::new(&DiracHamiltonian::new(potential.clone(), mass), scheme)?;
    Ok(Evolved { state: p.evolve(psi0, t0, t1)?, accuracy_warning: p.accuracy_warning() })
}

/// The spacetime field obtained by evolving `psi0` from slice 0 to the end.
pub fn evolve_dirac_field(psi0: &CVector, potential: &PotentialField, mass: f64, scheme: Scheme) -> Result<Field> {
    Propagator::new(&DiracHamiltonian::new(potential.clone(), mass), scheme)?.history(psi0)
}

/// `√((ħc k̃)² + (mc²)²)` with the centered-difference wave number
/// `k̃ = sin(kΔx)/Δx`.
pub fn free_dirac_energy(k: f64, mass: f64, units: Units, dx: f64) -> f64 {
    let kt = (k * dx).sin() / dx;
    ((units.hbar * units.c * kt).powi(2) + (mass * units.c * units.c).powi(2)).sqrt()
}

/// An eigenvector of the free lattice Hamiltonian for a plane wave `e^{ikx}`,
/// with its energy; `positive` selects the upper branch.
pub fn free_spinor(k: f64, mass: f64, units: Units, dx: f64, positive: bool) -> (f64, CVector) {
    let g = build_gamma_set();
    let kt = (k * dx).sin() / dx;
    let symbol = g.gamma(0) * (g.gamma(1) * C64::new(units.hbar * units.c * kt, 0.0)
        + linalg::identity(4) * C64::new(mass * units.c * units.c, 0.0));
    let (e, v) = linalg::hermitian_eigen(&symbol);
    let j = if positive { 3 } else { 0 };
    (e[j], v.column(j).into_owned())
}
