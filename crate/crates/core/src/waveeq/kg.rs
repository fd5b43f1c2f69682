//! The Klein-Gordon equation `(D^μD_μ + m²c²/ħ²)φ = 0` in scalar,
//! five-component and two-component form.
//!
//! The scalar residual composes first differences (`D_0∘D_0 − D_1∘D_1`), so
//! it agrees exactly with the five-component system built from the same
//! first-order operators. The time integrators use the compact three-point
//! stencil in space instead, which is second-order consistent with it.

use crate::clifford::build_gamma5_set;
use crate::lattice::{Axis, Field, Lattice, ScalarField};
use crate::matrixop::{gauge_derivative, MatrixOperator, OperatorEntry};
use crate::par::*;
use crate::potential::PotentialField;
use crate::waveeq::evolution::Propagator;
use crate::{linalg, CMatrix, CVector, Error, Result, C64};

fn mass_term(potential: &PotentialField, mass: f64) -> f64 {
    let u = potential.units();
    (mass * u.c / u.hbar).powi(2)
}

/// `D_0∘D_0 − D_1∘D_1 + m²c²/ħ²` as a scalar operator.
pub fn kg_operator(potential: &PotentialField, mass: f64) -> OperatorEntry {
    let lat = *potential.lattice();
    let d0 = gauge_derivative(potential, 0);
    let d1 = gauge_derivative(potential, 1);
    let d00 = d0.compose(&d0).expect("same lattice");
    let d11 = d1.compose(&d1).expect("same lattice");
    d00.sub(&d11)
        .and_then(|op| op.add(&OperatorEntry::constant(lat, C64::new(mass_term(potential, mass), 0.0))))
        .expect("same lattice")
}

/// `(D^μD_μ + m²c²/ħ²)φ`.
pub fn kg_residual(phi: &ScalarField, potential: &PotentialField, mass: f64) -> Result<ScalarField> {
    kg_operator(potential, mass).apply(phi)
}

/// `φ ↦ (iħD_0φ, iħD_1φ, iħD_2φ, iħD_3φ, mcφ)` with normalization `a = 1`.
pub fn kg_reduce_5(phi: &ScalarField, potential: &PotentialField, mass: f64) -> Result<Field> {
    if mass <= 0.0 {
        return Err(Error::MasslessReduction);
    }
    let u = potential.units();
    let ih = C64::new(0.0, u.hbar);
    let comps = [
        gauge_derivative(potential, 0).apply(phi)?.scale(ih),
        gauge_derivative(potential, 1).apply(phi)?.scale(ih),
        ScalarField::zeros(*phi.lattice()),
        ScalarField::zeros(*phi.lattice()),
        phi.scale(C64::new(mass * u.c, 0.0)),
    ];
    Field::from_components(&comps)
}

/// `iħΓ^μD_μ − mc·1₅` as a 5×5 matrix operator.
pub fn kg5_operator(potential: &PotentialField, mass: f64) -> Result<MatrixOperator> {
    if mass <= 0.0 {
        return Err(Error::MasslessReduction);
    }
    let lat = *potential.lattice();
    let u = potential.units();
    let g5 = build_gamma5_set();
    let mut op = MatrixOperator::constant(lat, &(linalg::identity(5) * C64::new(-mass * u.c, 0.0)));
    for mu in 0..2 {
        let d = MatrixOperator::diagonal(&gauge_derivative(potential, mu), 5);
        let term = MatrixOperator::constant(lat, g5.gamma5(mu)).odot(&d)?;
        op = op.add(&term.scale(C64::new(0.0, u.hbar)))?;
    }
    Ok(op)
}

/// `(iħΓ^μD_μ − mc)φ` for a five-component field. On a reduced field rows
/// 0–3 vanish identically and row 4 equals `−ħ²` times the scalar residual.
pub fn kg5_residual(varphi: &Field, potential: &PotentialField, mass: f64) -> Result<Field> {
    if varphi.components() != 5 {
        return Err(Error::DimensionMismatch { expected: 5, found: varphi.components() });
    }
    kg5_operator(potential, mass)?.apply(varphi)
}

/// Completes `seed` to an exact solution of the composed-stencil equation on
/// slices `2..nt-2`. Slices 0–3 of `seed` are kept; each later slice is the
/// unique value that zeroes the residual two slices back.
pub fn kg_march(seed: &ScalarField, potential: &PotentialField, mass: f64) -> Result<ScalarField> {
    let lat = *seed.lattice();
    lat.check_same(potential.lattice())?;
    if lat.nt() < 5 {
        return Err(Error::InvalidLattice(format!("marching needs nt >= 5, got {}", lat.nt())));
    }
    let op = kg_operator(potential, mass);
    let nx = lat.nx();
    let c = potential.units().c;
    let coef = 4.0 * c * c * lat.dt() * lat.dt();
    let mut phi = seed.clone();
    for v in &mut phi.values_mut()[4 * nx..] {
        *v = C64::new(0.0, 0.0);
    }
    for t in 2..lat.nt() - 2 {
        let r = op.apply(&phi)?;
        let vals = phi.values_mut();
        for x in 0..nx {
            vals[lat.index(t + 2, x)] = -r.at(t, x) * coef;
        }
    }
    Ok(phi)
}

/// Compact gauge-covariant spatial operator `D_1D_1` on slice `t`:
/// `δ²φ/Δx² + 2iqA_1 δφ + iq(∂_1A_1)φ − q²A_1²φ`.
fn compact_spatial(potential: &PotentialField, da1: &ScalarField, t: usize) -> CMatrix {
    let lat = *potential.lattice();
    let nx = lat.nx();
    let q = potential.coupling();
    let h2 = 1.0 / (lat.dx() * lat.dx());
    let h1 = 0.5 / lat.dx();
    let mut m = CMatrix::zeros(nx, nx);
    for x in 0..nx {
        let a1 = potential.a(1, t, x);
        m[(x, x)] += C64::new(-2.0 * h2 - q * q * a1 * a1, q * da1.at(t, x).re);
        m[(x, lat.wrap(x, 1))] += C64::new(h2, 2.0 * q * a1 * h1);
        m[(x, lat.wrap(x, -1))] += C64::new(h2, -2.0 * q * a1 * h1);
    }
    m
}

fn potential_gradients(potential: &PotentialField) -> (ScalarField, ScalarField) {
    let lat = *potential.lattice();
    let c = potential.units().c;
    let real = |mu: usize| {
        ScalarField::from_values(lat, potential.component(mu).into_iter().map(|v| C64::new(v, 0.0)).collect())
            .expect("one value per site")
    };
    let da0 = real(0).difference(Axis::Time).scale(C64::new(1.0 / c, 0.0));
    let da1 = real(1).difference(Axis::Space);
    (da0, da1)
}

/// Leapfrog march of the compact scheme from two initial slices.
pub fn kg_leapfrog(phi0: &CVector, phi1: &CVector, potential: &PotentialField, mass: f64) -> Result<ScalarField> {
    let lat = *potential.lattice();
    let nx = lat.nx();
    for s in [phi0, phi1] {
        if s.len() != nx {
            return Err(Error::DimensionMismatch { expected: nx, found: s.len() });
        }
    }
    let c = potential.units().c;
    let q = potential.coupling();
    let mu2 = mass_term(potential, mass);
    let cdt = c * lat.dt();
    let (da0, da1) = potential_gradients(potential);
    let mut values = Vec::with_capacity(lat.sites());
    values.extend(phi0.iter());
    values.extend(phi1.iter());
    let (mut prev, mut cur) = (phi0.clone(), phi1.clone());
    for t in 1..lat.nt() - 1 {
        let spatial = compact_spatial(potential, &da1, t) * &cur;
        let mut next = CVector::zeros(nx);
        for x in 0..nx {
            let a0 = potential.a(0, t, x);
            let rhs = (cur[x] * 2.0 - prev[x]) / (cdt * cdt) + C64::new(0.0, q * a0 / cdt) * prev[x]
                - C64::new(0.0, q) * da0.at(t, x) * cur[x]
                + C64::new(q * q * a0 * a0 - mu2, 0.0) * cur[x]
                + spatial[x];
            next[x] = rhs / C64::new(1.0 / (cdt * cdt), q * a0 / cdt);
        }
        values.extend(next.iter());
        prev = cur;
        cur = next;
    }
    ScalarField::from_values(lat, values)
}

/// The first-order system `∂_t(φ, χ) = c(χ, D_1D_1φ − m²c²/ħ²φ −
/// iq(∂_0A_0)φ + q²A_0²φ − 2iqA_0χ)` with `χ = ∂_0φ`. Slice states
/// interleave `(φ, χ)` per site.
#[derive(Debug, Clone)]
pub struct KgTwoComponent {
    potential: PotentialField,
    mass: f64,
    da0: ScalarField,
    da1: ScalarField,
}

impl KgTwoComponent {
    pub fn new(potential: PotentialField, mass: f64) -> Self {
        let (da0, da1) = potential_gradients(&potential);
        KgTwoComponent { potential, mass, da0, da1 }
    }

    pub fn lattice(&self) -> &Lattice {
        self.potential.lattice()
    }

    /// The generator `M(t)` of `∂_t y = M y` on slice `t`.
    pub fn generator(&self, t: usize) -> CMatrix {
        let lat = *self.potential.lattice();
        let nx = lat.nx();
        let c = self.potential.units().c;
        let q = self.potential.coupling();
        let mu2 = mass_term(&self.potential, self.mass);
        let spatial = compact_spatial(&self.potential, &self.da1, t);
        let mut m = CMatrix::zeros(2 * nx, 2 * nx);
        for x in 0..nx {
            m[(2 * x, 2 * x + 1)] = C64::new(c, 0.0);
            for y in 0..nx {
                let s = spatial[(x, y)];
                if s != C64::new(0.0, 0.0) {
                    m[(2 * x + 1, 2 * y)] += s * c;
                }
            }
            let a0 = self.potential.a(0, t, x);
            m[(2 * x + 1, 2 * x)] += (C64::new(q * q * a0 * a0 - mu2, 0.0) - C64::new(0.0, q) * self.da0.at(t, x)) * c;
            m[(2 * x + 1, 2 * x + 1)] += C64::new(0.0, -2.0 * q * a0 * c);
        }
        m
    }

    /// Implicit-midpoint map from slice `t` to `t+1`, generator averaged over
    /// the step.
    pub fn step_matrix(&self, t: usize) -> Result<CMatrix> {
        let m = if self.potential.is_static() {
            self.generator(t)
        } else {
            (self.generator(t) + self.generator(t + 1)) * C64::new(0.5, 0.0)
        };
        linalg::midpoint_step(&m, self.lattice().dt())
    }

    pub fn propagator(&self) -> Result<Propagator> {
        let lat = *self.lattice();
        let steps: Vec<Result<CMatrix>> = if self.potential.is_static() {
            let s = self.step_matrix(0)?;
            (0..lat.nt() - 1).map(|_| Ok(s.clone())).collect()
        } else {
            (0..lat.nt() - 1).into_par_iter().map(|t| self.step_matrix(t)).collect()
        };
        Propagator::from_steps(lat, 2, steps.into_iter().collect::<Result<_>>()?)
    }
}

/// One implicit-midpoint step of the two-component system from slice `t`.
pub fn kg_two_component_step(state: &CVector, potential: &PotentialField, mass: f64, t: usize) -> Result<CVector> {
    let lat = potential.lattice();
    if state.len() != 2 * lat.nx() {
        return Err(Error::DimensionMismatch { expected: 2 * lat.nx(), found: state.len() });
    }
    if t + 1 >= lat.nt() {
        return Err(Error::TimeRange { t0: t, t1: t + 1, nt: lat.nt() });
    }
    Ok(KgTwoComponent::new(potential.clone(), mass).step_matrix(t)? * state)
}

pub fn kg_two_component_propagator(potential: &PotentialField, mass: f64) -> Result<Propagator> {
    KgTwoComponent::new(potential.clone(), mass).propagator()
}

/// Interleaves `(φ, χ)` into a two-component slice state.
pub fn kg_two_component_state(phi: &CVector, chi: &CVector) -> Result<CVector> {
    if phi.len() != chi.len() {
        return Err(Error::DimensionMismatch { expected: phi.len(), found: chi.len() });
    }
    Ok(CVector::from_iterator(2 * phi.len(), phi.iter().zip(chi.iter()).flat_map(|(a, b)| [*a, *b])))
}

/// Splits a two-component slice state into `(φ, χ)`.
pub fn split_two_component(state: &CVector) -> (CVector, CVector) {
    let n = state.len() / 2;
    (
        CVector::from_iterator(n, state.iter().step_by(2).copied()),
        CVector::from_iterator(n, state.iter().skip(1).step_by(2).copied()),
    )
}

/// `Q = Im Σ_x φ*χ Δx`.
pub fn kg_charge(state: &CVector, dx: f64) -> f64 {
    let (phi, chi) = split_two_component(state);
    phi.iter().zip(chi.iter()).map(|(p, c)| (p.conj() * c).im).sum::<f64>() * dx
}

/// Gauge-covariant charge `Q = Σ_x [Im(φ*χ) + qA_0|φ|²] Δx` on slice `t`,
/// the imaginary part of `φ* D_0φ`. Reduces to [`kg_charge`] when `A_0 = 0`.
pub fn kg_gauge_charge(state: &CVector, potential: &PotentialField, t: usize) -> f64 {
    let lat = potential.lattice();
    let q = potential.coupling();
    let (phi, chi) = split_two_component(state);
    (0..lat.nx())
        .map(|x| (phi[x].conj() * chi[x]).im + q * potential.a(0, t, x) * phi[x].norm_sqr())
        .sum::<f64>()
        * lat.dx()
}
