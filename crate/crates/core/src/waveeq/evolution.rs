//! Slice Hamiltonians and the step-by-step evolution operators they generate.
//!
//! A slice state is the field on one time slice, flattened x-major with `k`
//! components per site. A [`Propagator`] caches the one-step maps
//! `U(t+1, t)` for every slice of the lattice.

use crate::lattice::{Field, Lattice};
use crate::par::*;
use crate::potential::PotentialField;
use crate::{linalg, CMatrix, CVector, Error, Result, C64};

/// Time-stepping scheme for a slice Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// `(1 + iHΔt/2ħ)⁻¹(1 − iHΔt/2ħ)` with `H` averaged over the step.
    CrankNicolson,
    /// `exp(−iHΔt/ħ)` by eigendecomposition; time-independent `H` only.
    ExactExponential,
}

/// A Hermitian operator on slice states, possibly depending on the slice.
pub trait SliceHamiltonian: Sync {
    fn lattice(&self) -> &Lattice;
    /// Components per site.
    fn components(&self) -> usize;
    fn hbar(&self) -> f64;
    fn is_static(&self) -> bool;
    /// `H` on slice `t`.
    fn at(&self, t: usize) -> CMatrix;

    /// `H` at the midpoint of step `t → t+1`, as the average of both slices.
    fn midpoint(&self, t: usize) -> CMatrix {
        if self.is_static() {
            return self.at(t);
        }
        (self.at(t) + self.at(t + 1)) * C64::new(0.5, 0.0)
    }

    fn slice_dim(&self) -> usize {
        self.components() * self.lattice().nx()
    }
}

/// The same matrix on every slice.
#[derive(Debug, Clone)]
pub struct ConstantHamiltonian {
    lattice: Lattice,
    components: usize,
    hbar: f64,
    h: CMatrix,
}

impl ConstantHamiltonian {
    pub fn new(lattice: Lattice, components: usize, hbar: f64, h: CMatrix) -> Result<Self> {
        let n = components * lattice.nx();
        if h.nrows() != n || h.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: h.nrows() });
        }
        Ok(ConstantHamiltonian { lattice, components, hbar, h })
    }

    pub fn zero(lattice: Lattice, components: usize) -> Self {
        let n = components * lattice.nx();
        ConstantHamiltonian { lattice, components, hbar: 1.0, h: CMatrix::zeros(n, n) }
    }
}

impl SliceHamiltonian for ConstantHamiltonian {
    fn lattice(&self) -> &Lattice {
        &self.lattice
    }
    fn components(&self) -> usize {
        self.components
    }
    fn hbar(&self) -> f64 {
        self.hbar
    }
    fn is_static(&self) -> bool {
        true
    }
    fn at(&self, _t: usize) -> CMatrix {
        self.h.clone()
    }
}

/// `H = −(ħ²/2m)Δ + eA_0` with the three-point periodic Laplacian.
#[derive(Debug, Clone)]
pub struct SchrodingerHamiltonian {
    potential: PotentialField,
    mass: f64,
}

impl SchrodingerHamiltonian {
    pub fn new(potential: PotentialField, mass: f64) -> Self {
        SchrodingerHamiltonian { potential, mass }
    }
}

impl SliceHamiltonian for SchrodingerHamiltonian {
    fn lattice(&self) -> &Lattice {
        self.potential.lattice()
    }
    fn components(&self) -> usize {
        1
    }
    fn hbar(&self) -> f64 {
        self.potential.units().hbar
    }
    fn is_static(&self) -> bool {
        self.potential.is_static()
    }
    fn at(&self, t: usize) -> CMatrix {
        let lat = *self.potential.lattice();
        let nx = lat.nx();
        let hbar = self.hbar();
        let kin = hbar * hbar / (2.0 * self.mass * lat.dx() * lat.dx());
        let e = self.potential.charge();
        let mut h = CMatrix::zeros(nx, nx);
        for x in 0..nx {
            h[(x, x)] += C64::new(2.0 * kin + e * self.potential.a(0, t, x), 0.0);
            h[(x, lat.wrap(x, 1))] -= C64::new(kin, 0.0);
            h[(x, lat.wrap(x, -1))] -= C64::new(kin, 0.0);
        }
        h
    }
}

/// A slice state after evolution, with the accuracy flag of the run.
#[derive(Debug, Clone)]
pub struct Evolved {
    pub state: CVector,
    /// Set when `‖H‖·Δt/ħ > 1` on some step: the scheme stays unitary but
    /// its phase accuracy is poor.
    pub accuracy_warning: bool,
}

/// Cached one-step evolution maps `U(t+1, t)` for `t = 0..nt-1`.
#[derive(Debug, Clone)]
pub struct Propagator {
    lattice: Lattice,
    components: usize,
    steps: Vec<CMatrix>,
    eigen: Option<(Vec<f64>, CMatrix, f64)>,
    accuracy_warning: bool,
}

/// Induced ∞-norm, an upper bound of the spectral norm of a Hermitian matrix.
fn row_sum_norm(m: &CMatrix) -> f64 {
    m.row_iter().map(|r| r.iter().map(|v| v.norm()).sum::<f64>()).fold(0.0, f64::max)
}

impl Propagator {
    pub fn new<H: SliceHamiltonian + ?Sized>(h: &H, scheme: Scheme) -> Result<Self> {
        match scheme {
            Scheme::CrankNicolson => Self::crank_nicolson(h),
            Scheme::ExactExponential => Self::exact(h),
        }
    }

    pub fn crank_nicolson<H: SliceHamiltonian + ?Sized>(h: &H) -> Result<Self> {
        let lattice = *h.lattice();
        let dt = lattice.dt();
        let hbar = h.hbar();
        let steps_count = lattice.nt() - 1;
        let built: Vec<Result<(CMatrix, bool)>> = if h.is_static() {
            let hm = h.at(0);
            let warn = row_sum_norm(&hm) * dt / hbar > 1.0;
            let s = linalg::crank_nicolson_step(&hm, dt, hbar)?;
            (0..steps_count).map(|_| Ok((s.clone(), warn))).collect()
        } else {
            (0..steps_count)
                .into_par_iter()
                .map(|t| {
                    let hm = h.midpoint(t);
                    let warn = row_sum_norm(&hm) * dt / hbar > 1.0;
                    Ok((linalg::crank_nicolson_step(&hm, dt, hbar)?, warn))
                })
                .collect()
        };
        let mut steps = Vec::with_capacity(steps_count);
        let mut accuracy_warning = false;
        for b in built {
            let (s, w) = b?;
            steps.push(s);
            accuracy_warning |= w;
        }
        Ok(Propagator { lattice, components: h.components(), steps, eigen: None, accuracy_warning })
    }

    pub fn exact<H: SliceHamiltonian + ?Sized>(h: &H) -> Result<Self> {
        if !h.is_static() {
            return Err(Error::TimeDependentHamiltonian);
        }
        let lattice = *h.lattice();
        let hm = h.at(0);
        let dev = linalg::hermiticity_deviation(&hm);
        if dev > 1e-12 * linalg::max_abs(&hm).max(1.0) {
            return Err(Error::NonHermitian(dev));
        }
        let hbar = h.hbar();
        let (e, v) = linalg::hermitian_eigen(&hm);
        let step = exp_from_eigen(&e, &v, lattice.dt() / hbar);
        let accuracy_warning = e.iter().fold(0.0_f64, |m, x| m.max(x.abs())) * lattice.dt() / hbar > 1.0;
        Ok(Propagator {
            lattice,
            components: h.components(),
            steps: vec![step; lattice.nt() - 1],
            eigen: Some((e, v, hbar)),
            accuracy_warning,
        })
    }

    /// Wraps precomputed one-step maps; `steps[t]` maps slice `t` to `t+1`.
    pub fn from_steps(lattice: Lattice, components: usize, steps: Vec<CMatrix>) -> Result<Self> {
        if steps.len() != lattice.nt() - 1 {
            return Err(Error::DimensionMismatch { expected: lattice.nt() - 1, found: steps.len() });
        }
        let n = components * lattice.nx();
        if let Some(bad) = steps.iter().find(|s| s.nrows() != n || s.ncols() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.nrows() });
        }
        Ok(Propagator { lattice, components, steps, eigen: None, accuracy_warning: false })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn slice_dim(&self) -> usize {
        self.components * self.lattice.nx()
    }

    pub fn accuracy_warning(&self) -> bool {
        self.accuracy_warning
    }

    /// `U(t+1, t)`.
    pub fn step(&self, t: usize) -> &CMatrix {
        &self.steps[t]
    }

    fn check_range(&self, t0: usize, t1: usize) -> Result<()> {
        let nt = self.lattice.nt();
        if t1 < t0 || t1 >= nt {
            return Err(Error::TimeRange { t0, t1, nt });
        }
        Ok(())
    }

    /// The dense evolution operator `U(t1, t0)`, `t1 ≥ t0`.
    pub fn operator(&self, t1: usize, t0: usize) -> Result<CMatrix> {
        self.check_range(t0, t1)?;
        if let Some((e, v, hbar)) = &self.eigen {
            return Ok(exp_from_eigen(e, v, (t1 - t0) as f64 * self.lattice.dt() / hbar));
        }
        let mut u = linalg::identity(self.slice_dim());
        for s in &self.steps[t0..t1] {
            u = s * u;
        }
        Ok(u)
    }

    /// `U(t', t0)` for every `t' = t0..nt`, accumulated step by step.
    pub fn operators_from(&self, t0: usize) -> Result<Vec<CMatrix>> {
        self.check_range(t0, t0)?;
        if self.eigen.is_some() {
            return (t0..self.lattice.nt()).map(|t1| self.operator(t1, t0)).collect();
        }
        let mut out = Vec::with_capacity(self.lattice.nt() - t0);
        let mut u = linalg::identity(self.slice_dim());
        out.push(u.clone());
        for s in &self.steps[t0..] {
            u = s * u;
            out.push(u.clone());
        }
        Ok(out)
    }

    /// `U(t1, t0) ψ`, applied step by step.
    pub fn evolve(&self, psi: &CVector, t0: usize, t1: usize) -> Result<CVector> {
        self.check_range(t0, t1)?;
        if psi.len() != self.slice_dim() {
            return Err(Error::DimensionMismatch { expected: self.slice_dim(), found: psi.len() });
        }
        if let Some((e, v, hbar)) = &self.eigen {
            let tau = (t1 - t0) as f64 * self.lattice.dt() / hbar;
            let mut c = v.adjoint() * psi;
            for (ci, ei) in c.iter_mut().zip(e) {
                *ci *= C64::from_polar(1.0, -ei * tau);
            }
            return Ok(v * c);
        }
        let mut s = psi.clone();
        for step in &self.steps[t0..t1] {
            s = step * s;
        }
        Ok(s)
    }

    /// The whole spacetime field obtained by evolving `psi0` from slice 0.
    pub fn history(&self, psi0: &CVector) -> Result<Field> {
        let mut f = Field::zeros(self.lattice, self.components);
        let mut s = psi0.clone();
        f.set_slice(0, &s)?;
        for t in 0..self.lattice.nt() - 1 {
            s = self.evolve(&s, t, t + 1)?;
            f.set_slice(t + 1, &s)?;
        }
        Ok(f)
    }
}

/// `V diag(e^{−iE_a τ}) V†`.
fn exp_from_eigen(e: &[f64], v: &CMatrix, tau: f64) -> CMatrix {
    let d = CVector::from_iterator(e.len(), e.iter().map(|x| C64::from_polar(1.0, -x * tau)));
    let mut vd = v.clone();
    for (j, mut col) in vd.column_iter_mut().enumerate() {
        col *= d[j];
    }
    vd * v.adjoint()
}
