//! The 1+1-D spacetime lattice and the complex fields that live on it.
//!
//! Sites are addressed as `(t, x)` with `t ∈ 0..nt`, `x ∈ 0..nx`. Space is
//! periodic. Time is open: centered differences are used on interior slices
//! and second-order one-sided differences on the first and last slice, so every
//! derivative on the lattice is second-order accurate.
//!
//! Slice states (the value of a field on one time slice) are flattened
//! x-major: component `c` at position `x` lives at `x * n + c`.

use crate::{CVector, Error, Result, C64};

/// A discretised spacetime with periodic space and open time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    nt: usize,
    nx: usize,
    dt: f64,
    dx: f64,
}

/// Lattice coordinate direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Time,
    Space,
}

impl Axis {
    /// Lattice axis of the spacetime index `mu`; `None` for the transverse
    /// directions 2 and 3, along which nothing varies in 1+1-D.
    pub fn from_mu(mu: usize) -> Option<Axis> {
        match mu {
            0 => Some(Axis::Time),
            1 => Some(Axis::Space),
            _ => None,
        }
    }
}

/// Up to three `(site index, weight)` pairs of a first-difference stencil.
#[derive(Debug, Clone, Copy)]
pub struct Stencil {
    points: [(usize, f64); 3],
    len: usize,
}

impl Stencil {
    fn two(a: (usize, f64), b: (usize, f64)) -> Self {
        Stencil { points: [a, b, (0, 0.0)], len: 2 }
    }

    fn three(a: (usize, f64), b: (usize, f64), c: (usize, f64)) -> Self {
        Stencil { points: [a, b, c], len: 3 }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.points[..self.len].iter().copied()
    }
}

impl Lattice {
    pub fn new(nt: usize, nx: usize, dt: f64, dx: f64) -> Result<Self> {
        if nt < 2 || nx < 2 {
            return Err(Error::InvalidLattice(format!(
                "need nt >= 2 and nx >= 2, got nt={nt}, nx={nx}"
            )));
        }
        if !(dt > 0.0 && dt.is_finite() && dx > 0.0 && dx.is_finite()) {
            return Err(Error::InvalidLattice(format!(
                "steps must be positive and finite, got dt={dt}, dx={dx}"
            )));
        }
        Ok(Lattice { nt, nx, dt, dx })
    }

    pub fn nt(&self) -> usize {
        self.nt
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Number of lattice sites `nt * nx`.
    pub fn sites(&self) -> usize {
        self.nt * self.nx
    }

    /// Spatial period `nx * dx`.
    pub fn length(&self) -> f64 {
        self.nx as f64 * self.dx
    }

    /// Time span covered by the slices, `(nt - 1) * dt`.
    pub fn duration(&self) -> f64 {
        (self.nt - 1) as f64 * self.dt
    }

    #[inline]
    pub fn index(&self, t: usize, x: usize) -> usize {
        t * self.nx + x
    }

    #[inline]
    pub fn site(&self, index: usize) -> (usize, usize) {
        (index / self.nx, index % self.nx)
    }

    pub fn time(&self, t: usize) -> f64 {
        t as f64 * self.dt
    }

    pub fn position(&self, x: usize) -> f64 {
        x as f64 * self.dx
    }

    /// Spatial index shifted by `d` with periodic wrap.
    #[inline]
    pub fn wrap(&self, x: usize, d: isize) -> usize {
        (x as isize + d).rem_euclid(self.nx as isize) as usize
    }

    /// Same lattice geometry with a different number of slices.
    pub fn with_nt(&self, nt: usize) -> Result<Self> {
        Lattice::new(nt, self.nx, self.dt, self.dx)
    }

    /// First-difference stencil along `axis` at `(t, x)`, in units of the
    /// lattice coordinate (`t` or `x`).
    pub fn stencil(&self, axis: Axis, t: usize, x: usize) -> Stencil {
        match axis {
            Axis::Space => {
                let h = 0.5 / self.dx;
                Stencil::two(
                    (self.index(t, self.wrap(x, -1)), -h),
                    (self.index(t, self.wrap(x, 1)), h),
                )
            }
            Axis::Time => {
                let nt = self.nt;
                if nt == 2 {
                    let h = 1.0 / self.dt;
                    return Stencil::two((self.index(0, x), -h), (self.index(1, x), h));
                }
                let h = 0.5 / self.dt;
                if t == 0 {
                    Stencil::three(
                        (self.index(0, x), -3.0 * h),
                        (self.index(1, x), 4.0 * h),
                        (self.index(2, x), -h),
                    )
                } else if t == nt - 1 {
                    Stencil::three(
                        (self.index(nt - 1, x), 3.0 * h),
                        (self.index(nt - 2, x), -4.0 * h),
                        (self.index(nt - 3, x), h),
                    )
                } else {
                    Stencil::two((self.index(t - 1, x), -h), (self.index(t + 1, x), h))
                }
            }
        }
    }

    pub(crate) fn check_same(&self, other: &Lattice) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::LatticeMismatch)
        }
    }
}

/// Applies the first-difference stencil along `axis` to per-site values.
pub fn difference<T>(lattice: &Lattice, values: &[T], axis: Axis) -> Vec<T>
where
    T: Clone + std::ops::Mul<C64, Output = T> + std::ops::Add<Output = T>,
{
    assert_eq!(values.len(), lattice.sites());
    (0..lattice.sites())
        .map(|i| {
            let (t, x) = lattice.site(i);
            let stencil = lattice.stencil(axis, t, x);
            let mut pts = stencil.iter();
            let (j0, w0) = pts.next().expect("stencil has at least two points");
            pts.fold(values[j0].clone() * C64::new(w0, 0.0), |acc, (j, w)| acc + values[j].clone() * C64::new(w, 0.0))
        })
        .collect()
}

/// A complex number at every lattice site.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    lattice: Lattice,
    values: Vec<C64>,
}

impl ScalarField {
    pub fn zeros(lattice: Lattice) -> Self {
        ScalarField { lattice, values: vec![C64::new(0.0, 0.0); lattice.sites()] }
    }

    pub fn constant(lattice: Lattice, value: C64) -> Self {
        ScalarField { lattice, values: vec![value; lattice.sites()] }
    }

    pub fn from_values(lattice: Lattice, values: Vec<C64>) -> Result<Self> {
        if values.len() != lattice.sites() {
            return Err(Error::DimensionMismatch { expected: lattice.sites(), found: values.len() });
        }
        Ok(ScalarField { lattice, values })
    }

    /// Samples `f(t_coordinate, x_coordinate)` at every site.
    pub fn from_fn(lattice: Lattice, f: impl Fn(f64, f64) -> C64) -> Self {
        let values = (0..lattice.sites())
            .map(|i| {
                let (t, x) = lattice.site(i);
                f(lattice.time(t), lattice.position(x))
            })
            .collect();
        ScalarField { lattice, values }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn at(&self, t: usize, x: usize) -> C64 {
        self.values[self.lattice.index(t, x)]
    }

    pub fn difference(&self, axis: Axis) -> ScalarField {
        ScalarField { lattice: self.lattice, values: difference(&self.lattice, &self.values, axis) }
    }

    pub fn scale(&self, s: C64) -> ScalarField {
        ScalarField { lattice: self.lattice, values: self.values.iter().map(|v| v * s).collect() }
    }

    pub fn add(&self, other: &ScalarField) -> Result<ScalarField> {
        self.lattice.check_same(&other.lattice)?;
        Ok(ScalarField {
            lattice: self.lattice,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &ScalarField) -> Result<ScalarField> {
        self.lattice.check_same(&other.lattice)?;
        Ok(ScalarField {
            lattice: self.lattice,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn mul(&self, other: &ScalarField) -> Result<ScalarField> {
        self.lattice.check_same(&other.lattice)?;
        Ok(ScalarField {
            lattice: self.lattice,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest modulus over slices `margin..nt-margin`.
    pub fn interior_max_abs(&self, margin: usize) -> f64 {
        let nx = self.lattice.nx();
        let nt = self.lattice.nt();
        if 2 * margin >= nt {
            return 0.0;
        }
        self.values[margin * nx..(nt - margin) * nx].iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// An `n`-component complex field, stored site-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    lattice: Lattice,
    n: usize,
    data: Vec<C64>,
}

impl Field {
    pub fn zeros(lattice: Lattice, n: usize) -> Self {
        Field { lattice, n, data: vec![C64::new(0.0, 0.0); lattice.sites() * n] }
    }

    pub fn from_data(lattice: Lattice, n: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != lattice.sites() * n {
            return Err(Error::DimensionMismatch { expected: lattice.sites() * n, found: data.len() });
        }
        Ok(Field { lattice, n, data })
    }

    /// Samples `f(t_coordinate, x_coordinate) -> [n values]` at every site.
    pub fn from_fn(lattice: Lattice, n: usize, f: impl Fn(f64, f64) -> Vec<C64>) -> Result<Self> {
        let mut data = Vec::with_capacity(lattice.sites() * n);
        for i in 0..lattice.sites() {
            let (t, x) = lattice.site(i);
            let v = f(lattice.time(t), lattice.position(x));
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: v.len() });
            }
            data.extend(v);
        }
        Ok(Field { lattice, n, data })
    }

    pub fn from_components(components: &[ScalarField]) -> Result<Self> {
        let first = components.first().ok_or(Error::DimensionMismatch { expected: 1, found: 0 })?;
        let lattice = *first.lattice();
        for c in components {
            lattice.check_same(c.lattice())?;
        }
        let n = components.len();
        let mut data = Vec::with_capacity(lattice.sites() * n);
        for i in 0..lattice.sites() {
            data.extend(components.iter().map(|c| c.values()[i]));
        }
        Ok(Field { lattice, n, data })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn components(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn component(&self, c: usize) -> ScalarField {
        ScalarField {
            lattice: self.lattice,
            values: self.data.iter().skip(c).step_by(self.n).copied().collect(),
        }
    }

    pub fn site_values(&self, t: usize, x: usize) -> &[C64] {
        let i = self.lattice.index(t, x) * self.n;
        &self.data[i..i + self.n]
    }

    pub fn site_vector(&self, t: usize, x: usize) -> CVector {
        CVector::from_column_slice(self.site_values(t, x))
    }

    pub fn set_site(&mut self, t: usize, x: usize, values: &[C64]) {
        let i = self.lattice.index(t, x) * self.n;
        self.data[i..i + self.n].copy_from_slice(values);
    }

    /// The state on slice `t`, flattened x-major.
    pub fn slice(&self, t: usize) -> CVector {
        let w = self.lattice.nx() * self.n;
        CVector::from_column_slice(&self.data[t * w..(t + 1) * w])
    }

    pub fn set_slice(&mut self, t: usize, state: &CVector) -> Result<()> {
        let w = self.lattice.nx() * self.n;
        if state.len() != w {
            return Err(Error::DimensionMismatch { expected: w, found: state.len() });
        }
        self.data[t * w..(t + 1) * w].copy_from_slice(state.as_slice());
        Ok(())
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.check_shape(other)?;
        Ok(Field {
            lattice: self.lattice,
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.check_shape(other)?;
        Ok(Field {
            lattice: self.lattice,
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, s: C64) -> Field {
        Field { lattice: self.lattice, n: self.n, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest modulus over slices `margin..nt-margin`.
    pub fn interior_max_abs(&self, margin: usize) -> f64 {
        let w = self.lattice.nx() * self.n;
        let nt = self.lattice.nt();
        if 2 * margin >= nt {
            return 0.0;
        }
        self.data[margin * w..(nt - margin) * w].iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub(crate) fn check_shape(&self, other: &Field) -> Result<()> {
        self.lattice.check_same(&other.lattice)?;
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }
}

/// Discrete L² norm of a slice state, `sqrt(Σ |ψ|² Δx)`.
pub fn slice_norm(state: &CVector, dx: f64) -> f64 {
    (state.norm_squared() * dx).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat() -> Lattice {
        Lattice::new(8, 16, 0.05, 0.2).unwrap()
    }

    #[test]
    fn rejects_degenerate_lattices() {
        assert!(Lattice::new(1, 8, 0.1, 0.1).is_err());
        assert!(Lattice::new(8, 1, 0.1, 0.1).is_err());
        assert!(Lattice::new(8, 8, 0.0, 0.1).is_err());
        assert!(Lattice::new(8, 8, 0.1, -1.0).is_err());
    }

    #[test]
    fn spatial_index_wraps() {
        let l = lat();
        assert_eq!(l.wrap(0, -1), 15);
        assert_eq!(l.wrap(15, 1), 0);
        assert_eq!(l.wrap(3, 32), 3);
    }

    #[test]
    fn differences_are_exact_on_quadratics() {
        // Second-order stencils reproduce the derivative of a quadratic in t
        // exactly, including the one-sided boundary rows.
        let l = lat();
        let f = ScalarField::from_fn(l, |t, _| C64::new(1.0 + 2.0 * t + 3.0 * t * t, 0.0));
        let d = f.difference(Axis::Time);
        for t in 0..l.nt() {
            let exact = 2.0 + 6.0 * l.time(t);
            assert!((d.at(t, 5).re - exact).abs() < 1e-11, "t={t}");
        }
    }

    #[test]
    fn spatial_difference_of_plane_wave_has_sine_symbol() {
        let l = lat();
        let k = 2.0 * std::f64::consts::PI * 3.0 / l.length();
        let f = ScalarField::from_fn(l, |_, x| C64::from_polar(1.0, k * x));
        let d = f.difference(Axis::Space);
        let symbol = C64::new(0.0, (k * l.dx()).sin() / l.dx());
        for x in 0..l.nx() {
            assert!((d.at(2, x) - symbol * f.at(2, x)).norm() < 1e-12);
        }
    }

    #[test]
    fn slices_round_trip() {
        let l = lat();
        let mut f = Field::zeros(l, 3);
        let s = CVector::from_fn(l.nx() * 3, |i, _| C64::new(i as f64, -(i as f64)));
        f.set_slice(4, &s).unwrap();
        assert_eq!(f.slice(4), s);
        assert_eq!(f.site_values(4, 2)[1], C64::new(7.0, -7.0));
        assert_eq!(f.component(1).at(4, 2), C64::new(7.0, -7.0));
        assert!(f.set_slice(0, &CVector::zeros(3)).is_err());
    }
}
