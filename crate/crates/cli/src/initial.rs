//! Initial-state presets.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rqm_core::lattice::slice_norm;
use rqm_core::linalg;
use rqm_core::matrixop::random_smooth_field;
use rqm_core::potential::parse_preset;
use rqm_core::waveeq::{dirac_hamiltonian, free_spinor, SchrodingerHamiltonian, SliceHamiltonian};
use rqm_core::{CVector, Lattice, PotentialField, C64};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Initial {
    /// Lattice mode `n`, wave number `2πn/L`.
    PlaneWave(i64),
    Gaussian { x0: f64, sigma: f64, k: f64 },
    /// The `a`-th eigenvector of the slice-0 Hamiltonian, in ascending order.
    Eigenstate(usize),
    /// A smooth random profile drawn from the scenario seed.
    RandomSmooth,
}

impl Initial {
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = || CliError::Config(format!("unknown preset `{spec}` for initial state"));
        let (name, args) = parse_preset(spec).map_err(|_| bad())?;
        let int = |v: f64| if v.fract() == 0.0 { Ok(v) } else { Err(bad()) };
        match (name.as_str(), args.as_slice()) {
            ("plane-wave", [n]) => Ok(Initial::PlaneWave(int(*n)? as i64)),
            ("gaussian", [x0, sigma, k]) if *sigma > 0.0 => Ok(Initial::Gaussian { x0: *x0, sigma: *sigma, k: *k }),
            ("eigenstate", [a]) if *a >= 0.0 => Ok(Initial::Eigenstate(int(*a)? as usize)),
            ("random-smooth", []) => Ok(Initial::RandomSmooth),
            _ => Err(bad()),
        }
    }

    /// Central wave number of the profile.
    pub fn wave_number(&self, lat: &Lattice) -> f64 {
        match *self {
            Initial::PlaneWave(n) => 2.0 * PI * n as f64 / lat.length(),
            Initial::Gaussian { k, .. } => k,
            _ => 0.0,
        }
    }

    /// Scalar profile on slice 0: `e^{ikx}` times the envelope.
    fn profile(&self, lat: &Lattice, seed: u64) -> Result<CVector> {
        let nx = lat.nx();
        let len = lat.length();
        Ok(match *self {
            Initial::PlaneWave(_) => {
                let k = self.wave_number(lat);
                CVector::from_iterator(nx, (0..nx).map(|x| C64::from_polar(1.0, k * lat.position(x))))
            }
            Initial::Gaussian { x0, sigma, k } => CVector::from_iterator(
                nx,
                (0..nx).map(|x| {
                    let pos = lat.position(x);
                    let d = (pos - x0 + 0.5 * len).rem_euclid(len) - 0.5 * len;
                    C64::from_polar((-0.5 * (d / sigma).powi(2)).exp(), k * pos)
                }),
            ),
            Initial::RandomSmooth => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let two = Lattice::new(2, nx, lat.dt(), lat.dx())?;
                random_smooth_field(two, 1, &mut rng).slice(0)
            }
            Initial::Eigenstate(_) => unreachable!("eigenstates are built from the Hamiltonian"),
        })
    }

    fn eigenvector(h: &rqm_core::CMatrix, a: usize) -> Result<CVector> {
        let (_, v) = linalg::hermitian_eigen(h);
        if a >= v.ncols() {
            return Err(CliError::Config(format!("eigenstate({a}) out of range, the slice has {} states", v.ncols())));
        }
        Ok(v.column(a).into_owned())
    }

    /// Normalized four-spinor slice state.
    pub fn dirac(&self, potential: &PotentialField, mass: f64, seed: u64) -> Result<CVector> {
        let lat = *potential.lattice();
        let v = match self {
            Initial::Eigenstate(a) => Self::eigenvector(&dirac_hamiltonian(potential, mass, 0)?, *a)?,
            _ => {
                let (_, spinor) = free_spinor(self.wave_number(&lat), mass, potential.units(), lat.dx(), true);
                let p = self.profile(&lat, seed)?;
                CVector::from_iterator(4 * lat.nx(), (0..4 * lat.nx()).map(|i| p[i / 4] * spinor[i % 4]))
            }
        };
        normalized(v, lat.dx())
    }

    /// Normalized scalar Schrödinger state.
    pub fn schrodinger(&self, h: &SchrodingerHamiltonian, seed: u64) -> Result<CVector> {
        let lat = *h.lattice();
        let v = match self {
            Initial::Eigenstate(a) => Self::eigenvector(&h.at(0), *a)?,
            _ => self.profile(&lat, seed)?,
        };
        normalized(v, lat.dx())
    }

    /// Klein-Gordon Cauchy data `(φ, ∂_0φ)` for a positive-frequency profile
    /// with the compact lattice dispersion `ω²/c² = (4/Δx²)sin²(kΔx/2) + μ²`.
    pub fn kg(&self, potential: &PotentialField, mass: f64, seed: u64) -> Result<(CVector, CVector, f64)> {
        let lat = *potential.lattice();
        if let Initial::Eigenstate(_) = self {
            return Err(CliError::Config("eigenstate initial states are not defined for Klein-Gordon".into()));
        }
        let units = potential.units();
        let mu = mass * units.c / units.hbar;
        let k = self.wave_number(&lat);
        let w_over_c = ((2.0 * (0.5 * k * lat.dx()).sin() / lat.dx()).powi(2) + mu * mu).sqrt();
        let phi = self.profile(&lat, seed)?;
        let chi = &phi * C64::new(0.0, -w_over_c);
        Ok((phi, chi, w_over_c * units.c))
    }
}

fn normalized(v: CVector, dx: f64) -> Result<CVector> {
    let n = slice_norm(&v, dx);
    if !(n > 0.0) {
        return Err(CliError::Config("initial state vanishes on the lattice".into()));
    }
    Ok(v / C64::new(n, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse() {
        assert_eq!(Initial::parse("plane-wave(2)").unwrap(), Initial::PlaneWave(2));
        assert_eq!(Initial::parse("eigenstate(3)").unwrap(), Initial::Eigenstate(3));
        assert!(Initial::parse("plane-wave(0.5)").is_err());
        assert!(Initial::parse("gaussian(1,0,1)").is_err());
        assert!(Initial::parse("square(1)").is_err());
    }

    #[test]
    fn gaussian_wraps_around_the_period() {
        let lat = Lattice::new(2, 20, 0.1, 0.5).unwrap();
        let g = Initial::Gaussian { x0: 0.0, sigma: 1.0, k: 0.0 }.profile(&lat, 0).unwrap();
        assert!((g[1].re - g[19].re).abs() < 1e-15);
    }
}
