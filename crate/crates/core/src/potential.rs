//! Physical constants and external electromagnetic 4-potentials.

use std::f64::consts::PI;

use crate::lattice::Lattice;
use crate::{Error, Result};

/// `ħ` and `c`; natural units by default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units {
    pub hbar: f64,
    pub c: f64,
}

impl Default for Units {
    fn default() -> Self {
        Units { hbar: 1.0, c: 1.0 }
    }
}

/// Real covariant components `A_μ(t, x)` sampled on the lattice, with the
/// charge of the particle that couples to them.
///
/// In 1+1-D only `A_0` and `A_1` are stored; `A_2 = A_3 = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialField {
    lattice: Lattice,
    a0: Vec<f64>,
    a1: Vec<f64>,
    charge: f64,
    units: Units,
}

impl PotentialField {
    pub fn free(lattice: Lattice, charge: f64, units: Units) -> Self {
        PotentialField {
            lattice,
            a0: vec![0.0; lattice.sites()],
            a1: vec![0.0; lattice.sites()],
            charge,
            units,
        }
    }

    /// Samples `f(t, x) -> (A_0, A_1)` at every site.
    pub fn from_fn(lattice: Lattice, charge: f64, units: Units, f: impl Fn(f64, f64) -> (f64, f64)) -> Self {
        let (a0, a1) = (0..lattice.sites())
            .map(|i| {
                let (t, x) = lattice.site(i);
                f(lattice.time(t), lattice.position(x))
            })
            .unzip();
        PotentialField { lattice, a0, a1, charge, units }
    }

    /// Resolves a preset name:
    ///
    /// * `free`
    /// * `constant(a0)`: uniform `A_0 = a0`
    /// * `well(v0)`: static `A_0 = v0·cos(2πx/L)`
    /// * `pulse(a1, omega)`: uniform, time-dependent `A_1 = a1·sin(ωt)`
    /// * `wave(amp, omega)`: `A_0 = amp·cos(2πx/L − ωt)`, `A_1 = ½amp·sin(2πx/L)`
    pub fn preset(spec: &str, lattice: Lattice, charge: f64, units: Units) -> Result<Self> {
        let (name, args) = parse_preset(spec)?;
        let len = lattice.length();
        let k = 2.0 * PI / len;
        let arity = |n: usize| -> Result<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(Error::UnknownPreset(spec.to_string()))
            }
        };
        Ok(match name.as_str() {
            "free" => {
                arity(0)?;
                Self::free(lattice, charge, units)
            }
            "constant" => {
                arity(1)?;
                let a = args[0];
                Self::from_fn(lattice, charge, units, move |_, _| (a, 0.0))
            }
            "well" => {
                arity(1)?;
                let v0 = args[0];
                Self::from_fn(lattice, charge, units, move |_, x| (v0 * (k * x).cos(), 0.0))
            }
            "pulse" => {
                arity(2)?;
                let (a1, w) = (args[0], args[1]);
                Self::from_fn(lattice, charge, units, move |t, _| (0.0, a1 * (w * t).sin()))
            }
            "wave" => {
                arity(2)?;
                let (amp, w) = (args[0], args[1]);
                Self::from_fn(lattice, charge, units, move |t, x| {
                    (amp * (k * x - w * t).cos(), 0.5 * amp * (k * x).sin())
                })
            }
            _ => return Err(Error::UnknownPreset(spec.to_string())),
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn charge(&self) -> f64 {
        self.charge
    }

    pub fn units(&self) -> Units {
        self.units
    }

    pub fn with_charge(&self, charge: f64) -> Self {
        PotentialField { charge, ..self.clone() }
    }

    /// `A_μ` at site `(t, x)`; zero for `μ = 2, 3`.
    pub fn a(&self, mu: usize, t: usize, x: usize) -> f64 {
        let i = self.lattice.index(t, x);
        match mu {
            0 => self.a0[i],
            1 => self.a1[i],
            _ => 0.0,
        }
    }

    /// Sampled `A_μ` as a per-site vector; zeros for `μ = 2, 3`.
    pub fn component(&self, mu: usize) -> Vec<f64> {
        match mu {
            0 => self.a0.clone(),
            1 => self.a1.clone(),
            _ => vec![0.0; self.lattice.sites()],
        }
    }

    /// Coupling `q = e / (ħc)` in `D_μ = ∂_μ + i q A_μ`.
    pub fn coupling(&self) -> f64 {
        self.charge / (self.units.hbar * self.units.c)
    }

    /// True when `A_μ` does not vary between slices.
    pub fn is_static(&self) -> bool {
        let nx = self.lattice.nx();
        (1..self.lattice.nt()).all(|t| {
            self.a0[t * nx..(t + 1) * nx] == self.a0[..nx] && self.a1[t * nx..(t + 1) * nx] == self.a1[..nx]
        })
    }

    /// Largest `|A_μ|` over the lattice.
    pub fn max_abs(&self) -> f64 {
        self.a0.iter().chain(&self.a1).fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Copy with `A_μ → A_μ + ∂_μχ`, where the gradient `(∂_0χ, ∂_1χ)` is given
    /// in closed form by `grad(t, x)`.
    pub fn gauge_shifted(&self, grad: impl Fn(f64, f64) -> (f64, f64)) -> Self {
        let mut out = self.clone();
        for i in 0..self.lattice.sites() {
            let (t, x) = self.lattice.site(i);
            let (g0, g1) = grad(self.lattice.time(t), self.lattice.position(x));
            out.a0[i] += g0;
            out.a1[i] += g1;
        }
        out
    }
}

/// Splits `name(a, b, ...)` into the name and its numeric arguments.
pub fn parse_preset(spec: &str) -> Result<(String, Vec<f64>)> {
    let spec = spec.trim();
    let bad = || Error::UnknownPreset(spec.to_string());
    match spec.find('(') {
        None => {
            if spec.is_empty() || spec.contains(')') {
                return Err(bad());
            }
            Ok((spec.to_string(), Vec::new()))
        }
        Some(open) => {
            let inner = spec[open + 1..].strip_suffix(')').ok_or_else(bad)?;
            let name = spec[..open].trim().to_string();
            if name.is_empty() {
                return Err(bad());
            }
            let args = if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?
            };
            Ok((name, args))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_strings_parse() {
        assert_eq!(parse_preset("free").unwrap(), ("free".into(), vec![]));
        assert_eq!(parse_preset("phase(0.5)").unwrap(), ("phase".into(), vec![0.5]));
        assert_eq!(parse_preset(" pulse( 1, 2.5 ) ").unwrap(), ("pulse".into(), vec![1.0, 2.5]));
        assert!(parse_preset("phase(0.5").is_err());
        assert!(parse_preset("phase(x)").is_err());
        assert!(parse_preset("").is_err());
    }

    #[test]
    fn potential_presets() {
        let lat = Lattice::new(4, 8, 0.1, 0.25).unwrap();
        let u = Units::default();
        let p = PotentialField::preset("constant(0.3)", lat, 1.0, u).unwrap();
        assert_eq!(p.a(0, 2, 3), 0.3);
        assert!(p.is_static());
        let p = PotentialField::preset("pulse(0.2, 3.0)", lat, 1.0, u).unwrap();
        assert!(!p.is_static());
        assert!((p.a(1, 1, 0) - 0.2 * (0.3_f64).sin()).abs() < 1e-15);
        assert!(matches!(
            PotentialField::preset("laser(1)", lat, 1.0, u),
            Err(Error::UnknownPreset(_))
        ));
        assert!(PotentialField::preset("well", lat, 1.0, u).is_err());
    }
}
