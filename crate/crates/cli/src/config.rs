//! Scenario files.
//!
//! A scenario is one TOML document. Every key has a default so a minimal file
//! only names the equation; the resolved values are written next to the
//! results as `config.toml`.
//!
//! ```toml
//! name = "free-dirac"
//! equation = "dirac"          # dirac | schrodinger | kg-scalar | kg-2comp | kg-5comp
//! seed = 1
//! potential = "free"          # free | constant(a0) | well(v0) | pulse(a1,w) | wave(amp,w)
//! frame = "identity"          # identity | phase(k) | rotation(k) | shear(s) | random-smooth(n) | random-unitary(n)
//! initial = "gaussian(3.2,0.6,1.0)"  # plane-wave(n) | gaussian(x0,sigma,k) | eigenstate(a) | random-smooth
//! methods = ["direct", "kernel"]     # direct | kernel | born(n) | bundle
//! svg = false
//!
//! [lattice]
//! nt = 64
//! nx = 32
//! dt = 0.05
//! dx = 0.2
//!
//! [constants]
//! hbar = 1.0
//! c = 1.0
//! mass = 1.0
//! charge = 1.0
//! ```

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rqm_core::potential::parse_preset;
use rqm_core::{Lattice, Units};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Equation {
    Dirac,
    Schrodinger,
    KgScalar,
    #[serde(rename = "kg-2comp")]
    Kg2Comp,
    #[serde(rename = "kg-5comp")]
    Kg5Comp,
}

impl Equation {
    pub fn name(self) -> &'static str {
        match self {
            Equation::Dirac => "dirac",
            Equation::Schrodinger => "schrodinger",
            Equation::KgScalar => "kg-scalar",
            Equation::Kg2Comp => "kg-2comp",
            Equation::Kg5Comp => "kg-5comp",
        }
    }

    fn allows(self, m: Method) -> bool {
        match self {
            Equation::Dirac => true,
            Equation::Schrodinger | Equation::Kg2Comp => matches!(m, Method::Direct | Method::Kernel),
            Equation::KgScalar | Equation::Kg5Comp => m == Method::Direct,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Direct,
    Kernel,
    Born(usize),
    Bundle,
}

impl Method {
    pub fn label(self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Direct => write!(f, "direct"),
            Method::Kernel => write!(f, "kernel"),
            Method::Born(n) => write!(f, "born({n})"),
            Method::Bundle => write!(f, "bundle"),
        }
    }
}

impl FromStr for Method {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || CliError::Config(format!("unknown preset `{s}` for method"));
        let (name, args) = parse_preset(s).map_err(|_| bad())?;
        match (name.as_str(), args.as_slice()) {
            ("direct", []) => Ok(Method::Direct),
            ("kernel", []) => Ok(Method::Kernel),
            ("bundle", []) => Ok(Method::Bundle),
            ("born", [n]) if *n >= 1.0 && n.fract() == 0.0 => Ok(Method::Born(*n as usize)),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LatticeSpec {
    pub nt: usize,
    pub nx: usize,
    pub dt: f64,
    pub dx: f64,
}

impl Default for LatticeSpec {
    fn default() -> Self {
        LatticeSpec { nt: 64, nx: 32, dt: 0.05, dx: 0.2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Constants {
    pub hbar: f64,
    pub c: f64,
    pub mass: f64,
    pub charge: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants { hbar: 1.0, c: 1.0, mass: 1.0, charge: 1.0 }
    }
}

impl Constants {
    pub fn units(&self) -> Units {
        Units { hbar: self.hbar, c: self.c }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Scenario {
    pub name: String,
    pub equation: Equation,
    pub seed: u64,
    pub potential: String,
    pub frame: String,
    pub initial: String,
    pub methods: Vec<String>,
    pub svg: bool,
    pub lattice: LatticeSpec,
    pub constants: Constants,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            name: "scenario".into(),
            equation: Equation::Dirac,
            seed: 1,
            potential: "free".into(),
            frame: "identity".into(),
            initial: "gaussian(3.2,0.6,1.0)".into(),
            methods: vec!["direct".into()],
            svg: false,
            lattice: LatticeSpec::default(),
            constants: Constants::default(),
        }
    }
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut s: Scenario = toml::from_str(&text).map_err(|source| CliError::Parse { path: path.display().to_string(), source })?;
        if !text.lines().any(|l| l.trim_start().starts_with("name")) {
            if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                s.name = stem.to_string();
            }
        }
        Ok(s)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|source| CliError::Parse { path: "<inline>".into(), source })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn lattice(&self) -> Result<Lattice> {
        let l = self.lattice;
        Ok(Lattice::new(l.nt, l.nx, l.dt, l.dx)?)
    }

    /// Checks everything that can be checked without running: lattice shape,
    /// constants, method names and their fit with the equation.
    pub fn validate(&self) -> Result<Vec<Method>> {
        let l = self.lattice;
        if l.nt < 2 || l.nx == 0 || !(l.dt > 0.0) || !(l.dx > 0.0) {
            return Err(CliError::Config(format!("lattice needs nt >= 2, nx >= 1 and positive steps, got {l:?}")));
        }
        let k = self.constants;
        if !(k.hbar > 0.0) || !(k.c > 0.0) || !k.mass.is_finite() || !k.charge.is_finite() {
            return Err(CliError::Config("constants need positive hbar and c and finite mass and charge".into()));
        }
        if self.methods.is_empty() {
            return Err(CliError::Config("at least one method is required".into()));
        }
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(CliError::Config(format!("scenario name `{}` cannot be used as a directory name", self.name)));
        }
        let methods: Vec<Method> = self.methods.iter().map(|m| m.parse()).collect::<Result<_>>()?;
        for m in &methods {
            if !self.equation.allows(*m) {
                return Err(CliError::Config(format!("method {m} is not available for {}", self.equation.name())));
            }
        }
        if methods.iter().any(|m| *m != Method::Direct) && !methods.contains(&Method::Direct) {
            return Err(CliError::Config("methods other than direct are compared against direct, so direct must be listed".into()));
        }
        Ok(methods)
    }
}
