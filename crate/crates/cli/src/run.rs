//! Executing one scenario.

use std::time::Instant;

use rqm_core::green::{born_iterate, dirac_green, kernel_budget, kg_green_tilde, kg_reconstruct, kg_scalar_green, schrodinger_green, GreenKernel};
use rqm_core::lattice::slice_norm;
use rqm_core::transport::FrameField;
use rqm_core::waveeq::{
    dirac_residual, evolve_dirac_bundle, evolve_dirac_field, kg5_residual, kg_gauge_charge, kg_march, kg_reduce_5, kg_residual,
    kg_two_component_propagator, kg_two_component_state, Propagator, Scheme, SchrodingerHamiltonian, SliceHamiltonian,
};
use rqm_core::{CVector, Field, Lattice, PotentialField, ScalarField, C64};
use serde::Serialize;

use crate::config::{Equation, Method, Scenario};
use crate::error::{CliError, Result};
use crate::initial::Initial;

/// One observable sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Observation {
    pub method: String,
    pub step: usize,
    pub time: f64,
    pub quantity: &'static str,
    pub value: f64,
}

/// A residual norm that should shrink under grid refinement.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct Residual {
    pub method: String,
    pub quantity: String,
    pub value: f64,
}

/// Max deviation of a method from the direct evolution, relative to the
/// largest direct value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Deviation {
    pub method: String,
    pub reference: String,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Invariant {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub scenario: Scenario,
    pub observations: Vec<Observation>,
    pub residuals: Vec<Residual>,
    pub deviations: Vec<Deviation>,
    pub invariants: Vec<Invariant>,
    /// Wall-clock seconds per phase; not part of the CSV artifacts.
    pub timings: Vec<(String, f64)>,
}

impl RunReport {
    pub fn all_pass(&self) -> bool {
        self.invariants.iter().all(|i| i.pass)
    }
}

struct Recorder {
    report: RunReport,
    clock: Instant,
}

impl Recorder {
    fn lap(&mut self, phase: &str) {
        let now = Instant::now();
        self.report.timings.push((phase.to_string(), (now - self.clock).as_secs_f64()));
        self.clock = now;
    }

    fn observe(&mut self, method: &str, lat: &Lattice, quantity: &'static str, values: impl IntoIterator<Item = f64>) {
        for (step, value) in values.into_iter().enumerate() {
            self.report.observations.push(Observation { method: method.into(), step, time: lat.time(step), quantity, value });
        }
    }

    fn residual(&mut self, method: &str, quantity: &str, value: f64) {
        self.report.residuals.push(Residual { method: method.into(), quantity: quantity.into(), value });
    }

    fn deviation(&mut self, method: &str, value: f64) {
        self.report.deviations.push(Deviation { method: method.into(), reference: "direct".into(), max_deviation: value });
    }

    fn invariant(&mut self, name: String, value: f64, tolerance: f64) {
        let pass = value.is_finite() && value <= tolerance;
        self.report.invariants.push(Invariant { name, value, tolerance, pass });
    }
}

/// Runs every method of `scenario`. Nothing is written here; see
/// [`crate::report::write_artifacts`].
pub fn run(scenario: &Scenario) -> Result<RunReport> {
    let methods = scenario.validate()?;
    let lat = scenario.lattice()?;
    let k = scenario.constants;
    let potential = PotentialField::preset(&scenario.potential, lat, k.charge, k.units())?;
    let initial = Initial::parse(&scenario.initial)?;
    let components = match scenario.equation {
        Equation::Dirac => 4,
        Equation::Kg2Comp => 2,
        _ => 1,
    };
    let frame = FrameField::preset(&scenario.frame, lat, components)?;
    let mut rec = Recorder {
        report: RunReport {
            scenario: scenario.clone(),
            observations: Vec::new(),
            residuals: Vec::new(),
            deviations: Vec::new(),
            invariants: Vec::new(),
            timings: Vec::new(),
        },
        clock: Instant::now(),
    };
    rec.lap("setup");
    match scenario.equation {
        Equation::Dirac => run_dirac(&mut rec, &methods, &potential, &frame, &initial)?,
        Equation::Schrodinger => run_schrodinger(&mut rec, &methods, &potential, &initial)?,
        Equation::Kg2Comp => run_kg_two(&mut rec, &methods, &potential, &initial)?,
        Equation::KgScalar | Equation::Kg5Comp => run_kg_scalar(&mut rec, &potential, &initial)?,
    }
    Ok(rec.report)
}

fn norms(slices: &[CVector], dx: f64) -> Vec<f64> {
    slices.iter().map(|s| slice_norm(s, dx)).collect()
}

fn max_slice_deviation(a: &[CVector], b: &[CVector]) -> f64 {
    let scale = b.iter().map(|s| s.camax()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    a.iter().zip(b).map(|(x, y)| (x - y).camax()).fold(0.0, f64::max) / scale
}

fn norm_drift(n: &[f64]) -> f64 {
    n.iter().map(|v| (v - n[0]).abs()).fold(0.0, f64::max) / n[0]
}

fn slices_of(field: &Field) -> Vec<CVector> {
    (0..field.lattice().nt()).map(|t| field.slice(t)).collect()
}

/// `ψ(t') = μ g(t', 0) W_0 ψ(0)` for every `t'`.
fn kernel_slices(g: &GreenKernel, psi0: &CVector) -> Result<Vec<CVector>> {
    let source = g.weight(0) * psi0 * g.measure();
    Ok(g.blocks_from(0)?.into_iter().map(|b| b * &source).collect())
}

fn run_dirac(rec: &mut Recorder, methods: &[Method], pot: &PotentialField, frame: &FrameField, initial: &Initial) -> Result<()> {
    let s = rec.report.scenario.clone();
    let lat = *pot.lattice();
    let m = s.constants.mass;
    let psi0 = initial.dirac(pot, m, s.seed)?;
    let field = evolve_dirac_field(&psi0, pot, m, Scheme::CrankNicolson)?;
    let direct = slices_of(&field);
    let n = norms(&direct, lat.dx());
    rec.observe("direct", &lat, "norm", n.clone());
    rec.invariant("direct.norm_drift".into(), norm_drift(&n), 1e-10);
    rec.residual("direct", "dirac_residual", dirac_residual(&field, pot, m)?.interior_max_abs(1) / field.max_abs());
    rec.lap("direct");
    for &method in methods {
        let label = method.label();
        let slices = match method {
            Method::Direct => continue,
            Method::Kernel => kernel_slices(&dirac_green(pot, m, Scheme::CrankNicolson)?, &psi0)?,
            Method::Bundle => {
                let mut state = frame.to_bundle_slice(0, &psi0)?;
                let mut out = vec![frame.from_bundle_slice(0, &state)?];
                for t in 0..lat.nt() - 1 {
                    state = evolve_dirac_bundle(&state, frame, pot, m, t, t + 1, Scheme::CrankNicolson)?.state;
                    out.push(frame.from_bundle_slice(t + 1, &state)?);
                }
                out
            }
            Method::Born(iterations) => {
                let free = PotentialField::free(lat, s.constants.charge, s.constants.units());
                let g0 = dirac_green(&free, m, Scheme::CrankNicolson)?;
                let out = born_iterate(&g0, pot, iterations, kernel_budget())?;
                rec.invariant(format!("{label}.updates_decrease"), if out.diverging { 1.0 } else { 0.0 }, 0.0);
                rec.residual(&label, "born_equation_residual", *out.residuals.last().unwrap_or(&0.0));
                kernel_slices(&out.kernel, &psi0)?
            }
        };
        let dev = max_slice_deviation(&slices, &direct);
        rec.deviation(&label, dev);
        if !matches!(method, Method::Born(_)) {
            rec.invariant(format!("{label}.vs_direct"), dev, 1e-10);
        }
        rec.observe(&label, &lat, "norm", norms(&slices, lat.dx()));
        rec.lap(&label);
    }
    Ok(())
}

fn run_schrodinger(rec: &mut Recorder, methods: &[Method], pot: &PotentialField, initial: &Initial) -> Result<()> {
    let s = rec.report.scenario.clone();
    let lat = *pot.lattice();
    if !(s.constants.mass > 0.0) {
        return Err(CliError::Config("the Schrödinger equation needs a positive mass".into()));
    }
    let h = SchrodingerHamiltonian::new(pot.clone(), s.constants.mass);
    let psi0 = initial.schrodinger(&h, s.seed)?;
    let scheme = if h.is_static() { Scheme::ExactExponential } else { Scheme::CrankNicolson };
    let p = Propagator::new(&h, scheme)?;
    let field = p.history(&psi0)?;
    let direct = slices_of(&field);
    let n = norms(&direct, lat.dx());
    rec.observe("direct", &lat, "norm", n.clone());
    rec.invariant("direct.norm_drift".into(), norm_drift(&n), 1e-10);
    // iħ ∂_t ψ − Hψ with centered time differences on interior slices
    let ih = C64::new(0.0, h.hbar());
    let mut worst: f64 = 0.0;
    for t in 1..lat.nt().saturating_sub(1) {
        let dpsi = (&direct[t + 1] - &direct[t - 1]) * C64::new(0.5 / lat.dt(), 0.0);
        worst = worst.max((dpsi * ih - h.at(t) * &direct[t]).camax());
    }
    let scale = direct.iter().map(|v| v.camax()).fold(0.0, f64::max);
    rec.residual("direct", "schrodinger_residual", worst / scale);
    rec.lap("direct");
    if methods.contains(&Method::Kernel) {
        let slices = kernel_slices(&schrodinger_green(&h)?, &psi0)?;
        let dev = max_slice_deviation(&slices, &direct);
        rec.deviation("kernel", dev);
        rec.invariant("kernel.vs_direct".into(), dev, 1e-10);
        rec.observe("kernel", &lat, "norm", norms(&slices, lat.dx()));
        rec.lap("kernel");
    }
    Ok(())
}

fn conserves_gauge_charge(pot: &PotentialField) -> bool {
    let lat = pot.lattice();
    (0..lat.nt()).all(|t| {
        (0..lat.nx()).all(|x| pot.a(0, t, x) == pot.a(0, 0, x) && pot.a(1, t, x) == pot.a(1, t, 0))
    })
}

fn run_kg_two(rec: &mut Recorder, methods: &[Method], pot: &PotentialField, initial: &Initial) -> Result<()> {
    let s = rec.report.scenario.clone();
    let lat = *pot.lattice();
    let m = s.constants.mass;
    let (phi, chi, _) = initial.kg(pot, m, s.seed)?;
    let s0 = kg_two_component_state(&phi, &chi)?;
    let field = kg_two_component_propagator(pot, m)?.history(&s0)?;
    let direct = slices_of(&field);
    let charges: Vec<f64> = direct.iter().enumerate().map(|(t, v)| kg_gauge_charge(v, pot, t)).collect();
    rec.observe("direct", &lat, "charge", charges.clone());
    // a nonuniform A1 or a time-dependent A0 leaves an O(dx^2) drift
    if conserves_gauge_charge(pot) {
        rec.invariant("direct.charge_drift".into(), norm_drift(&charges.iter().map(|q| q.abs()).collect::<Vec<_>>()), 1e-6);
    }
    let phi_field = field.component(0);
    if lat.nt() >= 5 {
        rec.residual("direct", "kg_residual", kg_residual(&phi_field, pot, m)?.interior_max_abs(2) / phi_field.max_abs());
    }
    rec.lap("direct");
    if methods.contains(&Method::Kernel) {
        let tilde = kg_green_tilde(pot, m)?;
        let slices = kernel_slices(&tilde, &s0)?;
        let dev = max_slice_deviation(&slices, &direct);
        rec.deviation("kernel", dev);
        rec.invariant("kernel.vs_direct".into(), dev, 1e-10);
        rec.observe("kernel", &lat, "charge", slices.iter().enumerate().map(|(t, v)| kg_gauge_charge(v, pot, t)).collect::<Vec<_>>());
        // φ on the last slice rebuilt from Cauchy data on slice 2 through the
        // scalar kernel
        if lat.nt() >= 5 {
            let (t, tp) = (2, lat.nt() - 1);
            let data = &direct[t];
            let (p, c) = rqm_core::waveeq::split_two_component(data);
            let recon = kg_reconstruct(&kg_scalar_green(&tilde)?, &p, &c, pot, t, tp)?;
            let (target, _) = rqm_core::waveeq::split_two_component(&direct[tp]);
            rec.residual("kernel", "reconstruction_error", (recon - &target).camax() / target.camax().max(f64::MIN_POSITIVE));
        }
        rec.lap("kernel");
    }
    Ok(())
}

fn run_kg_scalar(rec: &mut Recorder, pot: &PotentialField, initial: &Initial) -> Result<()> {
    let s = rec.report.scenario.clone();
    let lat = *pot.lattice();
    let m = s.constants.mass;
    if lat.nt() < 5 {
        return Err(CliError::Config("scalar Klein-Gordon runs need nt >= 5".into()));
    }
    let (phi, _, omega) = initial.kg(pot, m, s.seed)?;
    let nx = lat.nx();
    let seed = ScalarField::from_values(
        lat,
        (0..lat.sites()).map(|i| {
            let (t, x) = lat.site(i);
            phi[x] * C64::from_polar(1.0, -omega * lat.time(t))
        })
        .collect(),
    )?;
    let field = kg_march(&seed, pot, m)?;
    let scale = field.max_abs();
    let per_slice: Vec<f64> = (0..lat.nt())
        .map(|t| field.values()[t * nx..(t + 1) * nx].iter().map(|v| v.norm()).fold(0.0, f64::max))
        .collect();
    rec.observe("direct", &lat, "max_abs", per_slice);
    let scalar = kg_residual(&field, pot, m)?.interior_max_abs(2) / scale;
    rec.residual("direct", "kg_residual", scalar);
    rec.invariant("direct.kg_residual".into(), scalar, 1e-9);
    if s.equation == Equation::Kg5Comp {
        let five = kg5_residual(&kg_reduce_5(&field, pot, m)?, pot, m)?.interior_max_abs(2) / scale;
        rec.residual("direct", "kg5_residual", five);
        rec.invariant("direct.kg5_residual".into(), five, 1e-9);
    }
    rec.lap("direct");
    Ok(())
}
