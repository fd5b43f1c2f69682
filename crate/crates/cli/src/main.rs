use std::collections::HashSet;
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use rqm_cli::compare::{compare, write_rows, StoredReport};
use rqm_cli::config::{Equation, Method, Scenario};
use rqm_cli::report::write_artifacts;
use rqm_cli::{selftest, CliError, Result};
use rqm_core::green::{
    born_iterate, dirac_green, kernel_budget, kg_green_tilde, kg_scalar_green, schrodinger_green, KernelDump, BUDGET_ENV,
};
use rqm_core::waveeq::{Scheme, SchrodingerHamiltonian};
use rqm_core::PotentialField;

#[derive(Parser)]
#[command(name = "rqm", version, about = "Lattice Dirac and Klein-Gordon scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run scenarios; each writes its artifacts to <out-dir>/<name>/
    Run {
        #[arg(required = true)]
        configs: Vec<PathBuf>,
        #[arg(long, default_value = "runs")]
        out_dir: PathBuf,
    },
    /// Convergence orders between run directories of one scenario family
    Compare {
        reports: Vec<PathBuf>,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance suite
    Selftest {
        /// Run only these criteria
        #[arg(long)]
        only: Vec<u8>,
    },
    /// Write the retarded kernel of a scenario as a binary dump
    #[command(after_help = format!("The budget for full spacetime kernels is read from {BUDGET_ENV}."))]
    DumpKernel {
        config: PathBuf,
        out: PathBuf,
        /// Source slices to export (all later slices are written for each)
        #[arg(long, default_values_t = [0usize])]
        source: Vec<usize>,
    },
}

fn run(configs: &[PathBuf], out_dir: &PathBuf) -> Result<bool> {
    let scenarios = configs.iter().map(|p| Scenario::load(p)).collect::<Result<Vec<_>>>()?;
    let mut names = HashSet::new();
    for s in &scenarios {
        s.validate()?;
        if !names.insert(s.name.clone()) {
            return Err(CliError::Config(format!("two scenarios are named `{}`", s.name)));
        }
    }
    let results: Vec<Result<bool>> = scenarios
        .par_iter()
        .map(|s| {
            let report = rqm_cli::run::run(s)?;
            write_artifacts(&report, &out_dir.join(&s.name))?;
            for inv in report.invariants.iter().filter(|i| !i.pass) {
                eprintln!("{}: invariant {} = {:.3e} exceeds {:.1e}", s.name, inv.name, inv.value, inv.tolerance);
            }
            Ok(report.all_pass())
        })
        .collect();
    let mut ok = true;
    let mut first_err = None;
    for (s, r) in scenarios.iter().zip(results) {
        match r {
            Ok(pass) => {
                println!("{}: {}", s.name, if pass { "ok" } else { "invariant violation" });
                ok &= pass;
            }
            Err(e) => {
                eprintln!("{}: {e}", s.name);
                first_err.get_or_insert(e);
            }
        }
    }
    match first_err {
        Some(e) => Err(e),
        None => Ok(ok),
    }
}

fn dump_kernel(config: &PathBuf, out: &PathBuf, sources: &[usize]) -> Result<()> {
    let s = Scenario::load(config)?;
    let methods = s.validate()?;
    let lat = s.lattice()?;
    let k = s.constants;
    let pot = PotentialField::preset(&s.potential, lat, k.charge, k.units())?;
    let kernel = match s.equation {
        Equation::Dirac => {
            let born = methods.iter().find_map(|m| if let Method::Born(n) = m { Some(*n) } else { None });
            match born {
                Some(n) => {
                    let g0 = dirac_green(&PotentialField::free(lat, k.charge, k.units()), k.mass, Scheme::CrankNicolson)?;
                    born_iterate(&g0, &pot, n, kernel_budget())?.kernel
                }
                None => dirac_green(&pot, k.mass, Scheme::CrankNicolson)?,
            }
        }
        Equation::Schrodinger => schrodinger_green(&SchrodingerHamiltonian::new(pot, k.mass))?,
        Equation::Kg2Comp => kg_green_tilde(&pot, k.mass)?,
        Equation::KgScalar => kg_scalar_green(&kg_green_tilde(&pot, k.mass)?)?,
        Equation::Kg5Comp => return Err(CliError::Config("no kernel is defined for the 5-component form".into())),
    };
    if let Some(t) = sources.iter().find(|&&t| t >= lat.nt()) {
        return Err(CliError::Config(format!("source slice {t} is outside nt = {}", lat.nt())));
    }
    let dump = KernelDump::from_kernel(&kernel, sources)?;
    let mut w = BufWriter::new(File::create(out)?);
    dump.write_to(&mut w)?;
    std::io::Write::flush(&mut w)?;
    println!("wrote {} blocks of {} kernel to {}", dump.blocks.len(), kernel.family().name(), out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { configs, out_dir } => run(&configs, &out_dir),
        Command::Compare { reports, out } => (|| {
            let loaded = reports.iter().map(|d| StoredReport::load(d)).collect::<Result<Vec<_>>>()?;
            let rows = compare(&loaded)?;
            match out {
                Some(p) => write_rows(&rows, File::create(p)?)?,
                None => write_rows(&rows, std::io::stdout().lock())?,
            }
            Ok(true)
        })(),
        Command::Selftest { only } => {
            let mut ok = true;
            for c in selftest::CRITERIA.iter().filter(|c| only.is_empty() || only.contains(&c.id)) {
                let outcome = c.run();
                println!("{}", outcome.line());
                ok &= outcome.pass;
            }
            Ok(ok)
        }
        Command::DumpKernel { config, out, source } => dump_kernel(&config, &out, &source).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
