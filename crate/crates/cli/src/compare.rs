//! Convergence tables across runs of the same scenario family.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::Scenario;
use crate::error::{CliError, Result};
use crate::run::Residual;

/// A report read back from its directory.
#[derive(Debug, Clone)]
pub struct StoredReport {
    pub dir: PathBuf,
    pub scenario: Scenario,
    pub residuals: Vec<Residual>,
}

impl StoredReport {
    pub fn load(dir: &Path) -> Result<Self> {
        let scenario = Scenario::load(&dir.join("config.toml"))?;
        let mut rd = csv::Reader::from_path(dir.join("residuals.csv"))
            .map_err(|e| CliError::Config(format!("{} is not a run directory: {e}", dir.display())))?;
        let residuals = rd.deserialize().collect::<std::result::Result<Vec<Residual>, _>>()?;
        Ok(StoredReport { dir: dir.to_path_buf(), scenario, residuals })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderRow {
    pub method: String,
    pub quantity: String,
    pub dx_coarse: f64,
    pub dx_fine: f64,
    pub value_coarse: f64,
    pub value_fine: f64,
    pub deviation: f64,
    /// `log(v_coarse / v_fine) / log(dx_coarse / dx_fine)`, which is the
    /// log₂ ratio under halving; absent when the grids coincide.
    pub order: Option<f64>,
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs())
}

fn same_family(a: &Scenario, b: &Scenario) -> bool {
    let (la, lb) = (a.lattice, b.lattice);
    a.equation == b.equation
        && a.potential == b.potential
        && a.initial == b.initial
        && a.frame == b.frame
        && a.constants == b.constants
        && close(la.nx as f64 * la.dx, lb.nx as f64 * lb.dx)
        && close((la.nt - 1) as f64 * la.dt, (lb.nt - 1) as f64 * lb.dt)
}

/// Orders consecutive reports from coarse to fine and estimates the
/// convergence order of every residual they share.
pub fn compare(reports: &[StoredReport]) -> Result<Vec<OrderRow>> {
    let first = reports.first().ok_or_else(|| CliError::Config("compare needs at least one report".into()))?;
    for r in &reports[1..] {
        if !same_family(&first.scenario, &r.scenario) {
            return Err(CliError::Config(format!(
                "{} and {} are not runs of the same scenario family",
                first.dir.display(),
                r.dir.display()
            )));
        }
    }
    let mut sorted: Vec<&StoredReport> = reports.iter().collect();
    sorted.sort_by(|a, b| b.scenario.lattice.dx.total_cmp(&a.scenario.lattice.dx));
    let mut rows = Vec::new();
    for pair in sorted.windows(2) {
        let (c, f) = (pair[0], pair[1]);
        for rc in &c.residuals {
            let Some(rf) = f.residuals.iter().find(|r| r.method == rc.method && r.quantity == rc.quantity) else {
                continue;
            };
            let (dc, df) = (c.scenario.lattice.dx, f.scenario.lattice.dx);
            let order = (!close(dc, df)).then(|| (rc.value / rf.value).ln() / (dc / df).ln());
            rows.push(OrderRow {
                method: rc.method.clone(),
                quantity: rc.quantity.clone(),
                dx_coarse: dc,
                dx_fine: df,
                value_coarse: rc.value,
                value_fine: rf.value,
                deviation: (rc.value - rf.value).abs(),
                order,
            });
        }
    }
    Ok(rows)
}

pub fn write_rows<W: std::io::Write>(rows: &[OrderRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    if rows.is_empty() {
        out.write_record(["method", "quantity", "dx_coarse", "dx_fine", "value_coarse", "value_fine", "deviation", "order"])?;
    }
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}
