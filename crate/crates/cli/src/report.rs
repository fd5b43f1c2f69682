//! Artifacts of a run.
//!
//! Each scenario directory holds:
//!
//! | file               | columns                                        |
//! |--------------------|------------------------------------------------|
//! | `config.toml`      | the fully resolved scenario                    |
//! | `observables.csv`  | `method,step,time,quantity,value`              |
//! | `residuals.csv`    | `method,quantity,value`                        |
//! | `deviations.csv`   | `method,reference,max_deviation`               |
//! | `invariants.csv`   | `name,value,tolerance,pass`                    |
//! | `report.json`      | format version, configuration echo, timings    |
//! | `observables.svg`  | optional line chart of the observables         |
//!
//! The CSV files depend only on the scenario, so repeated runs produce
//! identical bytes. Timings live in `report.json` alone.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::run::{Observation, RunReport};

/// Version of the CSV column layout above.
pub const CSV_VERSION: u32 = 1;

fn write_csv<T: Serialize>(path: &Path, rows: &[T], header: &[&str]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JsonReport<'a> {
    csv_version: u32,
    all_pass: bool,
    scenario: &'a crate::config::Scenario,
    timings: BTreeMap<&'a str, f64>,
}

pub fn write_artifacts(report: &RunReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("config.toml"), report.scenario.to_toml())?;
    write_csv(&dir.join("observables.csv"), &report.observations, &["method", "step", "time", "quantity", "value"])?;
    write_csv(&dir.join("residuals.csv"), &report.residuals, &["method", "quantity", "value"])?;
    write_csv(&dir.join("deviations.csv"), &report.deviations, &["method", "reference", "max_deviation"])?;
    write_csv(&dir.join("invariants.csv"), &report.invariants, &["name", "value", "tolerance", "pass"])?;
    let json = JsonReport {
        csv_version: CSV_VERSION,
        all_pass: report.all_pass(),
        scenario: &report.scenario,
        timings: report.timings.iter().map(|(k, v)| (k.as_str(), *v)).collect(),
    };
    fs::write(dir.join("report.json"), serde_json::to_string_pretty(&json)?)?;
    if report.scenario.svg {
        fs::write(dir.join("observables.svg"), svg_chart(&report.observations))?;
    }
    Ok(())
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Line chart of every `(method, quantity)` series against time.
pub fn svg_chart(obs: &[Observation]) -> String {
    let (w, h, pad) = (640.0, 400.0, 50.0);
    let mut series: BTreeMap<(String, &str), Vec<(f64, f64)>> = BTreeMap::new();
    for o in obs {
        series.entry((o.method.clone(), o.quantity)).or_default().push((o.time, o.value));
    }
    let pts = || series.values().flatten();
    let (mut t0, mut t1, mut v0, mut v1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(t, v) in pts() {
        t0 = t0.min(t);
        t1 = t1.max(t);
        v0 = v0.min(v);
        v1 = v1.max(v);
    }
    if t1 <= t0 {
        t1 = t0 + 1.0;
    }
    if v1 - v0 < 1e-12 * v1.abs().max(1.0) {
        v0 -= 0.5;
        v1 += 0.5;
    }
    let sx = |t: f64| pad + (t - t0) / (t1 - t0) * (w - 2.0 * pad);
    let sy = |v: f64| h - pad - (v - v0) / (v1 - v0) * (h - 2.0 * pad);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{pad} {pad} V{} H{}" fill="none" stroke="black"/>"#,
        h - pad,
        w - pad
    );
    let _ = writeln!(s, r#"<text x="{pad}" y="{}" font-size="11">t = {t0:.4}</text>"#, h - pad + 16.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="11" text-anchor="end">t = {t1:.4}</text>"#, w - pad, h - pad + 16.0);
    let _ = writeln!(s, r#"<text x="4" y="{}" font-size="11">{v1:.6e}</text>"#, pad - 4.0);
    let _ = writeln!(s, r#"<text x="4" y="{}" font-size="11">{v0:.6e}</text>"#, h - pad + 30.0);
    for (i, ((method, quantity), p)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = p.iter().map(|&(t, v)| format!("{:.2},{:.2}", sx(t), sy(v))).collect();
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}"/>"#, path.join(" "));
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="11" fill="{color}">{method} {quantity}</text>"#,
            w - pad - 150.0,
            pad + 14.0 * (i as f64 + 1.0)
        );
    }
    s.push_str("</svg>\n");
    s
}
