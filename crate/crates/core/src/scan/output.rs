//! CSV and JSON rendering of scan results.

use serde::Serialize;

use super::{CurveOutcome, ScanReport};
use crate::media::PermittivityModel;

pub const CSV_VERSION: u32 = 1;
pub const COLUMNS: [&str; 8] =
    ["sweep_param", "sweep_value", "energy_per_length", "est_error", "n_cutoff", "m_cutoff", "quad_nodes", "converged"];

fn sci(v: f64, precision: usize) -> String {
    if v.is_finite() { format!("{v:.precision$e}") } else { "nan".to_string() }
}

fn model(m: &PermittivityModel) -> String {
    match m {
        PermittivityModel::Constant(v) => format!("{v}"),
        PermittivityModel::Plasma { omega_p } => format!("plasma({omega_p})"),
    }
}

fn curve_line(c: &CurveOutcome) -> String {
    let g = &c.geometry;
    let mut s = format!("# curve: label={} kind={} a={}", c.label, g.kind.name(), g.a);
    if g.b.is_finite() {
        s += &format!(" b={}", g.b);
    }
    if g.h.is_finite() {
        s += &format!(" h={}", g.h);
    } else {
        s += &format!(" delta={}", g.delta);
    }
    s += &format!(
        " eps1={} eps2={} eps3={} reference={}",
        model(&c.media.inner),
        model(&c.media.gap),
        model(&c.media.outer),
        c.reference.name()
    );
    s
}

pub fn to_csv(report: &ScanReport, precision: usize) -> String {
    let mut out = format!("# casimir-cyl scan v{CSV_VERSION}; columns: {}\n", COLUMNS.join(","));
    out += &COLUMNS.join(",");
    out.push('\n');
    for c in &report.curves {
        out += &curve_line(c);
        out.push('\n');
        for r in &c.rows {
            out += &format!(
                "{},{},{},{},{},{},{},{}\n",
                c.axis.name(),
                sci(r.sweep_value, precision),
                sci(r.energy, precision),
                sci(r.est_error, 3),
                r.n_cutoff,
                r.m_cutoff,
                r.quad_nodes,
                r.converged
            );
        }
        if let Some(fit) = &c.fit {
            out += &format!(
                "# fit: label={} scaling slope={} intercept={} r2={:.6} inverse slope={} intercept={} r2={:.6}\n",
                c.label,
                sci(fit.scaling.slope, 6),
                sci(fit.scaling.intercept, 6),
                fit.scaling.r_squared,
                sci(fit.inverse.slope, 6),
                sci(fit.inverse.intercept, 6),
                fit.inverse.r_squared
            );
        }
    }
    out
}

#[derive(Serialize)]
struct JsonReport<'a> {
    version: u32,
    columns: [&'static str; 8],
    curves: &'a [CurveOutcome],
    failures: &'a [String],
}

pub fn to_json(report: &ScanReport) -> String {
    let doc = JsonReport { version: CSV_VERSION, columns: COLUMNS, curves: &report.curves, failures: &report.failures };
    serde_json::to_string_pretty(&doc).expect("scan report serializes") + "\n"
}
