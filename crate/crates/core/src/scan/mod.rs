//! Parameter scans driven by a configuration file.

pub mod config;
pub mod output;
pub mod presets;

use serde::Serialize;

use crate::energy::{
    interaction_energy, inverse_fit, pc_deviation_energy, rule_size, scaling_fit, shared_spec, EnergyResult, LinearFit,
};
use crate::kernels::initial_n_cutoff;
use crate::{MediaTriple, QuadratureSpec};

pub use config::{
    parse_config, ConfigError, ConfigErrors, CurveConfig, GeometryParams, OutputFormat, Reference, ScanConfig,
    SweepAxis,
};

/// Environment variable overriding the configured worker count.
pub const WORKERS_ENV: &str = "CASIMIR_WORKERS";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub sweep_value: f64,
    pub energy: f64,
    pub est_error: f64,
    pub n_cutoff: usize,
    pub m_cutoff: usize,
    pub quad_nodes: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitPair {
    /// Affine fit against `ln(ε1/ε2)/sqrt(ε1)`.
    pub scaling: LinearFit,
    /// Affine fit against `1/ε1`.
    pub inverse: LinearFit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveOutcome {
    pub label: String,
    pub sweep_param: &'static str,
    #[serde(skip)]
    pub axis: SweepAxis,
    #[serde(serialize_with = "reference_name")]
    pub reference: Reference,
    pub geometry: GeometryParams,
    pub media: MediaTriple,
    pub rows: Vec<ScanRow>,
    pub fit: Option<FitPair>,
}

fn reference_name<S: serde::Serializer>(r: &Reference, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(r.name())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub curves: Vec<CurveOutcome>,
    /// Points where the energy could not be computed at all.
    pub failures: Vec<String>,
}

impl ScanReport {
    pub fn all_converged(&self) -> bool {
        self.failures.is_empty() && self.curves.iter().all(|c| c.rows.iter().all(|r| r.converged))
    }

    pub fn render(&self, format: OutputFormat, precision: usize) -> String {
        match format {
            OutputFormat::Csv => output::to_csv(self, precision),
            OutputFormat::Json => output::to_json(self),
        }
    }
}

/// Worker count: the environment variable wins over the configuration.
pub fn effective_workers(config: &ScanConfig) -> Option<usize> {
    std::env::var(WORKERS_ENV).ok().and_then(|v| v.trim().parse().ok()).filter(|&n: &usize| n > 0).or(config.workers)
}

fn failed_row(value: f64) -> ScanRow {
    ScanRow {
        sweep_value: value,
        energy: f64::NAN,
        est_error: f64::NAN,
        n_cutoff: 0,
        m_cutoff: 0,
        quad_nodes: 0,
        converged: false,
    }
}

fn row(value: f64, r: &EnergyResult) -> ScanRow {
    ScanRow {
        sweep_value: value,
        energy: r.value,
        est_error: r.est_error,
        n_cutoff: r.n_used,
        m_cutoff: r.m_used,
        quad_nodes: r.node_count,
        converged: r.converged,
    }
}

fn run_curve(config: &ScanConfig, curve: &CurveConfig, quad: &QuadratureSpec, failures: &mut Vec<String>) -> CurveOutcome {
    let axis = config.sweep.axis;
    let reference = config.sweep.reference;
    let points: Vec<_> = config.sweep.grid.iter().map(|&v| (v, curve.at(axis, v))).collect();
    let quad = if axis.is_geometric() {
        shared_spec(quad, points.iter().filter_map(|(_, p)| p.as_ref().ok()).map(|(g, _)| g.min_gap()))
    } else {
        *quad
    };
    let mut rows = Vec::with_capacity(points.len());
    for (value, point) in &points {
        let result = point.clone().and_then(|(g, m)| match reference {
            Reference::Pc => pc_deviation_energy(&g, &m, &quad),
            Reference::None | Reference::First => interaction_energy(&g, &m, &quad),
        });
        match result {
            Ok(r) => rows.push(row(*value, &r)),
            Err(e) => {
                log::error!("curve {} at {} = {value}: {e}", curve.label, axis.name());
                failures.push(format!("curve {} at {} = {value}: {e}", curve.label, axis.name()));
                rows.push(failed_row(*value));
            }
        }
    }
    if reference == Reference::First {
        let (e0, err0) = (rows[0].energy, rows[0].est_error);
        for (i, r) in rows.iter_mut().enumerate() {
            if i == 0 {
                r.energy = 0.0;
                r.est_error = 0.0;
            } else {
                r.energy -= e0;
                r.est_error += err0;
            }
        }
    }
    let fit = match (reference, axis, curve.media.gap.constant_value()) {
        (Reference::Pc, SweepAxis::Eps1, Some(eps2)) if rows.iter().all(|r| r.energy.is_finite()) => {
            let samples: Vec<(f64, f64)> = rows.iter().map(|r| (r.sweep_value, r.energy)).collect();
            match (scaling_fit(&samples, eps2), inverse_fit(&samples)) {
                (Ok(scaling), Ok(inverse)) => Some(FitPair { scaling, inverse }),
                _ => None,
            }
        }
        _ => None,
    };
    CurveOutcome {
        label: curve.label.clone(),
        sweep_param: axis.name(),
        axis,
        reference,
        geometry: curve.geometry,
        media: curve.media,
        rows,
        fit,
    }
}

/// Runs every curve of a scan. Numerical failures at single points are
/// recorded in the report rather than aborting the scan.
pub fn run_scan(config: &ScanConfig) -> ScanReport {
    let quad = QuadratureSpec { workers: effective_workers(config), ..config.quadrature };
    let mut failures = Vec::new();
    let curves = config.curves.iter().map(|c| run_curve(config, c, &quad, &mut failures)).collect();
    ScanReport { curves, failures }
}

/// Size estimate from a dry run of a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanEstimate {
    pub curves: usize,
    pub points: usize,
    /// Frequency nodes per energy at the first two refinement levels.
    pub nodes_first_levels: usize,
    /// Largest starting matrix dimension `2N + 1` over all points.
    pub max_start_dim: usize,
}

pub fn estimate(config: &ScanConfig) -> crate::Result<ScanEstimate> {
    let mut nodes = 0;
    let mut max_n = 0;
    for curve in &config.curves {
        for &v in &config.sweep.grid {
            let (g, m) = curve.at(config.sweep.axis, v)?;
            nodes = nodes.max(rule_size(&m, &config.quadrature, 0)? + rule_size(&m, &config.quadrature, 1)?);
            max_n = max_n.max(initial_n_cutoff(&g));
        }
    }
    Ok(ScanEstimate {
        curves: config.curves.len(),
        points: config.curves.len() * config.sweep.grid.len(),
        nodes_first_levels: nodes,
        max_start_dim: 2 * max_n + 1,
    })
}
