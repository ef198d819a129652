//! Interaction energy per unit length,
//!
//! ```text
//! E / (ħ c L) = 1/(4π²) ∫ dk_z ∫_0^∞ dξ  ln det(I - A(ξ, k_z)),
//! ```
//!
//! its perfect-conductor limit and first-order correction, finite-difference
//! forces and the fits used to read off the slow approach to the
//! perfect-conductor limit.
//!
//! For dispersion-less media the default rule works in polar coordinates of
//! the `(sqrt(ε2) ξ, k_z)` half-plane: `dξ dk_z = η dη dφ / sqrt(ε2)`, with
//! `k_z`-evenness folding `φ ∈ [-π/2, π/2]` onto `[0, π/2]`. The radial
//! variable is `s = 2 · gap · η`, in which the integrand decays like `e^{-s}`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::bessel::NeumaierSum;
use crate::error::{Error, Result};
use crate::exec;
use crate::geometry::GeometryConfig;
use crate::kernels::{
    build_kernel, build_pc_and_delta, default_m_cutoff, initial_n_cutoff, KernelMatrix, KernelOptions,
};
use crate::media::{polar_node, FrequencyNode, MediaTriple, PermittivityModel};
use crate::quadrature::{angular_integral, angular_rule, nodes_at_level, radial_rule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Polar for dispersion-less media, Cartesian otherwise.
    #[default]
    Auto,
    PolarProduct,
    CartesianProduct,
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Self::Auto),
            "polar" | "polar_product" => Ok(Self::PolarProduct),
            "cartesian" | "cartesian_product" => Ok(Self::CartesianProduct),
            other => Err(Error::InvalidQuadrature(format!(
                "unknown scheme `{other}` (expected auto, polar or cartesian)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    /// Gauss-Legendre nodes per radial (or `ξ`) panel at the first level.
    pub radial_nodes: usize,
    /// Nodes per angular (or `k_z`) panel at the first level.
    pub angular_nodes: usize,
    pub rel_tol: f64,
    pub abs_floor: f64,
    /// Extra refinement levels after the first comparison.
    pub max_escalations: usize,
    /// Relative size of the outermost kernel rows at which `N` stops growing.
    pub trunc_tol: f64,
    pub n_max: usize,
    /// Length setting the radial node placement; defaults to the narrowest
    /// gap. Fixing it makes different geometries share one node set.
    pub length_scale: Option<f64>,
    pub workers: Option<usize>,
    pub kernel: KernelOptions,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            scheme: Scheme::Auto,
            radial_nodes: 6,
            angular_nodes: 6,
            rel_tol: 1e-6,
            abs_floor: 1e-15,
            max_escalations: 2,
            trunc_tol: 1e-10,
            n_max: 4096,
            length_scale: None,
            workers: None,
            kernel: KernelOptions::default(),
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidQuadrature(msg));
        if self.radial_nodes < 4 || self.angular_nodes < 4 {
            return bad(format!(
                "node counts must be at least 4, got radial {} and angular {}",
                self.radial_nodes, self.angular_nodes
            ));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-2) {
            return bad(format!("rel_tol must lie in (0, 1e-2], got {}", self.rel_tol));
        }
        if self.abs_floor.is_nan() || self.abs_floor < 0.0 {
            return bad(format!("abs_floor must be non-negative, got {}", self.abs_floor));
        }
        if !(self.trunc_tol > 0.0 && self.trunc_tol < 1.0) {
            return bad(format!("trunc_tol must lie in (0, 1), got {}", self.trunc_tol));
        }
        if let Some(l) = self.length_scale {
            if !(l > 0.0 && l.is_finite()) {
                return bad(format!("length scale must be positive, got {l}"));
            }
        }
        Ok(())
    }

    /// Concrete scheme for these media; the polar map needs a constant gap medium.
    pub fn resolve_scheme(&self, media: &MediaTriple) -> Result<Scheme> {
        let all_constant = [media.inner, media.gap, media.outer].iter().all(|m| !m.is_dispersive());
        match self.scheme {
            Scheme::Auto if all_constant => Ok(Scheme::PolarProduct),
            Scheme::Auto => Ok(Scheme::CartesianProduct),
            Scheme::PolarProduct if media.gap.is_dispersive() => Err(Error::UnsupportedModel(
                "the polar scheme needs a dispersion-less gap medium; use the cartesian scheme".into(),
            )),
            other => Ok(other),
        }
    }
}

/// Energy per unit length in units of `ħ c L` (lengths in the units of the
/// geometry) with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyResult {
    pub value: f64,
    /// `|Q_L - Q_{L-1}|` between the last two refinement levels.
    pub est_error: f64,
    pub n_used: usize,
    pub m_used: usize,
    pub node_count: usize,
    pub converged: bool,
}

impl EnergyResult {
    fn zero() -> Self {
        Self { value: 0.0, est_error: 0.0, n_used: 0, m_used: 0, node_count: 0, converged: true }
    }
}

/// `ln det(I - A)` by pivoted LU of the balanced matrix.
pub fn log_det_one_minus(kernel: &KernelMatrix) -> Result<f64> {
    let node = kernel.node();
    match kernel.dense() {
        Some(a) if !kernel.is_diagonal() => log_det_dense(a, node.xi, node.kz),
        _ => log_det_diagonal(kernel.diagonal().as_slice(), node.xi, node.kz),
    }
}

fn log_det_diagonal(diag: &[f64], xi: f64, kz: f64) -> Result<f64> {
    let mut sum = NeumaierSum::default();
    for &v in diag {
        if v >= 1.0 {
            return Err(Error::SpectralViolation { xi, kz, det: 1.0 - v });
        }
        sum.add((-v).ln_1p());
    }
    Ok(sum.total())
}

fn log_det_dense(a: &DMatrix<f64>, xi: f64, kz: f64) -> Result<f64> {
    let dim = a.nrows();
    let lu = (DMatrix::<f64>::identity(dim, dim) - a).lu();
    let mut sign: f64 = lu.p().determinant();
    let mut ln = 0.0;
    for &u in lu.u().diagonal().iter() {
        if u == 0.0 || !u.is_finite() {
            return Err(Error::SpectralViolation { xi, kz, det: 0.0 });
        }
        sign *= u.signum();
        ln += u.abs().ln();
    }
    if sign < 0.0 {
        return Err(Error::SpectralViolation { xi, kz, det: -ln.exp() });
    }
    Ok(ln)
}

/// `Tr[(I - A_pc)^{-1} ΔA]`.
fn correction_trace(pc: &KernelMatrix, delta: &KernelMatrix) -> Result<f64> {
    let node = pc.node();
    if pc.is_diagonal() {
        let mut sum = NeumaierSum::default();
        for (p, d) in pc.diagonal().iter().zip(delta.diagonal().iter()) {
            if *p >= 1.0 {
                return Err(Error::SpectralViolation { xi: node.xi, kz: node.kz, det: 1.0 - p });
            }
            sum.add(d / (1.0 - p));
        }
        return Ok(sum.total());
    }
    let dim = pc.dim();
    let lu = (DMatrix::<f64>::identity(dim, dim) - pc.balanced()).lu();
    let x = lu
        .solve(&delta.balanced())
        .ok_or(Error::SpectralViolation { xi: node.xi, kz: node.kz, det: 0.0 })?;
    Ok(x.trace())
}

/// One integrand sample with the truncation it needed.
#[derive(Debug, Clone, Copy, Default)]
struct NodeEval {
    value: f64,
    n: usize,
    m: usize,
    truncated: bool,
}

/// Builds kernels for growing `N` (and `M` when the translation sum is
/// flagged) until the outermost rows are negligible. The tolerance loosens
/// by `e^s` with `s = 2 λ2 gap`, since the node itself is suppressed by
/// about that factor.
fn adaptive_kernels(
    geometry: &GeometryConfig,
    node: &FrequencyNode,
    spec: &QuadratureSpec,
    n_start: usize,
    build: &dyn Fn(usize, usize) -> Result<Vec<KernelMatrix>>,
) -> Result<(Vec<KernelMatrix>, bool)> {
    let decay = 2.0 * node.lambda2 * geometry.min_gap();
    let tol = (spec.trunc_tol * decay.min(60.0).exp()).min(1e-3);
    let mut n = n_start.max(1);
    loop {
        let mut m = default_m_cutoff(geometry, node, n);
        let mut kernels = build(n, m)?;
        for _ in 0..6 {
            if !kernels.iter().any(|k| k.insufficient_m()) {
                break;
            }
            m += m / 2;
            kernels = build(n, m)?;
        }
        let short_m = kernels.iter().any(|k| k.insufficient_m());
        let done = kernels.iter().all(|k| k.boundary_ratio() <= tol);
        if done {
            return Ok((kernels, short_m));
        }
        if 2 * n > spec.n_max {
            return Ok((kernels, true));
        }
        n *= 2;
    }
}

fn log_det_node(geometry: &GeometryConfig, node: &FrequencyNode, spec: &QuadratureSpec) -> Result<NodeEval> {
    let build = |n: usize, m: usize| Ok(vec![build_kernel(geometry, node, n, m, &spec.kernel)?]);
    let (kernels, truncated) = adaptive_kernels(geometry, node, spec, initial_n_cutoff(geometry), &build)?;
    let k = &kernels[0];
    match log_det_one_minus(k) {
        Ok(value) => Ok(NodeEval { value, n: k.n_cutoff(), m: k.m_cutoff(), truncated }),
        Err(Error::SpectralViolation { .. }) if 2 * k.n_cutoff() <= spec.n_max => {
            let n = 2 * k.n_cutoff();
            let retry = build(n, default_m_cutoff(geometry, node, n))?.remove(0);
            let value = log_det_one_minus(&retry)?;
            Ok(NodeEval { value, n, m: retry.m_cutoff(), truncated })
        }
        Err(e) => Err(e),
    }
}

fn perfect(node: &FrequencyNode) -> FrequencyNode {
    FrequencyNode { lambda1: f64::INFINITY, lambda3: f64::INFINITY, ..*node }
}

struct WeightedNode {
    node: FrequencyNode,
    weight: f64,
}

fn build_rule(
    media: &MediaTriple,
    scheme: Scheme,
    spec: &QuadratureSpec,
    length: f64,
    level: usize,
) -> Result<Vec<WeightedNode>> {
    let radial = radial_rule(nodes_at_level(spec.radial_nodes, level))?;
    let prefactor = 2.0 / (4.0 * PI * PI);
    let mut out = Vec::new();
    match scheme {
        Scheme::PolarProduct | Scheme::Auto => {
            let eps2 = media.gap.constant_value().ok_or_else(|| {
                Error::UnsupportedModel("the polar scheme needs a dispersion-less gap medium".into())
            })?;
            let ratios: Vec<f64> = [media.inner, media.outer]
                .iter()
                .map(|m| m.high_frequency_limit().max(m.constant_value().unwrap_or(0.0)) / eps2)
                .collect();
            let angular = angular_rule(&ratios, nodes_at_level(spec.angular_nodes, level))?;
            for &(s, ws) in &radial {
                let eta = s / (2.0 * length);
                let w_eta = ws / (2.0 * length) * eta / eps2.sqrt();
                for &(phi, wp) in &angular {
                    out.push(WeightedNode { node: polar_node(media, eta, phi)?, weight: prefactor * w_eta * wp });
                }
            }
        }
        Scheme::CartesianProduct => {
            let axial = radial_rule(nodes_at_level(spec.angular_nodes, level))?;
            let xi_scale = 2.0 * length * media.gap.high_frequency_limit().sqrt();
            let kz_scale = 2.0 * length;
            for &(u, wu) in &radial {
                for &(v, wv) in &axial {
                    let node = media.node(u / xi_scale, v / kz_scale)?;
                    out.push(WeightedNode { node, weight: prefactor * wu / xi_scale * wv / kz_scale });
                }
            }
        }
    }
    Ok(out)
}

/// Number of frequency nodes of the rule at refinement `level`.
pub fn rule_size(media: &MediaTriple, spec: &QuadratureSpec, level: usize) -> Result<usize> {
    let scheme = spec.resolve_scheme(media)?;
    Ok(build_rule(media, scheme, spec, 1.0, level)?.len())
}

/// Nested refinement: evaluate on successively finer rules until two
/// consecutive levels agree to `rel_tol`.
fn integrate(
    media: &MediaTriple,
    length: f64,
    spec: &QuadratureSpec,
    integrand: &(dyn Fn(&FrequencyNode) -> Result<NodeEval> + Sync),
) -> Result<EnergyResult> {
    spec.validate()?;
    let scheme = spec.resolve_scheme(media)?;
    let length = spec.length_scale.unwrap_or(length);
    let mut previous: Option<f64> = None;
    let mut result = EnergyResult::zero();
    for level in 0..=spec.max_escalations + 1 {
        let rule = build_rule(media, scheme, spec, length, level)?;
        let evals = exec::map_ordered(&rule, spec.workers, |wn| integrand(&wn.node));
        let mut sum = NeumaierSum::default();
        let (mut n_used, mut m_used, mut truncated) = (0, 0, false);
        for (wn, ev) in rule.iter().zip(evals) {
            let ev = ev?;
            sum.add(wn.weight * ev.value);
            n_used = n_used.max(ev.n);
            m_used = m_used.max(ev.m);
            truncated |= ev.truncated;
        }
        let value = sum.total();
        let est_error = previous.map_or(f64::INFINITY, |p| (value - p).abs());
        let converged = !truncated && est_error <= spec.rel_tol * value.abs() + spec.abs_floor;
        result = EnergyResult { value, est_error, n_used, m_used, node_count: rule.len(), converged };
        log::debug!("level {level}: {} nodes, value {value:.12e}, est_error {est_error:.3e}", rule.len());
        if converged {
            break;
        }
        previous = Some(value);
    }
    Ok(result)
}

fn validate_inputs(geometry: &GeometryConfig, media: &MediaTriple, quad: &QuadratureSpec) -> Result<()> {
    geometry.validate()?;
    media.validate()?;
    quad.validate()?;
    quad.resolve_scheme(media).map(|_| ())
}

/// Interaction energy per unit length, `E/(ħ c L)`.
pub fn interaction_energy(geometry: &GeometryConfig, media: &MediaTriple, quad: &QuadratureSpec) -> Result<EnergyResult> {
    validate_inputs(geometry, media, quad)?;
    if media.has_transparent_interface() {
        return Ok(EnergyResult::zero());
    }
    let f = |node: &FrequencyNode| log_det_node(geometry, node, quad);
    integrate(media, geometry.min_gap(), quad, &f)
}

/// Energy with both bodies perfectly reflecting (Dirichlet), gap medium `gap`.
pub fn perfect_conductor_energy(
    geometry: &GeometryConfig,
    gap: PermittivityModel,
    quad: &QuadratureSpec,
) -> Result<EnergyResult> {
    let media = MediaTriple::new(gap, gap, gap);
    validate_inputs(geometry, &media, quad)?;
    let f = |node: &FrequencyNode| log_det_node(geometry, &perfect(node), quad);
    integrate(&media, geometry.min_gap(), quad, &f)
}

/// `E - E_pc`, integrated node by node so that both terms share one rule
/// and one truncation.
pub fn pc_deviation_energy(geometry: &GeometryConfig, media: &MediaTriple, quad: &QuadratureSpec) -> Result<EnergyResult> {
    validate_inputs(geometry, media, quad)?;
    let f = |node: &FrequencyNode| {
        let pc_node = perfect(node);
        let build = |n: usize, m: usize| {
            Ok(vec![build_kernel(geometry, node, n, m, &quad.kernel)?, build_kernel(geometry, &pc_node, n, m, &quad.kernel)?])
        };
        let (ks, truncated) = adaptive_kernels(geometry, node, quad, initial_n_cutoff(geometry), &build)?;
        let value = log_det_one_minus(&ks[0])? - log_det_one_minus(&ks[1])?;
        Ok(NodeEval { value, n: ks[0].n_cutoff(), m: ks[0].m_cutoff(), truncated })
    };
    integrate(media, geometry.min_gap(), quad, &f)
}

/// First-order correction to the perfect-conductor energy,
/// `ΔE = 1/(4π²) ∫∫ Tr[(I - A_pc)^{-1} ΔA]` with `A ≈ A_pc - ΔA`, so that
/// `E ≈ E_pc + ΔE`.
pub fn pc_correction_energy(geometry: &GeometryConfig, media: &MediaTriple, quad: &QuadratureSpec) -> Result<EnergyResult> {
    validate_inputs(geometry, media, quad)?;
    let f = |node: &FrequencyNode| {
        let build = |n: usize, m: usize| {
            let (pc, delta) = build_pc_and_delta(geometry, node, n, m)?;
            Ok(vec![pc, delta])
        };
        let (ks, truncated) = adaptive_kernels(geometry, node, quad, initial_n_cutoff(geometry), &build)?;
        let value = correction_trace(&ks[0], &ks[1])?;
        Ok(NodeEval { value, n: ks[0].n_cutoff(), m: ks[0].m_cutoff(), truncated })
    };
    integrate(media, geometry.min_gap(), quad, &f)
}

/// `E(δ)` along a grid, all on the node set of the narrowest gap.
pub fn energy_curve_vs_delta(
    base: &GeometryConfig,
    media: &MediaTriple,
    quad: &QuadratureSpec,
    delta_grid: &[f64],
) -> Result<Vec<(f64, EnergyResult)>> {
    let geoms = delta_grid.iter().map(|&d| base.with_delta(d)).collect::<Result<Vec<_>>>()?;
    let shared = shared_spec(quad, geoms.iter().map(GeometryConfig::min_gap));
    geoms.iter().map(|g| Ok((g.delta, interaction_energy(g, media, &shared)?))).collect()
}

/// `(δ, E(δ) - E(0))` along a grid.
pub fn energy_vs_delta(
    base: &GeometryConfig,
    media: &MediaTriple,
    quad: &QuadratureSpec,
    delta_grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let mut grid = vec![0.0];
    grid.extend_from_slice(delta_grid);
    let curve = energy_curve_vs_delta(base, media, quad, &grid)?;
    let e0 = curve[0].1.value;
    Ok(curve[1..].iter().map(|(d, e)| (*d, e.value - e0)).collect())
}

pub(crate) fn shared_spec(quad: &QuadratureSpec, gaps: impl Iterator<Item = f64>) -> QuadratureSpec {
    let narrowest = gaps.fold(f64::INFINITY, f64::min);
    QuadratureSpec { length_scale: Some(quad.length_scale.unwrap_or(narrowest)), ..*quad }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForceCoordinate {
    /// Eccentricity `δ` of nested cylinders.
    Delta,
    /// Surface gap `d` of the cylinder-plane geometry.
    Gap,
}

/// `-∂E/∂x` by central differences at steps `h` and `h/2` combined by
/// Richardson extrapolation. All four energies use one node set.
pub fn force(
    geometry: &GeometryConfig,
    media: &MediaTriple,
    quad: &QuadratureSpec,
    coordinate: ForceCoordinate,
    step: f64,
) -> Result<f64> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Domain(format!("finite-difference step must be positive, got {step}")));
    }
    let moved = |dx: f64| -> Result<GeometryConfig> {
        match coordinate {
            ForceCoordinate::Delta => geometry.with_delta(geometry.delta + dx),
            ForceCoordinate::Gap => geometry.with_plane_gap(geometry.plane_gap() + dx),
        }
    };
    let offsets = [-step, -0.5 * step, 0.5 * step, step];
    let geoms = offsets.iter().map(|&dx| moved(dx)).collect::<Result<Vec<_>>>()?;
    let shared = shared_spec(quad, geoms.iter().map(GeometryConfig::min_gap));
    let e = geoms
        .iter()
        .map(|g| interaction_energy(g, media, &shared).map(|r| r.value))
        .collect::<Result<Vec<_>>>()?;
    let coarse = (e[3] - e[0]) / (2.0 * step);
    let fine = (e[2] - e[1]) / step;
    Ok(-(4.0 * fine - coarse) / 3.0)
}

/// Ordinary least squares `y ≈ slope · x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination.
    pub r_squared: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() {
        return Err(Error::InsufficientData(format!("{} abscissae but {} ordinates", xs.len(), ys.len())));
    }
    if xs.len() < 4 {
        return Err(Error::InsufficientData(format!("a fit needs at least 4 samples, got {}", xs.len())));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    Ok(LinearFit { slope, intercept, r_squared })
}

/// Fit of `ΔE` against `ln(ε1/ε2)/sqrt(ε1)` for samples `(ε1, ΔE)`. The
/// intercept absorbs the fixed contribution of a finite `ε3`.
pub fn scaling_fit(samples: &[(f64, f64)], eps2: f64) -> Result<LinearFit> {
    let xs: Vec<f64> = samples.iter().map(|(e1, _)| (e1 / eps2).ln() / e1.sqrt()).collect();
    let ys: Vec<f64> = samples.iter().map(|(_, de)| *de).collect();
    linear_fit(&xs, &ys)
}

/// Competing fit of `ΔE` against `1/ε1`.
pub fn inverse_fit(samples: &[(f64, f64)]) -> Result<LinearFit> {
    let xs: Vec<f64> = samples.iter().map(|(e1, _)| 1.0 / e1).collect();
    let ys: Vec<f64> = samples.iter().map(|(_, de)| *de).collect();
    linear_fit(&xs, &ys)
}

/// Angular factor `∫ dφ / sqrt((r - 1) cos²φ + 1)` over the half-plane
/// `φ ∈ [-π/2, π/2]` by quadrature, and its large-`r` form `ln(r)/sqrt(r)`.
pub fn angular_asymptote_check(ratio: f64, quad_nodes: usize) -> Result<(f64, f64)> {
    if !(ratio >= 1.0 && ratio.is_finite()) {
        return Err(Error::Domain(format!("permittivity ratio must be at least 1, got {ratio}")));
    }
    let numeric = 2.0 * angular_integral(ratio, quad_nodes.max(1))?;
    Ok((numeric, ratio.ln() / ratio.sqrt()))
}

/// Proximity-force estimate for two coaxial Dirichlet cylinders,
/// `-(π²/1440) · 2π sqrt(ab) / (b - a)³`.
pub fn pfa_concentric_dirichlet(a: f64, b: f64) -> f64 {
    -(PI * PI / 1440.0) * 2.0 * PI * (a * b).sqrt() / (b - a).powi(3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn dense(rows: &[&[f64]]) -> DMatrix<f64> {
        DMatrix::from_row_slice(rows.len(), rows.len(), &rows.concat())
    }

    #[test]
    fn log_det_examples() {
        assert_eq!(log_det_dense(&DMatrix::zeros(3, 3), 1.0, 0.0).unwrap(), 0.0);
        let a = dense(&[&[0.1, 0.05], &[0.02, 0.2]]);
        assert_relative_eq!(log_det_dense(&a, 1.0, 0.0).unwrap(), 0.719f64.ln(), max_relative = 1e-14);
        let diag = [0.3, -0.5, 0.01];
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&diag));
        let expect = 0.7f64.ln() + 1.5f64.ln() + 0.99f64.ln();
        assert_relative_eq!(log_det_diagonal(&diag, 1.0, 0.0).unwrap(), expect, max_relative = 1e-14);
        assert_relative_eq!(log_det_dense(&d, 1.0, 0.0).unwrap(), expect, max_relative = 1e-14);
    }

    #[test]
    fn log_det_rejects_non_positive_determinant() {
        let a = dense(&[&[1.5, 0.0], &[0.0, 0.2]]);
        assert!(matches!(log_det_dense(&a, 1.0, 0.0), Err(Error::SpectralViolation { .. })));
        assert!(matches!(log_det_diagonal(&[1.5, 0.2], 1.0, 0.0), Err(Error::SpectralViolation { .. })));
    }

    #[test]
    fn quadrature_spec_validation() {
        assert!(QuadratureSpec { radial_nodes: 3, ..Default::default() }.validate().is_err());
        assert!(QuadratureSpec { rel_tol: 0.1, ..Default::default() }.validate().is_err());
        let media = MediaTriple::new(
            PermittivityModel::Constant(2.0),
            PermittivityModel::Plasma { omega_p: 1.0 },
            PermittivityModel::Constant(3.0),
        );
        let polar = QuadratureSpec { scheme: Scheme::PolarProduct, ..Default::default() };
        assert!(matches!(polar.resolve_scheme(&media), Err(Error::UnsupportedModel(_))));
        assert_eq!(QuadratureSpec::default().resolve_scheme(&media).unwrap(), Scheme::CartesianProduct);
    }

    #[test]
    fn fits() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let fit = linear_fit(&xs, &[3.0, 5.0, 7.0, 9.0]).unwrap();
        assert_relative_eq!(fit.slope, 2.0, max_relative = 1e-14);
        assert_relative_eq!(fit.intercept, 1.0, max_relative = 1e-14);
        assert_relative_eq!(fit.r_squared, 1.0, max_relative = 1e-14);
        assert!(matches!(scaling_fit(&[(1e2, 1.0), (1e3, 0.5), (1e4, 0.1)], 1.0), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn angular_factor_at_unit_ratio() {
        let (numeric, asymptote) = angular_asymptote_check(1.0, 8).unwrap();
        assert_relative_eq!(numeric, PI, max_relative = 1e-14);
        assert_eq!(asymptote, 0.0);
    }

    #[test]
    fn transparent_media_give_zero() {
        let g = GeometryConfig::eccentric(1.0, 2.0, 0.3).unwrap();
        let q = QuadratureSpec::default();
        assert_eq!(interaction_energy(&g, &MediaTriple::constant(5.0, 5.0, 50.0), &q).unwrap().value, 0.0);
        assert_eq!(interaction_energy(&g, &MediaTriple::constant(2.0, 5.0, 5.0), &q).unwrap().value, 0.0);
    }
}
