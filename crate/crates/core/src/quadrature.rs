//! Composite Gauss-Legendre rules on fixed panel layouts.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

use crate::error::{Error, Result};

/// Panel edges of the dimensionless decay variable `s = 2 · gap · λ2`; the
/// integrand falls roughly like `e^{-s}`, so the last edge leaves ~e^-40.
pub const RADIAL_EDGES: [f64; 11] = [0.0, 0.008, 0.04, 0.15, 0.5, 1.5, 3.0, 6.0, 12.0, 24.0, 40.0];

/// Nodes and weights of an `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Result<Vec<(f64, f64)>> {
    let deg = NonZeroUsize::new(n).ok_or_else(|| Error::InvalidQuadrature("rule needs at least one node".into()))?;
    let rule = GaussLegendre::new(deg);
    let mut pts: Vec<(f64, f64)> = rule.as_node_weight_pairs().to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(pts)
}

/// Composite rule with `per_panel` nodes on each `[edges[i], edges[i+1]]`.
/// Endpoints are never nodes.
pub fn panel_rule(edges: &[f64], per_panel: usize) -> Result<Vec<(f64, f64)>> {
    if edges.len() < 2 || edges.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) {
        return Err(Error::InvalidQuadrature(format!("panel edges must be strictly increasing: {edges:?}")));
    }
    let base = gauss_legendre(per_panel)?;
    let mut out = Vec::with_capacity(base.len() * (edges.len() - 1));
    for w in edges.windows(2) {
        let half = 0.5 * (w[1] - w[0]);
        let mid = 0.5 * (w[1] + w[0]);
        out.extend(base.iter().map(|&(x, wt)| (mid + half * x, half * wt)));
    }
    Ok(out)
}

/// Edges `0, c/4, c, 4c, ...` below `limit`, or just `0` when `c` is not small.
fn graded_from_zero(scale: f64, limit: f64) -> Vec<f64> {
    let mut edges = vec![0.0];
    let mut x = 0.25 * scale;
    while x < 0.6 * limit {
        edges.push(x);
        x *= 4.0;
    }
    edges
}

/// Panel edges on `φ ∈ [0, π/2]` for the polar map. With `r_i = ε_i/ε_2`,
/// `λ_i/λ_2 = sqrt(r_i cos²φ + sin²φ)` changes on the scale `sqrt(r_min)`
/// near `φ = 0` (for `r_min < 1`) and `1/sqrt(r_max)` near `φ = π/2`
/// (for `r_max > 1`); panels are graded geometrically towards both ends.
pub fn angular_edges(ratios: &[f64]) -> Vec<f64> {
    let r_min = ratios.iter().copied().fold(1.0, f64::min);
    let r_max = ratios.iter().copied().fold(1.0, f64::max);
    let mut edges = graded_from_zero(r_min.sqrt(), FRAC_PI_4);
    edges.push(FRAC_PI_4);
    let top = graded_from_zero(1.0 / r_max.sqrt(), FRAC_PI_4);
    edges.extend(top.iter().rev().map(|psi| FRAC_PI_2 - psi));
    edges
}

/// `φ` rule for the polar scheme.
pub fn angular_rule(ratios: &[f64], per_panel: usize) -> Result<Vec<(f64, f64)>> {
    panel_rule(&angular_edges(ratios), per_panel)
}

/// Rule in `s ∈ (0, 40)` for the radial/decay variable.
pub fn radial_rule(per_panel: usize) -> Result<Vec<(f64, f64)>> {
    panel_rule(&RADIAL_EDGES, per_panel)
}

/// Nodes per panel at escalation level `level`: `base · 1.5^level`.
pub fn nodes_at_level(base: usize, level: usize) -> usize {
    (base as f64 * 1.5f64.powi(level as i32)).round() as usize
}

/// `∫_0^{π/2} dφ / sqrt((r - 1) cos²φ + 1)`, twice the half-plane value
/// of the angular factor, by the panel rule.
pub fn angular_integral(ratio: f64, per_panel: usize) -> Result<f64> {
    let rule = angular_rule(&[ratio], per_panel)?;
    Ok(rule
        .iter()
        .map(|&(phi, w)| {
            let c = phi.cos();
            w / ((ratio - 1.0) * c * c + 1.0).sqrt()
        })
        .sum())
}
