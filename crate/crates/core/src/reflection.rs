//! Interface reflection coefficients on the imaginary frequency axis.
//!
//! With `f_n(x) = x I'_n/I_n` and `g_n(x) = -x K'_n/K_n` the two interface
//! coefficients reduce to
//!
//! ```text
//! R12_n     = (f_n(λ1 a) - f_n(λ2 a)) / (f_n(λ1 a) + g_n(λ2 a))
//! 1 / R23_n = (g_n(λ3 b) - g_n(λ2 b)) / (g_n(λ3 b) + f_n(λ2 b))
//! ```
//!
//! in which every exponential scale factor has already cancelled. The
//! differences of `f` (resp. `g`) are formed from `f_n - n` (resp. `g_n - n`)
//! so the common integer part never enters a subtraction.
//!
//! The outer coefficient is kept inverted: the kernel only consumes `1/R23`,
//! which is finite (zero) when the gap and outer media coincide.

use crate::bessel::{BesselSequence, IRatioSequence, KRatioSequence};
use crate::error::Result;
use crate::media::FrequencyNode;

/// Soft bound on `|R12|`, `|1/R23|`; exceeding it is logged, not fatal.
const MAGNITUDE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionPair {
    pub order: i64,
    pub r12: f64,
    pub inv_r23: f64,
}

/// `I'_n/I_n - K'_n/K_n` at the sequence argument, i.e. `(f_n + g_n)/x`.
pub(crate) fn log_derivative_gap(gap: &BesselSequence, n: usize) -> f64 {
    (gap.f(n) + gap.g(n)) / gap.x()
}

fn soft_bound(kind: &str, n: usize, value: f64) {
    if value.abs() > 1.0 + MAGNITUDE_SLACK {
        log::warn!("|{kind}| = {} exceeds 1 at order {n}", value.abs());
    }
}

pub(crate) fn r12_from(n: usize, inner: &IRatioSequence, gap: &BesselSequence) -> f64 {
    let numerator = inner.f_excess(n) - gap.i_ratios().f_excess(n);
    if numerator == 0.0 {
        return 0.0;
    }
    let value = numerator / (inner.f(n) + gap.g(n));
    soft_bound("R12", n, value);
    value
}

pub(crate) fn inv_r23_from(n: usize, outer: &KRatioSequence, gap: &BesselSequence) -> f64 {
    let numerator = outer.g_excess(n) - gap.k_ratios().g_excess(n);
    if numerator == 0.0 {
        return 0.0;
    }
    let value = numerator / (outer.g(n) + gap.f(n));
    soft_bound("1/R23", n, value);
    value
}

/// `R12_n` at the inner interface of radius `a`; 1 for an infinite `λ1`.
pub fn r12(n: i64, node: &FrequencyNode, a: f64) -> Result<f64> {
    let m = n.unsigned_abs() as usize;
    if node.lambda1 == node.lambda2 {
        return Ok(0.0);
    }
    if node.lambda1.is_infinite() {
        return Ok(1.0);
    }
    let inner = IRatioSequence::new(node.lambda1 * a, m)?;
    let gap = BesselSequence::new(node.lambda2 * a, m)?;
    Ok(r12_from(m, &inner, &gap))
}

/// `1/R23_n` at the outer interface of radius `b`; 1 for an infinite `λ3`.
pub fn inv_r23(n: i64, node: &FrequencyNode, b: f64) -> Result<f64> {
    let m = n.unsigned_abs() as usize;
    if node.lambda3 == node.lambda2 {
        return Ok(0.0);
    }
    if node.lambda3.is_infinite() {
        return Ok(1.0);
    }
    let outer = KRatioSequence::new(node.lambda3 * b, m)?;
    let gap = BesselSequence::new(node.lambda2 * b, m)?;
    Ok(inv_r23_from(m, &outer, &gap))
}

pub fn reflection_pair(n: i64, node: &FrequencyNode, a: f64, b: f64) -> Result<ReflectionPair> {
    Ok(ReflectionPair { order: n, r12: r12(n, node, a)?, inv_r23: inv_r23(n, node, b)? })
}

/// Large-`λ1` form `R12 ≈ leading - correction` with
/// `correction = (λ2/λ1) [I'_n/I_n - K'_n/K_n](λ2 a)`.
pub fn r12_pc_expansion(n: i64, node: &FrequencyNode, a: f64) -> Result<(f64, f64)> {
    let m = n.unsigned_abs() as usize;
    let gap = BesselSequence::new(node.lambda2 * a, m)?;
    Ok((1.0, node.lambda2 / node.lambda1 * log_derivative_gap(&gap, m)))
}

/// Large-`λ3` form `R23 ≈ leading + correction` with
/// `correction = (λ2/λ3) [I'_n/I_n - K'_n/K_n](λ2 b)`.
pub fn r23_pc_expansion(n: i64, node: &FrequencyNode, b: f64) -> Result<(f64, f64)> {
    let m = n.unsigned_abs() as usize;
    let gap = BesselSequence::new(node.lambda2 * b, m)?;
    Ok((1.0, node.lambda2 / node.lambda3 * log_derivative_gap(&gap, m)))
}

/// Reflection off a planar interface, `(λ3 - λ2)/(λ3 + λ2)`; the large-radius
/// limit of `1/R23_n`. An infinite `λ3` gives the Dirichlet value 1.
pub fn plane_reflection(node: &FrequencyNode) -> f64 {
    if node.lambda3 == node.lambda2 {
        0.0
    } else if node.lambda3.is_infinite() {
        1.0
    } else {
        (node.lambda3 - node.lambda2) / (node.lambda3 + node.lambda2)
    }
}
