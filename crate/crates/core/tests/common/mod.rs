//! Slow reference implementations used only by the tests. Bessel functions
//! come from their integral representations, reflection coefficients and
//! kernels from the unscaled textbook formulas.
#![allow(dead_code)]

use std::f64::consts::PI;

/// `e^{-x} I_n(x)` from `(1/π) ∫_0^π e^{x(cos θ - 1)} cos(nθ) dθ`
/// (trapezoid rule, spectrally accurate for a periodic integrand).
pub fn i_scaled(n: i64, x: f64) -> f64 {
    let steps = 2000;
    let h = PI / steps as f64;
    let mut sum = 0.0;
    for k in 0..=steps {
        let t = k as f64 * h;
        let w = if k == 0 || k == steps { 0.5 } else { 1.0 };
        sum += w * (x * (t.cos() - 1.0)).exp() * (n as f64 * t).cos();
    }
    sum * h / PI
}

/// `e^{x} K_n(x)` from `∫_0^∞ e^{-x(cosh t - 1)} cosh(nt) dt`.
pub fn k_scaled(n: i64, x: f64) -> f64 {
    let h = 1e-3;
    let mut sum = 0.5;
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        let term = (-x * (t.cosh() - 1.0) + n.unsigned_abs() as f64 * t).exp() * 0.5 * (1.0 + (-2.0 * n.unsigned_abs() as f64 * t).exp());
        sum += term;
        if term < 1e-20 * sum && t > 1.0 {
            break;
        }
        k += 1;
    }
    sum * h
}

/// `I_n(x)`: the power series (positive terms, no cancellation) for
/// moderate `x`, the integral representation beyond.
pub fn bessel_i(n: i64, x: f64) -> f64 {
    if x > 40.0 {
        return i_scaled(n, x) * x.exp();
    }
    let n = n.unsigned_abs() as f64;
    let half = 0.5 * x;
    let mut term = (n * half.ln() - ln_gamma(n + 1.0)).exp();
    let mut sum = term;
    let mut k = 1.0;
    while term > 1e-18 * sum {
        term *= half * half / (k * (k + n));
        sum += term;
        k += 1.0;
    }
    sum
}

/// `ln Γ(z)` for `z ≥ 1` by the Lanczos approximation (g = 7, n = 9).
fn ln_gamma(z: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    let z = z - 1.0;
    let mut a = C[0];
    let t = z + G + 0.5;
    for (i, c) in C.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + a.ln()
}

pub fn bessel_k(n: i64, x: f64) -> f64 {
    k_scaled(n, x) * (-x).exp()
}

pub fn bessel_i_prime(n: i64, x: f64) -> f64 {
    0.5 * (bessel_i(n - 1, x) + bessel_i(n + 1, x))
}

pub fn bessel_k_prime(n: i64, x: f64) -> f64 {
    -0.5 * (bessel_k(n - 1, x) + bessel_k(n + 1, x))
}

/// Inner-interface coefficient from the unscaled formula.
pub fn raw_r12(n: i64, l1: f64, l2: f64, a: f64) -> f64 {
    let (x1, x2) = (l1 * a, l2 * a);
    let q = l2 / l1;
    let num = 1.0 - q * bessel_i(n, x1) * bessel_i_prime(n, x2) / (bessel_i(n, x2) * bessel_i_prime(n, x1));
    let den = 1.0 - q * bessel_i(n, x1) * bessel_k_prime(n, x2) / (bessel_i_prime(n, x1) * bessel_k(n, x2));
    num / den
}

/// Outer-interface coefficient from the unscaled formula.
pub fn raw_r23(n: i64, l2: f64, l3: f64, b: f64) -> f64 {
    let (x2, x3) = (l2 * b, l3 * b);
    let q = l2 / l3;
    let num = 1.0 - q * bessel_i_prime(n, x2) * bessel_k(n, x3) / (bessel_i(n, x2) * bessel_k_prime(n, x3));
    let den = 1.0 - q * bessel_k(n, x3) * bessel_k_prime(n, x2) / (bessel_k_prime(n, x3) * bessel_k(n, x2));
    num / den
}

/// Eccentric kernel entry with the translation sum over `|m| ≤ m_cut`.
/// With `row_index` the outer coefficient carries the row order `n`,
/// otherwise each outer multipole `m` is reflected with its own.
#[allow(clippy::too_many_arguments)]
pub fn raw_eccentric_entry(
    n: i64,
    p: i64,
    lambdas: [f64; 3],
    a: f64,
    b: f64,
    delta: f64,
    m_cut: i64,
    row_index: bool,
) -> f64 {
    let [l1, l2, l3] = lambdas;
    let shift = l2 * a * delta;
    let prefactor = raw_r12(n, l1, l2, a) * bessel_i(n, l2 * a) / bessel_k(n, l2 * a);
    let mut sum = 0.0;
    for m in -m_cut..=m_cut {
        let outer = if row_index { raw_r23(n, l2, l3, b) } else { raw_r23(m, l2, l3, b) };
        sum += bessel_k(m, l2 * b) / bessel_i(m, l2 * b) / outer * bessel_i(n - m, shift) * bessel_i(p - m, shift);
    }
    prefactor * sum
}

/// Cylinder-plane kernel entry with a perfectly reflecting plane.
pub fn raw_plane_entry_dirichlet(n: i64, p: i64, l1: f64, l2: f64, a: f64, h: f64) -> f64 {
    raw_r12(n, l1, l2, a) * bessel_i(n, l2 * a) / bessel_k(n, l2 * a) * bessel_k(n + p, 2.0 * l2 * h)
}
