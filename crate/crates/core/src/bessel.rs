//! Modified Bessel functions `I_n(x)`, `K_n(x)` of integer order and positive
//! real argument.
//!
//! Everything downstream consumes these functions through ratios, so the
//! primary representation is a [`BesselSequence`]: for one argument `x` and all
//! orders `0..=n_max` it stores the logarithms of the exponentially scaled
//! values `e^{-x} I_n(x)` and `e^{x} K_n(x)` together with the order-to-order
//! ratios
//!
//! ```text
//! h_n = I_{n+1}(x) / I_n(x)      (continued fraction at the top order, then downward)
//! r_n = K_{n+1}(x) / K_n(x)      (K_0, K_1 directly, then upward)
//! ```
//!
//! Both recurrence directions are the numerically stable ones. `I_n` is closed
//! through the Wronskian `I_n K_{n+1} + I_{n+1} K_n = 1/x`, so no separate
//! normalisation of the `I` sequence is needed. Log-scaled values never
//! overflow; the plain `f64` view in [`ScaledBesselPoint`] reports a range
//! error when a value leaves the representable range.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Default ceiling on |n| for the single-point evaluators.
pub const DEFAULT_MAX_ORDER: usize = 512;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_CUTOFF: f64 = 2.0;
const CF_MAX_ITER: usize = 5_000_000;

/// Scaled Bessel values at one `(n, x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledBesselPoint {
    pub order: i64,
    pub x: f64,
    /// `e^{-x} I_n(x)`
    pub i_scaled: f64,
    /// `e^{x} K_n(x)`
    pub k_scaled: f64,
    /// `e^{-x} I'_n(x)`
    pub i_prime_scaled: f64,
    /// `e^{x} K'_n(x)` (negative)
    pub k_prime_scaled: f64,
}

impl ScaledBesselPoint {
    /// `I K' - I' K`, which equals `-1/x`.
    pub fn wronskian(&self) -> f64 {
        self.i_scaled * self.k_prime_scaled - self.i_prime_scaled * self.k_scaled
    }
}

/// Logarithms of the scaled values at one `(n, x)`; finite for every valid input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogBesselPoint {
    pub order: i64,
    pub x: f64,
    pub ln_i_scaled: f64,
    pub ln_k_scaled: f64,
    pub ln_i_prime_scaled: f64,
    /// `ln |e^{x} K'_n(x)|`
    pub ln_k_prime_scaled_abs: f64,
}

impl LogBesselPoint {
    /// `x (I K' - I' K)`, which equals `-1`. Evaluated without leaving log space.
    pub fn normalized_wronskian(&self) -> f64 {
        let ik = (self.x.ln() + self.ln_i_scaled + self.ln_k_scaled).exp();
        let k_term = (self.ln_k_prime_scaled_abs - self.ln_k_scaled).exp();
        let i_term = (self.ln_i_prime_scaled - self.ln_i_scaled).exp();
        -ik * (k_term + i_term)
    }
}

fn check_argument(x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("Bessel argument must be positive and finite, got {x}")))
    }
}

fn check_order(n: i64, max_order: usize) -> Result<usize> {
    let m = n.unsigned_abs() as usize;
    if m > max_order {
        return Err(Error::Domain(format!("order |{n}| exceeds ceiling {max_order}")));
    }
    Ok(m)
}

/// `(e^{x} K_0(x), e^{x} K_1(x))` for `x > 0`.
pub(crate) fn k01_scaled(x: f64) -> (f64, f64) {
    if x <= SERIES_CUTOFF {
        k01_series(x)
    } else {
        k01_steed(x)
    }
}

// Ascending series, A&S 9.6.11 with n = 0, 1.
fn k01_series(x: f64) -> (f64, f64) {
    let y = 0.25 * x * x;
    let ln_half = (0.5 * x).ln();

    let mut term0 = 1.0;
    let mut i0 = 1.0;
    let mut k0_sum = 0.0;
    let mut term1 = 1.0;
    let mut i1_sum = 1.0;
    // psi(1) + psi(2) = 1 - 2 gamma
    let mut psi_sum = 1.0 - 2.0 * EULER_GAMMA;
    let mut harmonic = 0.0;
    for k in 1..200 {
        let kf = k as f64;
        harmonic += 1.0 / kf;
        term0 *= y / (kf * kf);
        term1 *= y / (kf * (kf + 1.0));
        i0 += term0;
        k0_sum += harmonic * term0;
        i1_sum += term1;
        let psi = 2.0 * (harmonic - EULER_GAMMA) + 1.0 / (kf + 1.0);
        psi_sum += psi * term1;
        if term0 < 1e-18 * i0 && term1 < 1e-18 * i1_sum {
            break;
        }
    }
    let k0 = -(ln_half + EULER_GAMMA) * i0 + k0_sum;
    let i1 = 0.5 * x * i1_sum;
    let k1 = 1.0 / x + ln_half * i1 - 0.25 * x * psi_sum;
    let e = x.exp();
    (k0 * e, k1 * e)
}

// Steed's continued fraction (Temme's CF2) for K_0, K_1 at x > 2.
fn k01_steed(x: f64) -> (f64, f64) {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..CF_MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

/// `I_{n+1}(x) / I_n(x)` at a single order, by modified Lentz on the
/// continued fraction `1/(2(n+1)/x + 1/(2(n+2)/x + ...))`.
fn i_ratio_cf(n: usize, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = TINY;
    let mut c = f;
    let mut d = 0.0;
    for i in 1..CF_MAX_ITER {
        let b = 2.0 * (n + i) as f64 / x;
        d += b;
        if d == 0.0 {
            d = TINY;
        }
        c = b + 1.0 / c;
        if c == 0.0 {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    f
}

/// Ratios `h_n = I_{n+1}(x)/I_n(x)` for `n = 0..=n_max`.
#[derive(Debug, Clone)]
pub struct IRatioSequence {
    x: f64,
    h: Vec<f64>,
}

impl IRatioSequence {
    pub fn new(x: f64, n_max: usize) -> Result<Self> {
        check_argument(x)?;
        let mut h = vec![0.0; n_max + 1];
        h[n_max] = i_ratio_cf(n_max, x);
        for n in (1..=n_max).rev() {
            h[n - 1] = 1.0 / (2.0 * n as f64 / x + h[n]);
        }
        Ok(Self { x, h })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn n_max(&self) -> usize {
        self.h.len() - 1
    }

    pub fn ratio(&self, n: usize) -> f64 {
        self.h[n]
    }

    /// `f_n(x) - n = x I_{n+1}/I_n`, where `f_n = x I'_n / I_n`.
    pub fn f_excess(&self, n: usize) -> f64 {
        self.x * self.h[n]
    }

    /// `f_n(x) = x I'_n(x) / I_n(x)`.
    pub fn f(&self, n: usize) -> f64 {
        n as f64 + self.f_excess(n)
    }
}

/// Ratios `r_n = K_{n+1}(x)/K_n(x)` for `n = 0..=n_max` plus `ln(e^x K_0(x))`.
#[derive(Debug, Clone)]
pub struct KRatioSequence {
    x: f64,
    ln_k0_scaled: f64,
    r: Vec<f64>,
}

impl KRatioSequence {
    pub fn new(x: f64, n_max: usize) -> Result<Self> {
        check_argument(x)?;
        let (k0, k1) = k01_scaled(x);
        let mut r = Vec::with_capacity(n_max + 1);
        r.push(k1 / k0);
        for n in 1..=n_max {
            let prev = r[n - 1];
            r.push(1.0 / prev + 2.0 * n as f64 / x);
        }
        Ok(Self { x, ln_k0_scaled: k0.ln(), r })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn n_max(&self) -> usize {
        self.r.len() - 1
    }

    pub fn ratio(&self, n: usize) -> f64 {
        self.r[n]
    }

    /// `ln(e^x K_0(x))`
    pub fn ln_k0_scaled(&self) -> f64 {
        self.ln_k0_scaled
    }

    /// `g_n(x) - n`, where `g_n = -x K'_n / K_n`.
    pub fn g_excess(&self, n: usize) -> f64 {
        if n == 0 {
            self.x * self.r[0]
        } else {
            self.x / self.r[n - 1]
        }
    }

    /// `g_n(x) = -x K'_n(x) / K_n(x)`.
    pub fn g(&self, n: usize) -> f64 {
        n as f64 + self.g_excess(n)
    }
}

/// Log-scaled `I_n`, `K_n` and their ratio sequences at one argument.
#[derive(Debug, Clone)]
pub struct BesselSequence {
    i: IRatioSequence,
    k: KRatioSequence,
    ln_i_scaled: Vec<f64>,
    ln_k_scaled: Vec<f64>,
}

impl BesselSequence {
    pub fn new(x: f64, n_max: usize) -> Result<Self> {
        let i = IRatioSequence::new(x, n_max)?;
        let k = KRatioSequence::new(x, n_max)?;
        let ln_x = x.ln();
        let mut ln_k_scaled = Vec::with_capacity(n_max + 1);
        let mut ln_i_scaled = Vec::with_capacity(n_max + 1);
        let mut acc = k.ln_k0_scaled;
        for n in 0..=n_max {
            if n > 0 {
                acc += k.r[n - 1].ln();
            }
            ln_k_scaled.push(acc);
            // Wronskian closure: I_n = 1 / (x K_n (r_n + h_n)).
            ln_i_scaled.push(-ln_x - acc - (k.r[n] + i.h[n]).ln());
        }
        Ok(Self { i, k, ln_i_scaled, ln_k_scaled })
    }

    pub fn x(&self) -> f64 {
        self.i.x
    }

    pub fn n_max(&self) -> usize {
        self.ln_i_scaled.len() - 1
    }

    /// `ln(e^{-x} I_n(x))`
    pub fn ln_i_scaled(&self, n: usize) -> f64 {
        self.ln_i_scaled[n]
    }

    /// `ln(e^{x} K_n(x))`
    pub fn ln_k_scaled(&self, n: usize) -> f64 {
        self.ln_k_scaled[n]
    }

    pub fn i_ratios(&self) -> &IRatioSequence {
        &self.i
    }

    pub fn k_ratios(&self) -> &KRatioSequence {
        &self.k
    }

    pub fn f(&self, n: usize) -> f64 {
        self.i.f(n)
    }

    pub fn g(&self, n: usize) -> f64 {
        self.k.g(n)
    }
}

/// `ln(e^{-|z|} |I_k(z)|)` for `k = 0..=k_max`, including `z = 0`.
///
/// The translation factors `I_{n-m}(λ a δ)` need the origin (concentric
/// configuration) where only `k = 0` survives.
#[derive(Debug, Clone)]
pub(crate) struct TranslationSequence {
    pub ln_i_scaled: Vec<f64>,
}

impl TranslationSequence {
    pub fn new(z: f64, k_max: usize) -> Result<Self> {
        let abs_z = z.abs();
        if abs_z == 0.0 {
            let mut ln_i_scaled = vec![f64::NEG_INFINITY; k_max + 1];
            ln_i_scaled[0] = 0.0;
            return Ok(Self { ln_i_scaled });
        }
        let seq = BesselSequence::new(abs_z, k_max)?;
        Ok(Self { ln_i_scaled: seq.ln_i_scaled })
    }
}

/// Evaluate `e^{-x} I_n`, `e^{x} K_n` and their derivatives at one point.
pub fn eval_scaled(n: i64, x: f64) -> Result<ScaledBesselPoint> {
    eval_scaled_with_ceiling(n, x, DEFAULT_MAX_ORDER)
}

pub fn eval_scaled_with_ceiling(n: i64, x: f64, max_order: usize) -> Result<ScaledBesselPoint> {
    let m = check_order(n, max_order)?;
    check_argument(x)?;
    let seq = BesselSequence::new(x, m + 1)?;
    let val = |ln: f64, what: &str| -> Result<f64> {
        let v = ln.exp();
        if v == 0.0 || !v.is_finite() {
            Err(Error::Range(format!(
                "{what} at n = {n}, x = {x} is outside f64 range (ln of scaled value = {ln:.6e})"
            )))
        } else {
            Ok(v)
        }
    };
    let i_scaled = val(seq.ln_i_scaled(m), "e^-x I_n")?;
    let k_scaled = val(seq.ln_k_scaled(m), "e^x K_n")?;
    // I'_n = (I_{n-1} + I_{n+1})/2, K'_n = -(K_{n-1} + K_{n+1})/2, with I_{-1} = I_1.
    let below = if m == 0 { 1 } else { m - 1 };
    let i_prime_scaled = 0.5 * (seq.ln_i_scaled(below).exp() + seq.ln_i_scaled(m + 1).exp());
    let k_prime_scaled = -0.5 * (seq.ln_k_scaled(below).exp() + seq.ln_k_scaled(m + 1).exp());
    if !k_prime_scaled.is_finite() || i_prime_scaled == 0.0 {
        return Err(Error::Range(format!("derivative at n = {n}, x = {x} is outside f64 range")));
    }
    Ok(ScaledBesselPoint { order: n, x, i_scaled, k_scaled, i_prime_scaled, k_prime_scaled })
}

/// Log-space variant of [`eval_scaled`]; never overflows.
pub fn eval_log(n: i64, x: f64) -> Result<LogBesselPoint> {
    eval_log_with_ceiling(n, x, DEFAULT_MAX_ORDER)
}

pub fn eval_log_with_ceiling(n: i64, x: f64, max_order: usize) -> Result<LogBesselPoint> {
    let m = check_order(n, max_order)?;
    check_argument(x)?;
    let seq = BesselSequence::new(x, m + 1)?;
    let below = if m == 0 { 1 } else { m - 1 };
    let half_sum = |lo: f64, hi: f64| {
        let (big, small) = if lo >= hi { (lo, hi) } else { (hi, lo) };
        big + (small - big).exp().ln_1p() - std::f64::consts::LN_2
    };
    Ok(LogBesselPoint {
        order: n,
        x,
        ln_i_scaled: seq.ln_i_scaled(m),
        ln_k_scaled: seq.ln_k_scaled(m),
        ln_i_prime_scaled: half_sum(seq.ln_i_scaled(below), seq.ln_i_scaled(m + 1)),
        ln_k_prime_scaled_abs: half_sum(seq.ln_k_scaled(below), seq.ln_k_scaled(m + 1)),
    })
}

/// `f(x) = x I'_n(x) / I_n(x)`; increasing in `x`, from `|n|` at the origin.
pub fn ratio_f(n: i64, x: f64) -> Result<f64> {
    let m = check_order(n, DEFAULT_MAX_ORDER)?;
    Ok(IRatioSequence::new(x, m)?.f(m))
}

/// `g(u) = -u K'_n(u) / K_n(u)`; positive and increasing in `u`.
pub fn ratio_g(n: i64, u: f64) -> Result<f64> {
    let m = check_order(n, DEFAULT_MAX_ORDER)?;
    Ok(KRatioSequence::new(u, m)?.g(m))
}

/// Truncated collinear addition sum and its tail diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrafSum {
    pub value: f64,
    /// Largest addend at `|m| = m_cut`.
    pub last_term: f64,
    /// Geometric extrapolation of the discarded tail; infinite if the
    /// addends are not yet decreasing at the cut.
    pub tail_bound: f64,
}

/// `Σ_{|m| ≤ m_cut} K_m(y + l) I_{m-p-n}(y - l)`, which converges to
/// `K_{n+p}(2l)` for `y > l > 0`.
pub fn graf_collinear_sum(n: i64, p: i64, y: f64, l: f64, m_cut: usize) -> Result<GrafSum> {
    if !(l > 0.0 && y > l && y.is_finite()) {
        return Err(Error::Domain(format!("addition sum requires y > l > 0, got y = {y}, l = {l}")));
    }
    if m_cut < 1 {
        return Err(Error::Domain("m_cut must be at least 1".into()));
    }
    let shift = n + p;
    let k_seq = BesselSequence::new(y + l, m_cut)?;
    let i_seq = BesselSequence::new(y - l, m_cut + shift.unsigned_abs() as usize)?;
    // e^{-(y+l)} e^{(y-l)} envelope of the scaled product.
    let envelope = -2.0 * l;
    let term = |m: i64| -> f64 {
        let k = m.unsigned_abs() as usize;
        let j = (m - shift).unsigned_abs() as usize;
        (k_seq.ln_k_scaled(k) + i_seq.ln_i_scaled(j) + envelope).exp()
    };
    let mut sum = NeumaierSum::default();
    for m in -(m_cut as i64)..=(m_cut as i64) {
        sum.add(term(m));
    }
    let mc = m_cut as i64;
    let mut last_term: f64 = 0.0;
    let mut tail_bound = 0.0;
    for (edge, inner) in [(mc, mc - 1), (-mc, -mc + 1)] {
        let t = term(edge);
        let q = t / term(inner);
        last_term = last_term.max(t);
        tail_bound += if q < 1.0 { t * q / (1.0 - q) } else { f64::INFINITY };
    }
    Ok(GrafSum { value: sum.total(), last_term, tail_bound })
}

/// Neumaier's compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<T: IntoIterator<Item = f64>>(iter: T) -> Self {
        let mut s = Self::default();
        for v in iter {
            s.add(v);
        }
        s
    }
}
