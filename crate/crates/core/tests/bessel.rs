mod common;

use casimir_cyl::bessel::{
    eval_log, eval_scaled, graf_collinear_sum, ratio_f, ratio_g, BesselSequence, DEFAULT_MAX_ORDER,
};
use proptest::prelude::*;

/// `ln` of a decimal string whose exponent may exceed the f64 range.
fn ln_decimal(s: &str) -> f64 {
    match s.split_once(['e', 'E']) {
        Some((mantissa, exp)) => mantissa.parse::<f64>().unwrap().ln() + exp.parse::<f64>().unwrap() * std::f64::consts::LN_10,
        None => s.parse::<f64>().unwrap().ln(),
    }
}

#[test]
fn matches_arbitrary_precision_table() {
    let table = include_str!("data/bessel_oracle.csv");
    let mut rows = 0;
    for line in table.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let n: i64 = cols[0].parse().unwrap();
        let x: f64 = cols[1].parse().unwrap();
        let p = eval_log(n, x).unwrap();
        // Compare the exponentially scaled logarithms; the allowance covers
        // the rounding of `ln I` itself when it is of order 1e4.
        let tol = 1e-12 + 4e-16 * x;
        let ln_i = ln_decimal(cols[2]) - x;
        let ln_k = ln_decimal(cols[3]) + x;
        assert!((p.ln_i_scaled - ln_i).abs() <= tol * ln_i.abs().max(1.0), "I_{n}({x}): {} vs {ln_i}", p.ln_i_scaled);
        assert!((p.ln_k_scaled - ln_k).abs() <= tol * ln_k.abs().max(1.0), "K_{n}({x}): {} vs {ln_k}", p.ln_k_scaled);
        rows += 1;
    }
    assert_eq!(rows, 176);
}

#[test]
fn wronskian_on_certification_grid() {
    for n in 0..=100 {
        for x in [1e-4, 1e-2, 1.0, 10.0, 100.0, 1e4] {
            let w = eval_log(n, x).unwrap().normalized_wronskian();
            assert!((w + 1.0).abs() < 1e-12, "n = {n}, x = {x}: {w}");
        }
    }
}

#[test]
fn extreme_orders_and_arguments_stay_finite() {
    for n in [0, 1, 100, 511, 512] {
        for x in [1e-4, 1.0, 1e4] {
            let p = eval_log(n, x).unwrap();
            assert!(p.ln_i_scaled.is_finite() && p.ln_k_scaled.is_finite(), "n = {n}, x = {x}");
        }
    }
    let seq = BesselSequence::new(1e4, DEFAULT_MAX_ORDER).unwrap();
    assert!((0..=DEFAULT_MAX_ORDER).all(|k| seq.ln_i_scaled(k).is_finite() && seq.ln_k_scaled(k).is_finite()));
}

#[test]
fn graf_error_shrinks_with_cut_beyond_threshold() {
    let (y, l) = (4.0, 1.0);
    let exact = common::bessel_k(2, 2.0 * l);
    let errors: Vec<f64> = (20..=80)
        .step_by(10)
        .map(|m| (graf_collinear_sum(1, 1, y, l, m).unwrap().value - exact).abs() / exact)
        .collect();
    assert!(errors.windows(2).all(|w| w[1] < w[0] || w[1] < 1e-14), "{errors:?}");
    assert!(errors[6] < 1e-13, "{errors:?}");
}

#[test]
fn graf_rejects_inverted_distances() {
    assert!(graf_collinear_sum(0, 0, 1.0, 2.0, 10).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn agrees_with_integral_representation(n in 0i64..30, x in 0.05f64..30.0) {
        let p = eval_scaled(n, x).unwrap();
        let i = common::i_scaled(n, x);
        // The quadrature oracle only resolves I_n well above its rounding floor.
        prop_assume!(i > 1e-4);
        let k = common::k_scaled(n, x);
        prop_assert!((p.i_scaled / i - 1.0).abs() < 1e-11, "I: {} vs {}", p.i_scaled, i);
        prop_assert!((p.k_scaled / k - 1.0).abs() < 1e-11, "K: {} vs {}", p.k_scaled, k);
    }

    #[test]
    fn order_symmetry(n in 0i64..200, x in 1e-3f64..1e3) {
        let (neg, pos) = (eval_scaled(-n, x).unwrap(), eval_scaled(n, x).unwrap());
        prop_assert_eq!(
            (neg.i_scaled, neg.k_scaled, neg.i_prime_scaled, neg.k_prime_scaled),
            (pos.i_scaled, pos.k_scaled, pos.i_prime_scaled, pos.k_prime_scaled)
        );
    }

    #[test]
    fn wronskian_holds(n in 0i64..100, lx in -4f64..4.0) {
        let x = 10f64.powf(lx);
        prop_assert!((eval_log(n, x).unwrap().normalized_wronskian() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn ratio_f_increasing(n in 0i64..=50, x1 in 1e-3f64..100.0, step in 1e-3f64..50.0) {
        let x2 = (x1 + step).min(100.0);
        prop_assume!(x2 > x1);
        prop_assert!(ratio_f(n, x1).unwrap() < ratio_f(n, x2).unwrap());
    }

    #[test]
    fn ratio_g_increasing(n in 0i64..=50, x1 in 1e-3f64..100.0, step in 1e-3f64..50.0) {
        let x2 = (x1 + step).min(100.0);
        prop_assume!(x2 > x1);
        prop_assert!(ratio_g(n, x1).unwrap() < ratio_g(n, x2).unwrap());
    }
}
