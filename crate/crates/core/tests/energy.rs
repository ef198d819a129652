use casimir_cyl::energy::{
    force, interaction_energy, log_det_one_minus, pc_correction_energy, pc_deviation_energy, ForceCoordinate,
};
use casimir_cyl::kernels::{build_concentric, build_kernel, default_m_cutoff, KernelOptions};
use casimir_cyl::media::polar_node;
use casimir_cyl::{GeometryConfig, MediaTriple, PermittivityModel, QuadratureSpec, Scheme};
use proptest::prelude::*;

fn quick() -> QuadratureSpec {
    QuadratureSpec { rel_tol: 1e-5, ..QuadratureSpec::default() }
}

#[test]
fn polar_and_cartesian_schemes_agree() {
    let g = GeometryConfig::eccentric(1.0, 2.0, 0.0).unwrap();
    let m = MediaTriple::constant(2.0, 5.0, 50.0);
    let with = |scheme| interaction_energy(&g, &m, &QuadratureSpec { scheme, ..QuadratureSpec::default() }).unwrap();
    let (polar, cart) = (with(Scheme::PolarProduct), with(Scheme::CartesianProduct));
    assert!(polar.converged && cart.converged);
    assert!((polar.value - cart.value).abs() <= polar.est_error + cart.est_error, "{polar:?} {cart:?}");
}

#[test]
fn integrand_decays_at_gap_rate() {
    let g = GeometryConfig::eccentric(1.0, 2.0, 0.3).unwrap();
    let m = MediaTriple::constant(2.0, 5.0, 50.0);
    let two_gap = 2.0 * g.min_gap();
    for phi in [0.2, 0.8, 1.4] {
        let vals: Vec<(f64, f64)> = [2.0, 4.0, 8.0, 12.0]
            .iter()
            .map(|&eta| {
                let node = polar_node(&m, eta, phi).unwrap();
                let k = build_kernel(&g, &node, 40, default_m_cutoff(&g, &node, 40), &KernelOptions::default()).unwrap();
                (eta, log_det_one_minus(&k).unwrap().abs())
            })
            .collect();
        let rates: Vec<f64> = vals.windows(2).map(|w| -(w[1].1 / w[0].1).ln() / (w[1].0 - w[0].0)).collect();
        // Exponential decay at twice the gap times an algebraic prefactor:
        // the local rate climbs towards 2 · gap.
        assert!(rates.windows(2).all(|w| w[1] > w[0]), "{rates:?}");
        assert!(rates.iter().all(|&r| r > 0.9 * two_gap && r < two_gap), "{rates:?}");
    }
}

#[test]
fn node_log_det_shrinks_as_outer_radius_grows() {
    let m = MediaTriple::constant(2.0, 5.0, 50.0);
    for (xi, kz) in [(0.3, 0.0), (1.0, 0.5), (2.0, 2.0)] {
        let node = m.node(xi, kz).unwrap();
        let vals: Vec<f64> = [1.3, 1.6, 2.0, 3.0, 5.0]
            .iter()
            .map(|&b| {
                let k = build_concentric(&GeometryConfig::concentric(1.0, b).unwrap(), &node, 60).unwrap();
                log_det_one_minus(&k).unwrap().abs()
            })
            .collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]), "{vals:?}");
    }
}

#[test]
fn convergence_estimate_bounds_refinement() {
    let g = GeometryConfig::eccentric(1.0, 2.0, 0.3).unwrap();
    let m = MediaTriple::constant(2.0, 5.0, 50.0);
    let base = interaction_energy(&g, &m, &QuadratureSpec::default()).unwrap();
    // Twice the nodes per panel and a tighter truncation, which at least
    // doubles N and M.
    let fine_spec = QuadratureSpec { radial_nodes: 12, angular_nodes: 12, trunc_tol: 1e-14, ..QuadratureSpec::default() };
    let fine = interaction_energy(&g, &m, &fine_spec).unwrap();
    assert!(fine.n_used >= 2 * base.n_used && fine.m_used > base.m_used);
    assert!((base.value - fine.value).abs() <= base.est_error, "{base:?} {fine:?}");
}

#[test]
fn first_order_correction_approaches_exact_departure() {
    let g = GeometryConfig::cylinder_plane_gap(1.0, 1.0).unwrap();
    let mut gaps = Vec::new();
    for e in [1e3, 1e4, 1e5] {
        let m = MediaTriple::constant(e, 1.0, e);
        let exact = pc_deviation_energy(&g, &m, &quick()).unwrap().value;
        let linear = pc_correction_energy(&g, &m, &quick()).unwrap().value;
        assert!(exact > 0.0 && linear > 0.0);
        gaps.push(linear / exact - 1.0);
    }
    // The expansion replaces I'_n/I_n(λ1 a) by 1, which fails for orders
    // comparable to λ1 a; the mismatch fades only logarithmically.
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
}

#[test]
fn plane_force_follows_energy_sign() {
    let g = GeometryConfig::cylinder_plane_gap(1.0, 1.0).unwrap();
    let repulsive = force(&g, &MediaTriple::constant(2.0, 5.0, 50.0), &quick(), ForceCoordinate::Gap, 0.05).unwrap();
    let attractive = force(&g, &MediaTriple::constant(5.0, 2.0, 50.0), &quick(), ForceCoordinate::Gap, 0.05).unwrap();
    assert!(repulsive > 0.0 && attractive < 0.0, "{repulsive} {attractive}");
}

#[test]
fn dispersive_media_use_cartesian_rule() {
    let g = GeometryConfig::cylinder_plane_gap(1.0, 1.0).unwrap();
    let plasma = PermittivityModel::Plasma { omega_p: 3.0 };
    let m = MediaTriple::new(plasma, PermittivityModel::Constant(1.0), plasma);
    let e = interaction_energy(&g, &m, &quick()).unwrap();
    assert!(e.converged && e.value < 0.0, "{e:?}");
    let gap_plasma = MediaTriple::new(PermittivityModel::Constant(2.0), plasma, PermittivityModel::Constant(2.0));
    let polar = QuadratureSpec { scheme: Scheme::PolarProduct, ..quick() };
    assert!(interaction_energy(&g, &gap_plasma, &polar).is_err());
}

fn sign_class(e: [f64; 3]) -> f64 {
    if (e[0] < e[1] && e[1] < e[2]) || (e[0] > e[1] && e[1] > e[2]) { 1.0 } else { -1.0 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn energy_sign_follows_ordering(
        lo in 1.0f64..4.0, mid_gap in 0.5f64..20.0, hi_gap in 0.5f64..60.0,
    ) {
        let values = [lo, lo + mid_gap, lo + mid_gap + hi_gap];
        let g = GeometryConfig::concentric(1.0, 2.0).unwrap();
        let spec = QuadratureSpec { rel_tol: 1e-3, ..QuadratureSpec::default() };
        for perm in [[0, 1, 2], [2, 1, 0], [1, 0, 2], [2, 0, 1], [0, 2, 1], [1, 2, 0]] {
            let eps = [values[perm[0]], values[perm[1]], values[perm[2]]];
            let e = interaction_energy(&g, &MediaTriple::constant(eps[0], eps[1], eps[2]), &spec).unwrap();
            prop_assert_eq!(e.value.signum(), sign_class(eps), "{:?}: {}", eps, e.value);
        }
    }
}
