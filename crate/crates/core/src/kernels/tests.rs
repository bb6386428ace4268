use proptest::prelude::*;

use super::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// Composite Simpson rule; test-only quadrature oracle.
fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, panels: usize) -> f64 {
    let n = 2 * panels;
    let h = (hi - lo) / n as f64;
    let mut acc = f(lo) + f(hi);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(lo + h * k as f64);
    }
    acc * h / 3.0
}

#[test]
fn wiener_examples() {
    assert_eq!(eval_wiener(1.0, 2.0, 3.0, 1.0).unwrap(), 1.0);
    assert_eq!(eval_wiener(0.0, 5.0, 7.0, 9.0).unwrap(), 0.0);
    assert_eq!(eval_wiener(2.0, 2.0, 2.0, 2.0).unwrap(), 4.0);
    assert!(matches!(eval_wiener(-1.0, 1.0, 1.0, 1.0), Err(Error::Domain(_))));
}

#[test]
fn ou_examples() {
    let p = OUParams::new(0.5, 0.5, 1.0).unwrap();
    assert_eq!(eval_ou(&p, 0.0, 0.0, 0.0, 0.0).unwrap(), 1.0);
    assert!(close(eval_ou(&p, 0.0, 0.0, 9f64.ln(), 0.0).unwrap(), 1.0 / 3.0, 1e-15));
    assert!(OUParams::new(0.0, 1.0, 1.0).is_err());
    assert!(OUParams::new(1.0, 1.0, -1.0).is_err());
    assert_eq!(OUParams::new(0.25, 2.0, 3.0).unwrap().variance(), 9.0 / 2.0);
}

#[test]
fn ou_shift_invariance_is_exact_for_dyadic_shifts() {
    let p = OUParams::new(0.7, 1.3, 2.0).unwrap();
    let base = eval_ou(&p, 0.25, -1.5, 1.125, 0.5).unwrap();
    for (c, d) in [(1.0, 2.0), (-0.5, 0.25), (8.0, -4.0)] {
        let shifted = eval_ou(&p, 0.25 + c, -1.5 + d, 1.125 + c, 0.5 + d).unwrap();
        assert_eq!(shifted, base);
    }
}

#[test]
fn bivariate_bridge_examples() {
    assert_eq!(eval_bivariate_bridge(0.5, 0.5, 0.5, 0.5).unwrap(), 0.1875);
    for (s, t) in [(0.3, 0.8), (1.0, 0.2), (0.0, 0.0)] {
        assert_eq!(eval_bivariate_bridge(1.0, 1.0, s, t).unwrap(), 0.0);
        assert_eq!(eval_bivariate_bridge(0.0, 0.6, s, t).unwrap(), 0.0);
    }
    assert!(eval_bivariate_bridge(1.1, 0.5, 0.5, 0.5).is_err());
}

#[test]
fn tied_down_examples() {
    assert_eq!(eval_tied_down_bridge(0.25, 0.5, 0.5, 0.75).unwrap(), 0.015625);
    assert_eq!(eval_tied_down_bridge(0.5, 0.5, 0.5, 0.5).unwrap(), 0.0625);
    for b in [0.0, 1.0] {
        assert_eq!(eval_tied_down_bridge(b, 0.3, 0.4, 0.6).unwrap(), 0.0);
        assert_eq!(eval_tied_down_bridge(0.3, b, 0.4, 0.6).unwrap(), 0.0);
        assert_eq!(eval_tied_down_bridge(0.3, 0.4, b, 0.6).unwrap(), 0.0);
        assert_eq!(eval_tied_down_bridge(0.3, 0.4, 0.6, b).unwrap(), 0.0);
    }
    assert!(eval_tied_down_bridge(-0.1, 0.5, 0.5, 0.5).is_err());
}

#[test]
fn scaled_bridge_examples() {
    assert!(close(eval_scaled_bridge_axis(1.0, 1.0, 0.25, 0.5).unwrap(), 0.125, 1e-16));
    for s in [0.0, 0.3, 0.999, 1.0] {
        assert_eq!(eval_scaled_bridge_axis(1.0, 0.5, s, 1.0).unwrap(), 0.0);
        assert_eq!(eval_scaled_bridge_axis(1.0, 0.5, 1.0, s).unwrap(), 0.0);
    }
    assert!(eval_scaled_bridge_axis(1.0, 0.5, 1.2, 0.5).is_err());
    assert!(eval_scaled_bridge_axis(1.0, -0.5, 0.2, 0.5).is_err());
}

#[test]
fn scaled_bridge_variance_matches_quadrature() {
    // Var X(s) = (S−s)^{2α} ∫_0^s (S−u)^{−2α} du for dX = −α X/(S−t) dt + dW.
    let (horizon, alpha, s) = (2.0_f64, 0.3_f64, 0.5_f64);
    let integral = simpson(|u| (horizon - u).powf(-2.0 * alpha), 0.0, s, 4000);
    let oracle = (horizon - s).powf(2.0 * alpha) * integral;
    let value = eval_scaled_bridge_axis(horizon, alpha, s, s).unwrap();
    assert!(close(value, oracle, 1e-10), "{value} vs {oracle}");
}

#[test]
fn scaled_bridge_covariance_matches_quadrature_both_branches() {
    for (horizon, alpha) in [(1.5, 0.5), (3.0, 2.0), (1.0, 0.49999), (2.5, 0.1)] {
        let (s1, s2) = (0.4 * horizon, 0.7 * horizon);
        let integral = simpson(|u: f64| (horizon - u).powf(-2.0 * alpha), 0.0, s1, 4000);
        let oracle = (horizon - s1).powf(alpha) * (horizon - s2).powf(alpha) * integral;
        let value = eval_scaled_bridge_axis(horizon, alpha, s2, s1).unwrap();
        assert!(close(value, oracle, 1e-10 * oracle.abs().max(1.0)), "S={horizon} a={alpha}: {value} vs {oracle}");
    }
}

#[test]
fn scaled_bridge_unit_parameters_reduce_to_bridge_axis() {
    let pts: Vec<f64> = (0..50).map(|k| k as f64 / 49.0).collect();
    for &a in &pts {
        for &b in &pts {
            let scaled = eval_scaled_bridge_axis(1.0, 1.0, a, b).unwrap();
            let bridge = AxisKernel::Bridge.eval(a, b).unwrap();
            assert!(close(scaled, bridge, 1e-15), "({a},{b}): {scaled} vs {bridge}");
        }
    }
}

#[test]
fn kiefer_examples() {
    assert_eq!(eval_kiefer(0.25, 0.5, 2.0, 3.0).unwrap(), 0.25);
    assert_eq!(eval_kiefer(1.0, 0.4, 2.0, 3.0).unwrap(), 0.0);
    assert_eq!(eval_kiefer(0.3, 0.4, 0.0, 3.0).unwrap(), 0.0);
    assert!(eval_kiefer(0.3, 0.4, -1.0, 3.0).is_err());
}

#[test]
fn fg_bridge_examples() {
    let e = CdfSpec::exponential(1.0).unwrap();
    let (l2, l4) = (2f64.ln(), 4f64.ln());
    assert!(close(eval_fg_bridge(&e, &e, l2, l2, l4, l4).unwrap(), 0.015625, 1e-16));
    assert_eq!(eval_fg_bridge(&e, &e, 0.0, 1.0, 2.0, 3.0).unwrap(), 0.0);
    let u = CdfSpec::uniform();
    assert!(eval_fg_bridge(&u, &u, 1.0, 0.5, 0.5, 0.5).is_err());
}

#[test]
fn uniform_fg_equals_tied_down_bitwise() {
    let u = CdfSpec::uniform();
    let pts: Vec<f64> = (0..20).map(|k| k as f64 / 20.0).collect();
    for &s1 in &pts {
        for &t2 in &pts {
            let (t1, s2) = (0.5 * s1 + 0.1, 0.9 - 0.4 * t2);
            let fg = eval_fg_bridge(&u, &u, s1, t1, s2, t2).unwrap();
            let td = eval_tied_down_bridge(s1, t1, s2, t2).unwrap();
            assert_eq!(fg.to_bits(), td.to_bits());
        }
    }
}

#[test]
fn kernel2d_matches_free_functions() {
    let p = OUParams::new(0.5, 0.5, 1.0).unwrap();
    let ou = Kernel2D::ou(p);
    assert!(close(ou.eval(0.0, 0.0, 9f64.ln(), 0.0).unwrap(), 1.0 / 3.0, 1e-15));
    assert_eq!(Kernel2D::kiefer().eval(0.25, 2.0, 0.5, 3.0).unwrap(), 0.25);
    assert_eq!(Kernel2D::tied_down_bridge().variance(0.5, 0.5).unwrap(), 0.0625);
    assert_eq!(Kernel2D::bivariate_bridge().variance(0.5, 0.5).unwrap(), 0.1875);
    assert!(Kernel2D::wiener().check_point(-1.0, 0.0).is_err());
}

#[test]
fn covariance_matrix_examples() {
    let g = GridSpec::new(vec![0.5], vec![0.5]).unwrap();
    let m = covariance_matrix(&Kernel2D::tied_down_bridge(), &g).unwrap();
    assert_eq!(m.shape(), (1, 1));
    assert_eq!(m[(0, 0)], 0.0625);

    let g = GridSpec::new(vec![0.0, 0.5, 1.0], vec![0.25, 2.0]).unwrap();
    let m = covariance_matrix(&Kernel2D::wiener(), &g).unwrap();
    for idx in 0..2 {
        assert!(m.row(idx).iter().all(|&v| v == 0.0));
        assert!(m.column(idx).iter().all(|&v| v == 0.0));
    }
    assert_eq!(m, m.transpose());
}

#[test]
fn covariance_matrix_of_separable_kernel_is_kronecker() {
    let g = GridSpec::interior(4, (0.0, 2.0), 3, (0.0, 3.0)).unwrap();
    let k = Kernel2D::scaled_bridge(2.0, 0.3, 3.0, 2.0).unwrap();
    let Kernel2D::Separable { s_axis, t_axis, scale } = &k else { unreachable!() };
    let ks = axis_matrix(s_axis, g.s_points()).unwrap();
    let kt = axis_matrix(t_axis, g.t_points()).unwrap();
    let kron = ks.kronecker(&kt) * *scale;
    let dense = covariance_matrix(&k, &g).unwrap();
    assert!((kron - dense).amax() <= 1e-15);
}

#[test]
fn covariance_matrix_rejects_out_of_domain_grid() {
    let g = GridSpec::new(vec![0.5, 1.5], vec![0.5]).unwrap();
    assert!(covariance_matrix(&Kernel2D::tied_down_bridge(), &g).is_err());
}

fn catalog() -> Vec<(Kernel2D, f64, f64)> {
    vec![
        (Kernel2D::wiener(), 3.0, 3.0),
        (Kernel2D::ou(OUParams::new(0.8, 0.3, 1.7).unwrap()), 4.0, 4.0),
        (Kernel2D::bivariate_bridge(), 1.0, 1.0),
        (Kernel2D::tied_down_bridge(), 1.0, 1.0),
        (Kernel2D::scaled_bridge(2.0, 0.3, 3.0, 2.0).unwrap(), 2.0, 3.0),
        (Kernel2D::scaled_bridge(1.0, 0.5, 1.0, 0.5).unwrap(), 1.0, 1.0),
        (Kernel2D::kiefer(), 1.0, 5.0),
        (Kernel2D::fg_bridge(CdfSpec::exponential(1.3).unwrap(), CdfSpec::uniform()), 6.0, 0.999),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn kernels_are_exactly_symmetric(u in prop::array::uniform4(0.0f64..1.0)) {
        for (k, ls, lt) in catalog() {
            let (s1, t1, s2, t2) = (u[0] * ls, u[1] * lt, u[2] * ls, u[3] * lt);
            let a = k.eval(s1, t1, s2, t2).unwrap();
            let b = k.eval(s2, t2, s1, t1).unwrap();
            prop_assert_eq!(a.to_bits(), b.to_bits(), "{}", k.label());
        }
    }

    #[test]
    fn bridge_kernels_vanish_on_zero_sets(u in prop::array::uniform3(0.0f64..1.0)) {
        let (s, t, x) = (u[0], u[1], u[2]);
        for b in [0.0, 1.0] {
            prop_assert_eq!(eval_tied_down_bridge(b, t, s, x).unwrap(), 0.0);
            prop_assert_eq!(eval_tied_down_bridge(s, b, x, t).unwrap(), 0.0);
        }
        prop_assert_eq!(eval_bivariate_bridge(0.0, t, s, x).unwrap(), 0.0);
        prop_assert_eq!(eval_bivariate_bridge(s, 0.0, x, t).unwrap(), 0.0);
        prop_assert_eq!(eval_kiefer(0.0, s, t, x).unwrap(), 0.0);
        prop_assert_eq!(eval_kiefer(s, x, 0.0, t).unwrap(), 0.0);
        for alpha in [0.3, 0.5, 1.0, 2.0] {
            prop_assert_eq!(eval_scaled_bridge_axis(2.0, alpha, 2.0, 2.0 * s).unwrap(), 0.0);
            prop_assert_eq!(eval_scaled_bridge_axis(2.0, alpha, 0.0, 2.0 * s).unwrap(), 0.0);
        }
    }
}

use crate::grid::GridSpec;
