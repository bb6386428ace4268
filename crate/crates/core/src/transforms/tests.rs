use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::grid::GridSpec;

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn logit() -> AxisTransform {
    AxisTransform::new(AxisMap::Logit).unwrap()
}

#[test]
fn logit_transform_examples() {
    let t = logit();
    assert_eq!(t.f(0.5).unwrap(), 1.0);
    assert_eq!(t.g(0.5).unwrap(), 0.25);
    assert!((t.f(0.25).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert_eq!(t.f(0.75).unwrap(), 3.0);
    assert!(t.f(0.0).is_err());
    assert!(t.g(1.0).is_err());
    assert!(t.f(f64::NAN).is_err());
}

#[test]
fn induced_covariance_examples() {
    let td = transform_tied_down();
    let c = induced_covariance(&td, 0.25, 0.5, 0.5, 0.75).unwrap();
    assert!((c - 0.015625).abs() < 1e-15, "{c}");
    assert!(induced_covariance(&td, 0.0, 0.5, 0.5, 0.5).is_err());

    let kiefer = transform_kiefer();
    assert!((induced_covariance(&kiefer, 0.5, 1.0, 0.5, 1.0).unwrap() - 0.25).abs() < 1e-15);
    assert!(kiefer.contains(0.5, 1e6));
    assert!(!kiefer.contains(1.0, 1.0));
}

#[test]
fn scaled_transform_examples() {
    let t = transform_scaled(1.0, 0.3).unwrap();
    assert!((t.limit_at_upper() - 2.5).abs() < 1e-15);
    assert_eq!(transform_scaled(1.0, 0.5).unwrap().limit_at_upper(), f64::INFINITY);
    assert_eq!(transform_scaled(1.0, 0.8).unwrap().limit_at_upper(), f64::INFINITY);

    let half = transform_scaled(2.0, 0.5).unwrap();
    assert!((half.f(1.0).unwrap() - 2.0 * 2f64.ln()).abs() < 1e-15);
    assert!(transform_scaled(0.0, 0.3).is_err());
    assert!(transform_scaled(1.0, -0.1).is_err());
}

#[test]
fn scaled_transform_with_unit_parameters_is_logit() {
    let scaled = transform_scaled(1.0, 1.0).unwrap();
    let l = logit();
    for k in 1..=50 {
        let x = k as f64 / 51.0;
        assert!(rel_close(scaled.f(x).unwrap(), l.f(x).unwrap(), 1e-14), "f at {x}");
        assert!(rel_close(scaled.g(x).unwrap(), l.g(x).unwrap(), 1e-14), "g at {x}");
    }
}

#[test]
fn scaled_transform_approaches_its_limit() {
    // The gap to the limit shrinks like (δ/S)^{1−2α}.
    for (alpha, delta) in [(0.1, 1e-6), (0.3, 1e-12)] {
        let t = transform_scaled(1.0, alpha).unwrap();
        let lim = t.limit_at_upper();
        let v = t.f(1.0 - delta).unwrap();
        let gap = (lim - v) / lim;
        let predicted = delta.powf(1.0 - 2.0 * alpha);
        assert!(gap > 0.0 && (gap / predicted - 1.0).abs() < 1e-3, "alpha={alpha}: {gap} vs {predicted}");
    }
}

#[test]
fn fg_exponential_transform() {
    let rep = transform_fg(CdfSpec::exponential(1.0).unwrap(), CdfSpec::exponential(1.0).unwrap());
    for s in [0.1, 0.5, 1.0, 3.0] {
        assert!(rel_close(rep.s_transform.f(s).unwrap(), s.exp() - 1.0, 1e-14));
    }
    let at = |u: f64| -(-u).ln_1p();
    let c = induced_covariance(&rep, at(0.25), at(0.5), at(0.5), at(0.75)).unwrap();
    assert!((c - 0.015625).abs() < 1e-15, "{c}");
}

#[test]
fn reduced_form_examples() {
    let (scale, u, v) = reduced_wiener_form(&transform_tied_down(), 0.5, 0.5).unwrap();
    assert_eq!((scale, u, v), (0.25, 1.0, 1.0));
    assert!(reduced_wiener_form(&transform_tied_down(), 1.0, 0.5).is_err());
}

#[test]
fn target_kernels_of_catalog_representations() {
    let k = target_kernel(&transform_tied_down()).unwrap();
    assert!(matches!(
        k,
        Kernel2D::Separable {
            s_axis: AxisKernel::Bridge,
            t_axis: AxisKernel::Bridge,
            ..
        }
    ));
    let mut rep = transform_kiefer();
    rep.ou = OUParams::new(1.0, 0.5, 1.0).unwrap();
    assert!(target_kernel(&rep).is_none());
}

fn catalog() -> Vec<OURepresentation> {
    vec![
        transform_tied_down(),
        transform_scaled_field(2.0, 0.3, 1.0, 0.7).unwrap(),
        transform_scaled_field(1.5, 0.5, 3.0, 0.1).unwrap(),
        transform_kiefer(),
        transform_fg(CdfSpec::uniform(), CdfSpec::exponential(2.0).unwrap()),
    ]
}

fn interior_grid(rep: &OURepresentation, n: usize) -> GridSpec {
    let hi = |t: &AxisTransform| if t.upper().is_finite() { t.upper() } else { 5.0 };
    GridSpec::interior(n, (0.0, hi(&rep.s_transform)), n, (0.0, hi(&rep.t_transform))).unwrap()
}

#[test]
fn identity_suite_passes_for_every_representation() {
    for rep in catalog() {
        let target = target_kernel(&rep).unwrap();
        let grid = interior_grid(&rep, 7);
        let report = identity_check(&rep, &target, &grid, 1e-12);
        assert!(report.pass, "{}", report.summary());
        assert_eq!(report.n_entries_tested, 49 * 49);
        assert_eq!(report.n_entries_outside_band, 0);
    }
}

#[test]
fn identity_check_rejects_bivariate_bridge() {
    let rep = transform_tied_down();
    let grid = interior_grid(&rep, 5);
    let report = identity_check(&rep, &Kernel2D::bivariate_bridge(), &grid, 1e-12);
    assert!(!report.pass);
    assert!(report.max_residual > 1e-3);
    assert!(report.residual_location.is_some());
    assert!(report.n_entries_outside_band > 0);
}

#[test]
fn identity_check_reports_domain_errors() {
    let rep = transform_tied_down();
    let grid = GridSpec::new(vec![0.0, 0.5], vec![0.5]).unwrap();
    let report = identity_check(&rep, &Kernel2D::tied_down_bridge(), &grid, 1e-12);
    assert!(!report.pass);
    assert!(report.message.as_deref().unwrap().contains("outside"));
}

#[test]
fn domain_functions_are_strictly_increasing() {
    for rep in catalog() {
        rep.s_transform.check_monotone(512).unwrap();
        rep.t_transform.check_monotone(512).unwrap();
    }
}

#[test]
fn scale_functions_vanish_at_the_boundary() {
    for rep in catalog() {
        for t in [&rep.s_transform, &rep.t_transform] {
            let mut prev = f64::INFINITY;
            for k in 1..=12 {
                let x = 10f64.powi(-k);
                let g = t.g(x).unwrap();
                assert!(g < prev && g > 0.0, "{} near 0", t.label());
                prev = g;
                assert!(t.f(x).unwrap() < 10.0 * x.powf(0.1) + 1e-300);
            }
            if t.upper().is_finite() {
                let l = t.upper();
                let mut prev = f64::INFINITY;
                for k in 1..=12 {
                    let g = t.g(l - l * 10f64.powi(-k)).unwrap();
                    assert!(g < prev && g >= 0.0, "{} near upper end", t.label());
                    prev = g;
                }
                assert!(prev < 1e-2 * t.g(0.9 * l).unwrap(), "{}", t.label());
            }
        }
    }
}

fn arb_rep() -> impl Strategy<Value = OURepresentation> {
    let ou = (0.1f64..3.0, 0.1f64..3.0, 0.2f64..3.0).prop_map(|(a, b, s)| OUParams::new(a, b, s).unwrap());
    let axis = prop_oneof![
        Just(AxisMap::Logit),
        Just(AxisMap::Identity),
        (0.5f64..4.0, 0.05f64..1.5).prop_map(|(horizon, alpha)| AxisMap::ScaledBridge { horizon, alpha }),
        Just(AxisMap::Cdf(CdfSpec::uniform())),
        (0.2f64..3.0).prop_map(|r| AxisMap::Cdf(CdfSpec::exponential(r).unwrap())),
    ];
    (axis.clone(), axis, ou).prop_map(|(a, b, ou)| {
        OURepresentation::new(AxisTransform::new(a).unwrap(), AxisTransform::new(b).unwrap(), ou)
    })
}

fn point_in(t: &AxisTransform, u: f64) -> f64 {
    if t.upper().is_finite() {
        u * t.upper()
    } else {
        u / (1.0 - u)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn reduced_form_reproduces_induced_covariance(
        rep in arb_rep(),
        u in proptest::array::uniform4(0.02f64..0.98),
    ) {
        let s1 = point_in(&rep.s_transform, u[0]);
        let t1 = point_in(&rep.t_transform, u[1]);
        let s2 = point_in(&rep.s_transform, u[2]);
        let t2 = point_in(&rep.t_transform, u[3]);
        let (c1, u1, v1) = reduced_wiener_form(&rep, s1, t1).unwrap();
        let (c2, u2, v2) = reduced_wiener_form(&rep, s2, t2).unwrap();
        let via_wiener = c1 * c2 * u1.min(u2) * v1.min(v2);
        let direct = induced_covariance(&rep, s1, t1, s2, t2).unwrap();
        prop_assert!(rel_close(via_wiener, direct, 1e-12), "{via_wiener} vs {direct}");
    }

    #[test]
    fn induced_covariance_is_exactly_symmetric(
        rep in arb_rep(),
        u in proptest::array::uniform4(0.01f64..0.99),
    ) {
        let s1 = point_in(&rep.s_transform, u[0]);
        let t1 = point_in(&rep.t_transform, u[1]);
        let s2 = point_in(&rep.s_transform, u[2]);
        let t2 = point_in(&rep.t_transform, u[3]);
        let a = induced_covariance(&rep, s1, t1, s2, t2).unwrap();
        let b = induced_covariance(&rep, s2, t2, s1, t1).unwrap();
        prop_assert_eq!(a.to_bits(), b.to_bits());
    }
}

#[test]
fn falsifier_examples() {
    let (s2, verdict) = separability_falsifier(&[0.5, 1.0], &[0.5, 1.0]).unwrap();
    assert_eq!(verdict, SeparabilityVerdict::NotSeparable);
    assert!((s2 - 0.25).abs() < 1e-12, "{s2}");
    let m = DMatrix::from_row_slice(2, 2, &[0.75, 0.5, 0.5, 0.0]);
    let t = rank_one_test(&m).unwrap();
    assert!((t.largest_singular_value - 1.0).abs() < 1e-12);
    assert!((t.second_singular_value - 0.25).abs() < 1e-12);

    assert!(separability_falsifier(&[0.5], &[0.5, 1.0]).is_err());
    assert!(separability_falsifier(&[0.4, 1.0], &[0.5, 1.0]).is_err());
    assert!(separability_falsifier(&[0.5, 1.2], &[0.5, 1.0]).is_err());
    assert!(separability_falsifier(&[0.9, 0.6], &[0.5, 1.0]).is_err());
    assert_eq!(SeparabilityVerdict::NotSeparable.to_string(), "not separable");
}

#[test]
fn falsifier_on_finer_grids_stays_rank_two() {
    let grid: Vec<f64> = (0..8).map(|k| 0.5 + k as f64 / 14.0).collect();
    let (s2, verdict) = separability_falsifier(&grid, &grid).unwrap();
    assert_eq!(verdict, SeparabilityVerdict::NotSeparable);
    assert!(s2 > 1e-3);
}

#[test]
fn slice_candidates_disagree() {
    let (a, b) = slice_candidates(0.9).unwrap();
    assert!((a - 0.55 / 0.75).abs() < 1e-15);
    assert!((b - 0.2).abs() < 1e-15);
    assert!((a - b).abs() > 0.1);
    let (a, b) = slice_candidates(0.5).unwrap();
    assert_eq!((a, b), (1.0, 1.0));
}

#[test]
fn rank_test_controls() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let (r, c) = (rng.random_range(2..8), rng.random_range(2..8));
        let a: Vec<f64> = (0..r).map(|_| rng.random_range(0.1..2.0)).collect();
        let b: Vec<f64> = (0..c).map(|_| rng.random_range(0.1..2.0)).collect();
        let one = DMatrix::from_fn(r, c, |i, j| a[i] * b[j]);
        assert_eq!(rank_one_test(&one).unwrap().verdict, SeparabilityVerdict::Separable);
        let d: Vec<f64> = (0..r).map(|_| rng.random_range(-1.0..1.0)).collect();
        let e: Vec<f64> = (0..c).map(|_| rng.random_range(-1.0..1.0)).collect();
        let two = DMatrix::from_fn(r, c, |i, j| a[i] * b[j] + d[i] * e[j]);
        assert_eq!(rank_one_test(&two).unwrap().verdict, SeparabilityVerdict::NotSeparable);
    }
}

#[test]
fn product_form_falsifier_separates_catalog() {
    let grid = [0.55, 0.7, 0.85];
    for k in [Kernel2D::tied_down_bridge(), Kernel2D::kiefer(), Kernel2D::wiener()] {
        let t = product_form_falsifier(&k, (0.5, 0.5), &grid, &grid).unwrap();
        assert_eq!(t.verdict, SeparabilityVerdict::Separable, "{}", k.label());
    }
    let t = product_form_falsifier(&Kernel2D::bivariate_bridge(), (0.5, 0.5), &grid, &grid).unwrap();
    assert_eq!(t.verdict, SeparabilityVerdict::NotSeparable);
}
