use einstein_core::approx_metric::{einstein_error, scaled_error_derivative_sup};
use einstein_core::model_geometry::{
    a_max, cone_coefficient, curvature_components, largest_root, ricci_residual, sec_max,
    solve_cone_angle, tube_distance, ModelParams, TubePoint,
};
use einstein_core::numerics::{FdOrder, GridScheme, RadialGrid};
use einstein_core::profile::RadialProfile;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = ModelParams> {
    (4usize..=7, -2.0f64..0.999).prop_map(|(n, t)| {
        let a = if t < 0.0 { t } else { t * a_max(n) };
        ModelParams::new(n, a).unwrap()
    })
}

fn tube_point() -> impl Strategy<Value = TubePoint> {
    (0.0f64..5.0, 0.0f64..6.3, 0.0f64..3.0, 0.0f64..6.3)
        .prop_map(|(r, theta, s, phi)| TubePoint::new(r.cosh(), theta, s, phi).unwrap())
}

fn family_residual(p: &ModelParams, nodes: usize) -> f64 {
    let u_a = largest_root(p).unwrap();
    let grid = RadialGrid::new(u_a * 1.001, 10.0, nodes, GridScheme::LogUniform).unwrap();
    let prof = RadialProfile::exact_model(p, grid).unwrap();
    ricci_residual(&prof, FdOrder::Fourth).unwrap().sup()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exact_family_is_einstein(p in params()) {
        let sup = |nodes| family_residual(&p, nodes);
        if p.a >= 0.0 {
            let fine = sup(2000);
            prop_assert!(fine < 1e-8, "n={} a={} sup={fine:e}", p.n, p.a);
        }
        let order = (sup(100) / sup(200)).log2();
        prop_assert!(order > 1.9, "n={} a={} order {order}", p.n, p.a);
    }

    #[test]
    fn mixed_planes_carry_the_maximum(p in params(), x in 0.0f64..1.0) {
        prop_assume!(p.a > 0.0);
        let u_a = largest_root(&p).unwrap();
        let u = u_a * (1.0 + 1e-6 + 20.0 * x);
        let f = curvature_components(u, &p).unwrap();
        prop_assert_eq!(f.max(), f.mixed);
        prop_assert!(f.mixed <= sec_max(&p).unwrap() + 1e-12);
    }

    #[test]
    fn error_vanishes_outside_the_gluing_region(
        n in 4usize..=7,
        t in 0.0f64..0.99,
        u_glue in 4.0f64..200.0,
        x in prop_oneof![0.05f64..0.5, 1.0f64..5.0],
    ) {
        let (f, g) = einstein_error(x * u_glue, t * a_max(n), n, u_glue);
        prop_assert_eq!((f, g), (0.0, 0.0));
    }

    #[test]
    fn tube_distance_is_a_metric(x in tube_point(), y in tube_point(), z in tube_point()) {
        let (dxy, dyz, dxz) = (tube_distance(&x, &y), tube_distance(&y, &z), tube_distance(&x, &z));
        prop_assert!((dxy - tube_distance(&y, &x)).abs() < 1e-12);
        prop_assert!(dxz <= dxy + dyz + 1e-9);
        prop_assert!(tube_distance(&x, &x) < 1e-12);
    }
}

#[test]
fn tip_and_cone_coefficient_decrease_in_a() {
    for n in [4usize, 5, 6] {
        let top = a_max(n);
        let grid: Vec<f64> = (0..100)
            .map(|k| -5.0 + (top + 5.0) * (k as f64 + 1.0) / 100.0)
            .map(|a: f64| a.min(top))
            .collect();
        let data: Vec<_> = grid
            .iter()
            .map(|&a| cone_coefficient(&ModelParams::new(n, a).unwrap()).unwrap())
            .collect();
        for w in data.windows(2) {
            assert!(w[1].u_a < w[0].u_a, "n={n}: u_a not decreasing");
            assert!(w[1].c_a < w[0].c_a, "n={n}: c_a not decreasing");
        }
    }
}

#[test]
fn curvature_is_strictly_negative_below_a_max() {
    for n in 4usize..=8 {
        for k in 0..50 {
            let a = (a_max(n) - 1e-3) * k as f64 / 49.0;
            let s = sec_max(&ModelParams::new(n, a).unwrap()).unwrap();
            assert!(s <= -1e-6, "n={n} a={a}: sec_max {s}");
        }
    }
}

#[test]
fn scaled_error_derivatives_decay_like_u_to_one_minus_n() {
    for (n, l) in [(4usize, 2u32), (5, 2), (5, 3)] {
        let a = solve_cone_angle(n, l).unwrap().a;
        let target = 2f64.powi(1 - n as i32);
        let mut prev = scaled_error_derivative_sup(a, n, 10.0, 4001).unwrap();
        for u_glue in [20.0, 40.0, 80.0] {
            let next = scaled_error_derivative_sup(a, n, u_glue, 4001).unwrap();
            for (new, old) in [(next.0, prev.0), (next.1, prev.1)] {
                let ratio = new / old;
                assert!(
                    (ratio / target - 1.0).abs() < 0.3,
                    "n={n} U={u_glue}: ratio {ratio}"
                );
            }
            prev = next;
        }
    }
}
