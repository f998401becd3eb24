use einstein_core::approx_metric::interpolated_profile;
use einstein_core::einstein_solver::{
    assemble_l, coercivity_estimate, family_fit, newton_solve, GridScheme, NewtonConfig, RadialGrid,
};
use einstein_core::model_geometry::{a_max, largest_root, potential_v, ModelParams};
use einstein_core::profile::RadialProfile;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn newton_recovers_the_family_from_interpolated_profiles(
        n in 4usize..=6,
        t in 0.05f64..0.95,
        glue_factor in 4.0f64..30.0,
    ) {
        let p = ModelParams::new(n, t * a_max(n)).unwrap();
        let u_a = largest_root(&p).unwrap();
        let u_glue = glue_factor * u_a;
        let initial = interpolated_profile(&p, u_glue, 3.0 * u_glue, 1500, 1e-3).unwrap();
        let left = potential_v(initial.grid.u_min(), &p).unwrap();
        let rep = newton_solve(&initial, left, &NewtonConfig { g_tolerance: None, ..NewtonConfig::default() }).unwrap();
        let fit = family_fit(&rep.profile);
        prop_assert!(fit.residual < 1e-8, "fit residual {}", fit.residual);
        prop_assert!((fit.a - p.a).abs() < 1e-8, "a {} vs {}", fit.a, p.a);
    }
}

fn hyperbolic(u_max: f64, nodes: usize) -> RadialProfile {
    let grid = RadialGrid::new(1.0005, u_max, nodes, GridScheme::LogUniform).unwrap();
    RadialProfile::hyperbolic(4, grid).unwrap()
}

#[test]
fn coercivity_decreases_with_truncation_radius() {
    // fixed log spacing, so only the radius changes
    let spacing = (50f64 / 1.0005).ln() / 1999.0;
    let mut prev = f64::INFINITY;
    for u_max in [10.0, 20.0, 50.0, 100.0] {
        let nodes = ((u_max / 1.0005f64).ln() / spacing).round() as usize + 1;
        let eig = coercivity_estimate(&hyperbolic(u_max, nodes), 1e-9)
            .unwrap()
            .smallest_eigenvalue;
        assert!(eig <= prev + 1e-3, "U_max={u_max}: {eig} after {prev}");
        prev = eig;
    }
}

#[test]
fn hyperbolic_eigenvalues_stay_above_the_l2_bound() {
    for nodes in [500usize, 1000, 2000, 4000] {
        for u_max in [20.0, 50.0] {
            let eig = coercivity_estimate(&hyperbolic(u_max, nodes), 1e-8)
                .unwrap()
                .smallest_eigenvalue;
            assert!(eig >= 9.0 / 8.0 - 0.1, "nodes={nodes} U_max={u_max}: {eig}");
        }
    }
}

#[test]
fn linearized_operator_is_continuous_in_a() {
    let grid = RadialGrid::new(1.2, 20.0, 400, GridScheme::LogUniform).unwrap();
    let base =
        RadialProfile::exact_model(&ModelParams::new(4, 0.0).unwrap(), grid.clone()).unwrap();
    let l0 = assemble_l(&base, &base).unwrap();
    let mut prev_ratio: Option<f64> = None;
    for a in [1e-2, 5e-3, 2.5e-3] {
        let prof =
            RadialProfile::exact_model(&ModelParams::new(4, a).unwrap(), grid.clone()).unwrap();
        let la = assemble_l(&prof, &prof).unwrap();
        let diff = la.matrix.max_abs_diff(&l0.matrix);
        let ratio = diff / a;
        if let Some(r) = prev_ratio {
            // O(a): the normalized difference settles to a constant
            assert!((ratio / r - 1.0f64).abs() < 0.05, "a={a}: {ratio} vs {r}");
        }
        prev_ratio = Some(ratio);
    }
}
