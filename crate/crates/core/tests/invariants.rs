//! Property tests for the model, rest-point solver and integrators.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sirs_open::dynamics::{integrate, omega_limit, IntegrateOptions, System, Tolerances, REST_VELOCITY};
use sirs_open::equilibria::{find_rest_points, jacobian, Region, Stability};
use sirs_open::model::{
    planar_residual, planar_rhs, population_growth, population_rhs, proportion_rhs, ModelParams,
    PlanarState, PopulationState, ProportionState,
};

fn rate() -> impl Strategy<Value = f64> {
    0.01f64..3.0
}

prop_compose! {
    fn params()(v in prop::array::uniform9(rate())) -> ModelParams {
        ModelParams {
            b: v[0], d: v[1], eps1: v[2], eps2: v[3], lambda: v[4],
            alpha: v[5], gamma: v[6], beta1: v[7], beta2: v[8],
        }
    }
}

prop_compose! {
    fn triangle_point()(a in 0.0f64..1.0, c in 0.0f64..1.0) -> PlanarState {
        if a + c <= 1.0 { PlanarState::new(a, c) } else { PlanarState::new(1.0 - a, 1.0 - c) }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn sum_derivative_identity(p in params(), s in 0.0f64..2.0, i in 0.0f64..2.0, r in 0.0f64..2.0) {
        let f = proportion_rhs(&p, &ProportionState::new(s, i, r));
        let e = s + i + r - 1.0;
        let expected = e * (p.eps1 * i + p.eps2 * r - p.b);
        let scale = 1.0 + f.iter().map(|v| v.abs()).sum::<f64>();
        prop_assert!((f[0] + f[1] + f[2] - expected).abs() <= 1e-12 * scale);
    }

    #[test]
    fn planar_field_is_the_restricted_proportions_field(p in params(), x in triangle_point()) {
        let f = proportion_rhs(&p, &x.lift());
        let g = planar_rhs(&p, &x);
        prop_assert!((f[0] - g[0]).abs() < 1e-12 && (f[1] - g[1]).abs() < 1e-12);
        prop_assert!((f[0] + f[1] + f[2]).abs() < 1e-12);
    }

    #[test]
    fn population_components_sum_to_growth(p in params(), s in 0.0f64..100.0, i in 0.0f64..100.0, r in 0.0f64..100.0) {
        prop_assume!(s + i + r > 1e-3);
        let x = PopulationState::new(s, i, r);
        let f = population_rhs(&p, &x).unwrap();
        let n = population_growth(&p, &x);
        prop_assert!((f[0] + f[1] + f[2] - n).abs() <= 1e-11 * (1.0 + n.abs() + 100.0));
    }

    #[test]
    fn jacobian_matches_central_differences(p in params(), x in triangle_point()) {
        let j = jacobian(&p, &x);
        let h = 1e-6;
        for (c, (ds, di)) in [(h, 0.0), (0.0, h)].into_iter().enumerate() {
            let a = planar_rhs(&p, &PlanarState::new(x.s + ds, x.i + di));
            let b = planar_rhs(&p, &PlanarState::new(x.s - ds, x.i - di));
            for r in 0..2 {
                let fd = (a[r] - b[r]) / (2.0 * h);
                prop_assert!((fd - j[r][c]).abs() <= 1e-6 * (1.0 + j[r][c].abs()));
            }
        }
    }

    #[test]
    fn rest_points_are_zeros_and_never_sources(p in params()) {
        let set = find_rest_points(&p, Region::Triangle).unwrap();
        prop_assert!(!set.is_empty());
        for rp in &set.points {
            prop_assert!(planar_residual(&p, &rp.location) < 1e-10);
            prop_assert!(rp.location.in_triangle());
            if rp.is_interior() {
                prop_assert_ne!(rp.classification, Stability::Source);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn triangle_is_forward_invariant(p in params(), x in triangle_point()) {
        let t = integrate(System::Planar, &p, &[x.s, x.i], 20.0, IntegrateOptions::default()).unwrap();
        for y in &t.states {
            prop_assert!(y[0] >= -1e-7 && y[1] >= -1e-7 && y[0] + y[1] <= 1.0 + 1e-7);
        }
    }

    #[test]
    fn planar_and_proportions_runs_agree(p in params(), x in triangle_point()) {
        // short horizon: off-plane errors grow exponentially for longer runs
        let opts = IntegrateOptions { tolerances: Tolerances { rtol: 1e-10, atol: 1e-13 }, max_step: None };
        let a = integrate(System::Planar, &p, &[x.s, x.i], 2.0, opts).unwrap();
        let b = integrate(System::Proportions, &p, &[x.s, x.i, 1.0 - x.s - x.i], 2.0, opts).unwrap();
        let (ya, yb) = (a.last().1, b.last().1);
        prop_assert!((ya[0] - yb[0]).abs() < 1e-7 && (ya[1] - yb[1]).abs() < 1e-7);
        prop_assert!(b.simplex_drift() < 1e-9);
    }

    #[test]
    fn population_proportions_follow_the_proportions_system(p in params(), x in triangle_point(), n0 in 0.1f64..1e4) {
        let opts = IntegrateOptions { tolerances: Tolerances { rtol: 1e-10, atol: 1e-13 }, max_step: None };
        let pop = integrate(
            System::Population, &p, &[n0 * x.s, n0 * x.i, n0 * (1.0 - x.s - x.i)], 2.0, opts,
        ).unwrap();
        let prop = integrate(System::Proportions, &p, &[x.s, x.i, 1.0 - x.s - x.i], 2.0, opts).unwrap();
        let (yp, yq) = (pop.last().1, prop.last().1);
        let n = yp[0] + yp[1] + yp[2];
        for k in 0..3 {
            prop_assert!((yp[k] / n - yq[k]).abs() < 1e-7);
        }
    }

    #[test]
    fn omega_limit_is_a_rest_point(p in params(), x in triangle_point()) {
        let r = omega_limit(&p, x, 1e5).unwrap();
        prop_assert!(r.converged);
        prop_assert!(r.final_velocity < REST_VELOCITY);
        prop_assert!(planar_residual(&p, &r.limit_point) < 1e-9);
    }
}

#[test]
fn integration_error_shrinks_with_tolerance() {
    // x' = F(x) run at two tolerance levels against a tight reference
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let p = common::random_general(&mut rng);
        let run = |rtol: f64| {
            let o = IntegrateOptions { tolerances: Tolerances { rtol, atol: rtol * 1e-3 }, max_step: None };
            let t = integrate(System::Planar, &p, &[0.3, 0.3], 5.0, o).unwrap();
            t.last().1.to_vec()
        };
        let reference = run(1e-13);
        let err = |y: Vec<f64>| (y[0] - reference[0]).abs().max((y[1] - reference[1]).abs());
        let (loose, tight) = (err(run(1e-5)), err(run(1e-8)));
        assert!(loose < 1e-3, "{loose}");
        assert!(tight < 1e-6, "{tight}");
        assert!(tight <= loose.max(1e-12), "{tight} vs {loose}");
    }
}
