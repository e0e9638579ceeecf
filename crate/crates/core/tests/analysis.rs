mod common;

use sirs_open::analysis::{
    basin_analysis, classify_regime, parameter_sweep, perturb_special_case, perturbed,
    BasinOptions, ProbeStatus, RegimeLabel, SweepAxis,
};
use sirs_open::dynamics::Tolerances;
use sirs_open::equilibria::{find_rest_points, Region, Stability};
use sirs_open::io::{nullcline_segments, render_portrait, Nullcline, Portrait};
use sirs_open::model::{planar_rhs, PlanarState};

fn bistable() -> sirs_open::analysis::Perturbation {
    perturb_special_case(&common::reference_special(), 1e-3).unwrap()
}

#[test]
fn rest_points_move_linearly_with_the_perturbation() {
    let base = common::reference_special();
    let special = find_rest_points(&base, Region::Triangle).unwrap();
    let mut shifts = Vec::new();
    for delta in [1e-2, 1e-3, 1e-4] {
        let moved = find_rest_points(&perturbed(&base, delta), Region::Plane).unwrap();
        let worst = special
            .points
            .iter()
            .map(|rp| moved.nearest(&rp.location).unwrap().1)
            .fold(0.0, f64::max);
        shifts.push(worst / delta);
    }
    // shift / delta stays bounded and settles as delta shrinks
    assert!(shifts.iter().all(|&c| c < 100.0), "{shifts:?}");
    assert!((shifts[1] - shifts[2]).abs() < 0.1 * shifts[2].max(1.0), "{shifts:?}");
}

#[test]
fn small_neighbourhood_of_a_bistable_instance_stays_bistable() {
    let p = bistable().params;
    let a1 = SweepAxis::new("lambda", p.lambda * 0.999, p.lambda * 1.001, 5);
    let a2 = SweepAxis::new("alpha", p.alpha * 0.999, p.alpha * 1.001, 5);
    let grid = parameter_sweep(&p, &a1, &a2).unwrap();
    assert_eq!(grid.cells.len(), 25);
    assert_eq!(grid.count(RegimeLabel::TwoSinksOneSaddle), 25);
}

#[test]
fn beta_alpha_sweep_crosses_between_regimes() {
    let p = bistable().params;
    let grid = parameter_sweep(
        &p,
        &SweepAxis::new("beta", 2.2, 3.0, 20),
        &SweepAxis::new("alpha", 0.6, 1.4, 20),
    )
    .unwrap();
    let (a, b) = (grid.count(RegimeLabel::UniqueGas), grid.count(RegimeLabel::TwoSinksOneSaddle));
    let degenerate = grid.count(RegimeLabel::DegenerateDetected);
    assert!(a > 0 && b > 0, "A {a} B {b}");
    assert_eq!(grid.errors(), 0);
    assert!((degenerate as f64) < 0.05 * grid.cells.len() as f64);
    // the beta axis moves beta2 with beta1 fixed
    for c in &grid.cells {
        assert!(c.mu[0] as i64 - c.mu[1] as i64 + c.mu[2] as i64 == 1 || c.degenerate);
    }
}

#[test]
fn basin_assignment_is_stable_under_tighter_tolerances() {
    let pert = bistable();
    let run = |rtol: f64| {
        let opts = BasinOptions {
            grid: 8,
            tolerances: Tolerances { rtol, atol: rtol * 1e-3 },
            ..Default::default()
        };
        basin_analysis(&pert.params, &pert.verdict, &opts).unwrap()
    };
    let (loose, tight) = (run(1e-9), run(1e-11));
    assert_eq!(loose.probes.len(), tight.probes.len());
    for (a, b) in loose.probes.iter().zip(&tight.probes) {
        if a.distance_to_manifold > 1e-3 {
            assert_eq!(a.status, b.status, "{:?}", a.point);
            assert!(matches!(a.status, ProbeStatus::Sink(_)));
        }
    }
    assert!(tight.side_test.agreement() >= 0.99);
}

#[test]
fn boundary_switches_sit_on_the_manifold() {
    let pert = bistable();
    let report = basin_analysis(&pert.params, &pert.verdict, &BasinOptions::default()).unwrap();
    assert!(!report.boundary_crossings.is_empty());
    for x in &report.boundary_crossings {
        assert!(report.distance_to_manifold(x) < 1e-4, "{x:?}");
    }
}

#[test]
fn portrait_shows_every_rest_point_once() {
    let pert = bistable();
    let p = pert.params;
    let rest = find_rest_points(&p, Region::Triangle).unwrap();
    let basins = basin_analysis(&p, &pert.verdict, &BasinOptions { grid: 4, ..Default::default() }).unwrap();
    let portrait = Portrait { rest_points: &rest.points, basins: Some(&basins), trajectories: &[], title: None };
    let svg = render_portrait(&p, &portrait);
    assert_eq!(svg.matches(r#"class="sink""#).count(), rest.count(Stability::Sink));
    assert_eq!(svg.matches(r#"class="saddle""#).count(), rest.count(Stability::Saddle));
    assert_eq!(svg.matches(r#"class="sink""#).count(), 2);
    assert_eq!(svg.matches(r#"class="saddle""#).count(), 1);
    assert!(svg.contains(r#"class="manifold""#));
    assert_eq!(svg, render_portrait(&p, &portrait));
}

#[test]
fn nullclines_pass_through_rest_points() {
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
    for _ in 0..10 {
        let p = common::random_general(&mut rng);
        for which in [Nullcline::S, Nullcline::I] {
            let segs = nullcline_segments(&p, which, 200);
            let comp = if which == Nullcline::S { 0 } else { 1 };
            for [a, b] in &segs {
                let mid = PlanarState::new(0.5 * (a.s + b.s), 0.5 * (a.i + b.i));
                assert!(planar_rhs(&p, &mid)[comp].abs() < 1e-2);
            }
            for rp in find_rest_points(&p, Region::Triangle).unwrap().points {
                let d = segs
                    .iter()
                    .flat_map(|s| s.iter())
                    .map(|x| x.dist(&rp.location))
                    .fold(f64::INFINITY, f64::min);
                assert!(d < 1e-2, "{which:?} misses {:?} by {d}", rp.location);
            }
        }
    }
}

#[test]
fn regime_verdicts_are_deterministic() {
    let p = bistable().params;
    assert_eq!(classify_regime(&p).unwrap(), classify_regime(&p).unwrap());
}
