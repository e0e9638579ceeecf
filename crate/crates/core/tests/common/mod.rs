#![allow(dead_code)]

use rand::Rng;
use sirs_open::analysis::{bistable_special_instance, perturbed};
use sirs_open::model::ModelParams;

/// Every rate uniform on (0.01, 3], d included.
pub fn random_general<R: Rng>(rng: &mut R) -> ModelParams {
    let mut g = || rng.gen_range(0.01..=3.0);
    ModelParams {
        b: g(),
        d: g(),
        eps1: g(),
        eps2: g(),
        lambda: g(),
        alpha: g(),
        gamma: g(),
        beta1: g(),
        beta2: g(),
    }
}

/// Special-case parameters with two boundary sinks and an interior saddle.
pub fn random_bistable_special<R: Rng>(rng: &mut R) -> ModelParams {
    loop {
        let eps1 = rng.gen_range(0.5..3.0);
        let eps2 = eps1 + rng.gen_range(0.5..3.0);
        let lambda = eps1 * rng.gen_range(0.1..0.9);
        let fraction = rng.gen_range(0.1..0.9);
        if let Ok(p) = bistable_special_instance(eps1, eps2, lambda, fraction, None) {
            return p;
        }
    }
}

/// Bistable special instance moved into the general case by `delta`.
pub fn random_perturbed_bistable<R: Rng>(rng: &mut R, delta: f64) -> ModelParams {
    perturbed(&random_bistable_special(rng), delta)
}

/// Special-case parameters whose only rest point in the triangle is the
/// origin (T0 and T1 at most -0.2).
pub fn random_origin_only<R: Rng>(rng: &mut R) -> ModelParams {
    let eps1 = rng.gen_range(0.5..4.0);
    let eps2 = rng.gen_range(0.5..4.0);
    let gap: f64 = eps2 - eps1;
    ModelParams {
        eps1,
        eps2,
        lambda: rng.gen_range(0.1..3.0),
        alpha: gap.max(0.0) + rng.gen_range(0.2..2.0),
        beta2: eps2 + rng.gen_range(0.2..2.0),
        ..Default::default()
    }
}

/// Reference bistable instance: (eps1, eps2, lambda, alpha, beta) = (2, 4, 1, 1, 2.6).
pub fn reference_special() -> ModelParams {
    ModelParams { eps1: 2.0, eps2: 4.0, lambda: 1.0, alpha: 1.0, beta2: 2.6, ..Default::default() }
}
