//! Winding numbers of the planar field along the triangle boundary and the
//! two special-case curves, next to the enclosed rest points' indices.

use sirs_open::index::{curve_fig31, curve_fig32, curve_triangle, index_report, DEFAULT_RADIUS};
use sirs_open::model::ModelParams;

fn show(name: &str, r: &sirs_open::index::IndexReport) {
    println!(
        "{name:<10} index {:+}  residual {:.1e}  mu+ {}  mu- {}  balanced {}",
        r.curve_index, r.angle_residual, r.mu_plus, r.mu_minus, r.balance_ok
    );
}

fn main() -> sirs_open::Result<()> {
    let general = ModelParams {
        b: 0.2,
        eps1: 2.0,
        eps2: 4.0,
        lambda: 1.0,
        alpha: 1.0,
        gamma: 0.3,
        beta1: 0.4,
        beta2: 0.5,
        ..Default::default()
    };
    show("triangle", &index_report(&general, &curve_triangle(1e-4)?)?);

    // origin is the only rest point: T0 < 0 and T1 < 0
    let quiet = ModelParams { eps1: 2.0, eps2: 3.0, lambda: 1.0, alpha: 2.0, beta2: 4.0, ..Default::default() };
    show("fig31", &index_report(&quiet, &curve_fig31(&quiet, DEFAULT_RADIUS)?)?);

    let bistable = ModelParams { eps1: 2.0, eps2: 4.0, lambda: 1.0, alpha: 1.0, beta2: 2.6, ..Default::default() };
    show("fig32", &index_report(&bistable, &curve_fig32(&bistable, [DEFAULT_RADIUS; 3])?)?);
    Ok(())
}
