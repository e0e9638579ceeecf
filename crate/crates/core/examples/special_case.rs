//! Thresholds, boundary rest points and the interior saddle when
//! b = beta1 = gamma = 0.

use sirs_open::equilibria::{find_rest_points, special_case_report, Region};
use sirs_open::model::ModelParams;

fn main() -> sirs_open::Result<()> {
    let p = ModelParams {
        eps1: 2.0,
        eps2: 4.0,
        lambda: 1.0,
        alpha: 1.0,
        beta2: 2.6,
        ..Default::default()
    };
    let r = special_case_report(&p)?;
    println!("T0 = {}, T1 = {}, T2 = {}, T3 = {}", r.t0, r.t1, r.t2, r.t3);
    println!("P_i = ({}, {}), P_s = ({}, {})", r.p_i.s, r.p_i.i, r.p_s.s, r.p_s.i);
    println!("regime: {:?}", r.regime_label);

    for rp in find_rest_points(&p, Region::Triangle)?.points {
        println!(
            "({:.6}, {:.6})  {:?}  det {:+.4}  trace {:+.4}",
            rp.location.s,
            rp.location.i,
            rp.classification,
            rp.det(),
            rp.trace()
        );
    }
    Ok(())
}
