//! Builds a bistable special-case instance, perturbs it into the general
//! case and classifies the result.

use sirs_open::analysis::{bistable_ratio_interval, bistable_special_instance, perturb_special_case};

fn main() -> sirs_open::Result<()> {
    let (lo, hi) = bistable_ratio_interval(2.0, 4.0, 1.0)?;
    println!("admissible T0/T1 in ({lo:.6}, {hi:.6})");

    let special = bistable_special_instance(2.0, 4.0, 1.0, 0.4, Some(1.0))?;
    println!("beta = {}", special.beta());

    for delta in [1e-3, 1e-4, 1e-5] {
        let pert = perturb_special_case(&special, delta)?;
        let v = &pert.verdict;
        println!("delta {delta:e}: {}  (mu0, mu1, mu2) = ({}, {}, {})", v.label, v.mu0, v.mu1, v.mu2);
        for rp in &v.rest_points {
            println!("    ({:.6}, {:.6}) {:?}", rp.location.s, rp.location.i, rp.classification);
        }
    }
    Ok(())
}
