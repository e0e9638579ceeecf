//! Stable manifold of the saddle, sink assignment on a probe grid and the
//! boundary switch points. Writes `basins.svg` to the current directory.

use sirs_open::analysis::{
    basin_analysis, bistable_special_instance, perturb_special_case, BasinOptions,
};
use sirs_open::io::{render_portrait, write_atomic, Portrait};

fn main() -> sirs_open::Result<()> {
    let special = bistable_special_instance(2.0, 4.0, 1.0, 0.4, Some(1.0))?;
    let pert = perturb_special_case(&special, 1e-3)?;
    let opts = BasinOptions { grid: 30, random_probes: 200, seed: 1, ..Default::default() };
    let report = basin_analysis(&pert.params, &pert.verdict, &opts)?;

    let t = report.side_test;
    println!(
        "side test: {}/{} agree ({:.2}%), {} near the manifold, {} unconverged",
        t.agreed,
        t.compared,
        100.0 * t.agreement(),
        t.near_manifold,
        t.unconverged
    );
    for x in &report.boundary_crossings {
        println!(
            "switch at ({:.6}, {:.6}), {:.1e} from the manifold",
            x.s,
            x.i,
            report.distance_to_manifold(x)
        );
    }

    let portrait = Portrait {
        rest_points: &pert.verdict.rest_points,
        basins: Some(&report),
        trajectories: &[],
        title: Some("stable manifold of the saddle"),
    };
    write_atomic("basins.svg".as_ref(), &render_portrait(&pert.params, &portrait))?;
    Ok(())
}
