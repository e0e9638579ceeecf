//! Phase portrait of a bistable instance with nullclines, sample orbits
//! and the separatrix. Writes `portrait.svg` to the current directory.

use sirs_open::analysis::{
    basin_analysis, bistable_special_instance, perturb_special_case, BasinOptions,
};
use sirs_open::cli::sample_trajectories;
use sirs_open::dynamics::Tolerances;
use sirs_open::io::{render_portrait, write_atomic, Portrait};

fn main() -> sirs_open::Result<()> {
    let special = bistable_special_instance(2.0, 4.0, 1.0, 0.4, Some(1.0))?;
    let pert = perturb_special_case(&special, 1e-3)?;
    let p = pert.params;
    let basins = basin_analysis(&p, &pert.verdict, &BasinOptions { grid: 4, ..Default::default() })?;
    let orbits = sample_trajectories(&p, 16, 3, 60.0, Tolerances::default())?;

    let svg = render_portrait(
        &p,
        &Portrait {
            rest_points: &pert.verdict.rest_points,
            basins: Some(&basins),
            trajectories: &orbits,
            title: Some("two sinks and a saddle"),
        },
    );
    write_atomic("portrait.svg".as_ref(), &svg)?;
    println!("wrote portrait.svg ({} bytes)", svg.len());
    Ok(())
}
