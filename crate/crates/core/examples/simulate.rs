//! Integrates the three systems from matching initial data and prints the
//! end states, the simplex drift of the proportions run, and a CSV head.

use sirs_open::dynamics::{integrate, IntegrateOptions, System};
use sirs_open::io::trajectory_csv;
use sirs_open::model::ModelParams;

fn main() -> sirs_open::Result<()> {
    let p = ModelParams {
        b: 0.2,
        d: 0.05,
        eps1: 2.0,
        eps2: 4.0,
        lambda: 1.0,
        alpha: 1.0,
        gamma: 0.3,
        beta1: 0.4,
        beta2: 0.5,
    };
    let opts = IntegrateOptions::default();
    let planar = integrate(System::Planar, &p, &[0.6, 0.1], 20.0, opts)?;
    let props = integrate(System::Proportions, &p, &[0.6, 0.1, 0.3], 20.0, opts)?;
    let pop = integrate(System::Population, &p, &[600.0, 100.0, 300.0], 20.0, opts)?;

    println!("planar      {:?}", planar.last().1);
    println!("proportions {:?}  drift {:.2e}", props.last().1, props.simplex_drift());
    let (_, x) = pop.last();
    println!("population  s = {:.6}, i = {:.6}, N = {:.4e}", x[0] / x[3], x[1] / x[3], x[3]);

    for line in trajectory_csv(&planar).lines().take(4) {
        println!("{line}");
    }
    Ok(())
}
