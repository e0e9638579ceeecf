//! Growth threshold T at the limiting equilibrium and the simulated trend
//! of the total population.

use sirs_open::dynamics::{verify_growth, Tolerances};
use sirs_open::model::{ModelParams, PopulationState};

fn report(name: &str, p: &ModelParams, x0: PopulationState) -> sirs_open::Result<()> {
    let g = verify_growth(p, &x0, 200.0, Tolerances::default())?;
    println!(
        "{name}: T = {:.4}, predicted {:?}, observed {:?} (d ln N/dt = {:+.4})",
        g.threshold, g.predicted, g.observed, g.late_rate
    );
    Ok(())
}

fn main() -> sirs_open::Result<()> {
    let decaying = ModelParams { d: 0.1, eps1: 2.0, eps2: 4.0, lambda: 1.0, alpha: 1.0, beta2: 2.6, ..Default::default() };
    report("special case", &decaying, PopulationState::new(1e-3, 500.0, 499.0))?;

    let growing = ModelParams {
        b: 3.0,
        d: 0.1,
        eps1: 0.5,
        eps2: 0.5,
        lambda: 1.0,
        alpha: 0.5,
        gamma: 0.5,
        beta1: 0.2,
        beta2: 0.2,
    };
    report("large births", &growing, PopulationState::new(100.0, 10.0, 10.0))?;
    Ok(())
}
