//! Regime map over (beta, alpha) around a bistable instance.

use sirs_open::analysis::{
    bistable_special_instance, parameter_sweep, perturb_special_case, RegimeLabel, SweepAxis,
};

fn main() -> sirs_open::Result<()> {
    let special = bistable_special_instance(2.0, 4.0, 1.0, 0.4, Some(1.0))?;
    let base = perturb_special_case(&special, 1e-3)?.params;
    let grid = parameter_sweep(
        &base,
        &SweepAxis::new("beta", 2.2, 3.0, 32),
        &SweepAxis::new("alpha", 0.6, 1.4, 16),
    )?;

    let glyph = |l: Option<RegimeLabel>| match l {
        Some(RegimeLabel::UniqueGas) => 'A',
        Some(RegimeLabel::TwoSinksOneSaddle) => 'B',
        Some(RegimeLabel::DegenerateDetected) => '*',
        None => '?',
    };
    let cols = grid.axis2.steps;
    println!("rows: beta {}..{}, columns: alpha {}..{}", grid.axis1.lo, grid.axis1.hi, grid.axis2.lo, grid.axis2.hi);
    for row in grid.cells.chunks(cols) {
        println!("{}", row.iter().map(|c| glyph(c.label)).collect::<String>());
    }
    println!(
        "A {}  B {}  degenerate {}  errors {}",
        grid.count(RegimeLabel::UniqueGas),
        grid.count(RegimeLabel::TwoSinksOneSaddle),
        grid.count(RegimeLabel::DegenerateDetected),
        grid.errors()
    );
    Ok(())
}
