//! Excited-state population with an oscillating and with a static mirror,
//! from the delay equation, next to the first-order closed form.

use oscillating_mirror::emission::{analytic_first_order, dde_solve};
use oscillating_mirror::{ScenarioParams, TimeGrid};

fn main() -> oscillating_mirror::Result<()> {
    let p = ScenarioParams::new()
        .with_nu(20.0)
        .with_tau(4.0)
        .with_epsilon(1.0)
        .with_k0l0(1.0)
        .with_omega0_tau(0.0);
    let grid = TimeGrid::covering(12.0, 0.0025);
    let moving = dde_solve(&p, &grid)?;
    let fixed = dde_solve(&p.static_mirror(), &grid)?;
    let first = analytic_first_order(&p, &moving.grid)?;

    println!("{:>6} {:>12} {:>12} {:>12}", "t", "|c|^2", "static", "first order");
    let (a, b, c) = (moving.populations(), fixed.populations(), first.populations());
    let every = (0.25 / moving.grid.dt).round() as usize;
    for i in (0..a.len()).step_by(every) {
        println!("{:>6.2} {:>12.6} {:>12.6} {:>12.6}", moving.grid.time(i), a[i], b[i], c[i]);
    }
    Ok(())
}
