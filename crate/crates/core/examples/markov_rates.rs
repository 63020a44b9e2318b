//! Modified decay rate and level shift against oscillation amplitude, and a
//! short Markovian trace compared with the delay equation.

use std::f64::consts::PI;

use oscillating_mirror::emission::{dde_solve, markov_amplitude, modified_rates};
use oscillating_mirror::{ScenarioParams, TimeGrid};

fn main() -> oscillating_mirror::Result<()> {
    let node = ScenarioParams::new().with_epsilon(1.0).with_nu(20.0).with_tau(0.01);
    println!("{:>6} {:>12} {:>12} {:>12}", "k0l0", "node", "antinode", "shift(pi/2)");
    for i in 0..=15 {
        let z = 0.2 * i as f64;
        let at = |phase: f64| modified_rates(&node.clone().with_k0l0(z).with_omega0_tau(phase));
        println!(
            "{z:>6.2} {:>12.6} {:>12.6} {:>12.6}",
            at(0.0).gamma_eff,
            at(PI).gamma_eff,
            at(PI / 2.0).shift
        );
    }

    let p = ScenarioParams::new()
        .with_epsilon(0.5)
        .with_nu(1.0)
        .with_tau(0.01)
        .with_k0l0(1.0)
        .with_omega0_tau(0.0);
    let grid = TimeGrid::covering(5.0, 0.0002);
    let exact = dde_solve(&p, &grid)?;
    let markov = markov_amplitude(&p, &exact.grid)?;
    println!("gamma_eff = {:.6}", modified_rates(&p).gamma_eff);
    println!("max |markov - delay equation| over t <= 5: {:.3e}", markov.max_abs_diff(&exact));
    Ok(())
}
