//! Red and blue sideband heights in channel A once the round trip is as long
//! as the lifetime.

use std::f64::consts::PI;

use oscillating_mirror::populations::channel_a_steady_nonmarkov;
use oscillating_mirror::{FrequencyGrid, ScenarioParams};

fn main() -> oscillating_mirror::Result<()> {
    let nu = 10.0;
    println!("{:>8} {:>12} {:>12} {:>8}", "k0R", "|c(+nu)|^2", "|c(-nu)|^2", "ratio");
    for i in 0..=8 {
        let k0r = PI / 16.0 * i as f64;
        let p = ScenarioParams::new()
            .with_epsilon(1.0)
            .with_nu(nu)
            .with_tau(1.0)
            .with_k0l0(1.0)
            .with_k0r(k0r);
        let grid = FrequencyGrid::new(-nu, nu, 3);
        let pops = channel_a_steady_nonmarkov(&p, &grid, 10)?.populations();
        println!("{k0r:>8.4} {:>12.4e} {:>12.4e} {:>8.3}", pops[2], pops[0], pops[2] / pops[0]);
    }
    Ok(())
}
