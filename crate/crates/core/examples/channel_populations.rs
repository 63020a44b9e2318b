//! Steady-state photon populations: channel A tooth heights for three atom
//! positions, and the channel B sideband amplitude against mirror frequency.

use std::f64::consts::PI;

use oscillating_mirror::emission::modified_rates;
use oscillating_mirror::populations::{channel_a_steady_markov, channel_b_sidebands};
use oscillating_mirror::{FrequencyGrid, ScenarioParams};

fn main() -> oscillating_mirror::Result<()> {
    let nu = 50.0;
    let base = ScenarioParams::new().with_epsilon(0.5).with_k0l0(1.0).with_nu(nu).with_tau(0.001);
    println!("|c_A|^2 at the comb teeth omega = shift + m nu");
    println!("{:>10} {:>11} {:>11} {:>11} {:>11} {:>11}", "k0R", "m=-2", "m=-1", "m=0", "m=1", "m=2");
    for (label, k0r) in [("pi/8", PI / 8.0), ("pi/2", PI / 2.0), ("0", 0.0)] {
        let p = base.clone().with_k0r(k0r);
        let shift = modified_rates(&p).shift;
        let grid = FrequencyGrid::new(shift - 2.0 * nu, shift + 2.0 * nu, 5);
        let pops = channel_a_steady_markov(&p, &grid, None)?.populations();
        print!("{label:>10}");
        for v in pops {
            print!(" {v:>11.3e}");
        }
        println!();
    }

    println!("peak |c_B| from the sideband term");
    for nu in [5.0, 20.0, 100.0] {
        let p = base.clone().with_nu(nu).with_tau(1.0).with_k0r(PI / 8.0);
        let grid = FrequencyGrid::symmetric(3.0 * nu, 6001);
        let side = channel_b_sidebands(&p, &grid, 8)?;
        let peak = side.values.iter().map(|c| c.norm()).fold(0.0, f64::max);
        println!("nu = {nu:>5}: {peak:.4e}  (nu * peak = {:.4})", nu * peak);
    }
    Ok(())
}
