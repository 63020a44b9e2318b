//! Ideal emission spectrum with its sideband strengths, at an oscillation
//! amplitude where J_1(2 k0l0) nearly vanishes.

use std::f64::consts::PI;

use oscillating_mirror::emission::modified_rates;
use oscillating_mirror::spectrum::{sideband_strengths, spectrum_ideal};
use oscillating_mirror::{FrequencyGrid, ScenarioParams};

fn main() -> oscillating_mirror::Result<()> {
    for z in [1.0, 1.9] {
        let mut p = ScenarioParams::new().with_epsilon(1.0).with_tau(0.001).with_k0l0(z).with_k0r(PI / 8.0);
        p.nu = 20.0 * modified_rates(&p).gamma_eff;
        let table = sideband_strengths(&p, 3)?;
        println!("k0l0 = {z}: gamma_eff = {:.4}, nu = {:.4}", modified_rates(&p).gamma_eff, p.nu);
        for m in 0..=3 {
            println!("  |B_{m}|^2 = {:.4e}", table.get(m).unwrap().norm_sqr());
        }
        let grid = FrequencyGrid::symmetric(3.5 * p.nu, 7001);
        let s = spectrum_ideal(&p, &grid, None)?;
        for (w, v) in s.local_maxima().into_iter().filter(|(_, v)| *v > 1e-4) {
            println!("  peak at {:>8.3} nu: {v:.4e}", w / p.nu);
        }
    }
    Ok(())
}
