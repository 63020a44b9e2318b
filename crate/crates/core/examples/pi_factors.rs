//! Mirror factors Pi_m over the round-trip phase, by direct Bessel sum and
//! by the closed form.

use std::f64::consts::PI;

use oscillating_mirror::mirror_math::{bessel_j, pi_factor_closed, pi_factor_sum, pi_truncation_order};

fn main() -> oscillating_mirror::Result<()> {
    let z = 1.0;
    println!("k0l0 = {z}");
    println!("{:>8} {:>12} {:>12} {:>12} {:>10}", "nu*tau", "|Pi_0|", "|Pi_1|", "|Pi_2|", "sum-closed");
    for i in 0..=16 {
        let theta = 2.0 * PI * i as f64 / 16.0;
        let mut worst: f64 = 0.0;
        let mut row = Vec::new();
        for m in 0..=2 {
            let direct = pi_factor_sum(m, z, theta, None)?;
            worst = worst.max((direct - pi_factor_closed(m, z, theta)?).norm());
            row.push(direct.norm());
        }
        println!("{theta:>8.4} {:>12.6} {:>12.6} {:>12.6} {worst:>10.1e}", row[0], row[1], row[2]);
    }

    // At nu*tau = pi the sidebands cancel and only Pi_0 = 1 survives.
    let p = pi_factor_sum(0, z, PI, None)?;
    println!("Pi_0(pi) = {:.3e} {:+.3e}i", p.re, p.im);
    println!("J_0(2 k0l0) = {:.6}", bessel_j(0, 2.0 * z)?);
    println!("orders needed for 1e-10 at nu*tau = 1: {}", pi_truncation_order(z, 1.0, 1e-10)?);
    Ok(())
}
