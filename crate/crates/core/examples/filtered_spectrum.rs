//! Spectrum seen through a finite-bandwidth filter, by quadrature of the
//! detector field and by the narrow-filter closed form, against the ideal
//! spectrum. At finite Gamma_D the quadrature line is narrower in the wings:
//! each Lorentzian there has half-width gamma_eff/2 - Gamma_D.

use std::f64::consts::PI;

use oscillating_mirror::emission::modified_rates;
use oscillating_mirror::spectrum::{closed_form_scan, filtered_scan, spectrum_ideal, Normalization};
use oscillating_mirror::{FrequencyGrid, ScenarioParams};

fn main() -> oscillating_mirror::Result<()> {
    let mut p = ScenarioParams::new().with_epsilon(1.0).with_tau(0.001).with_k0l0(1.0).with_k0r(PI / 8.0);
    let ge = modified_rates(&p).gamma_eff;
    p.nu = 20.0 * ge;
    let grid = FrequencyGrid::symmetric(2.5 * p.nu, 41);
    let gamma_d = 0.05 * ge;
    let t = 30.0 / gamma_d;
    let numeric = filtered_scan(&p, gamma_d, &grid, t, None, Normalization::PeakNormalized)?;
    let closed = closed_form_scan(&p, gamma_d, &grid, t, Normalization::PeakNormalized)?;
    let ideal = spectrum_ideal(&p, &grid, None)?;
    println!("Gamma_D = {gamma_d:.4}, t = {t:.1}");
    println!("{:>10} {:>12} {:>12} {:>12}", "omega/nu", "quadrature", "closed", "ideal");
    for (i, w) in grid.points().into_iter().enumerate() {
        println!(
            "{:>10.3} {:>12.5} {:>12.5} {:>12.5}",
            w / p.nu,
            numeric.values[i],
            closed.values[i],
            ideal.values[i]
        );
    }
    Ok(())
}
