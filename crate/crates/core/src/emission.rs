//! Excited-state amplitude of the atom.
//!
//! In the frame rotating at the bare transition frequency the amplitude obeys
//!
//! ```text
//! dc/dt = -(gamma/2) [ c(t) - eps e^{i omega0 tau} F(t) c(t - tau) Theta(t - tau) ]
//! F(t)  = exp(-i k0l0 [sin(nu t) + sin(nu (t - tau))])
//! ```
//!
//! [`dde_solve`] integrates this exactly (up to discretisation);
//! [`analytic_first_order`] and [`markov_amplitude`] are the perturbative and
//! short-delay closed forms.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mirror_math::{bessel_j, bessel_j_orders, exprel, pi_factors, pi_truncation_order, signed_order, BesselOrderRange};
use crate::scenario::{AmplitudeTrace, Frame, ScenarioParams, TimeGrid};

/// Ratio above which a timescale comparison counts as violated.
pub const DEFAULT_TIMESCALE_RATIO: f64 = 0.1;

/// Tail weight of the dropped interference factors in [`analytic_first_order`].
pub const PI_TAIL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TimescaleReport {
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
}

impl TimescaleReport {
    pub fn is_clean(&self) -> bool {
        self.warnings.is_empty()
    }
}

/// Checks that the atomic and mirror rates stay well below the optical
/// frequency and the inverse light transit time over the mirror amplitude.
pub fn validate_timescales(p: &ScenarioParams, omega0_over_gamma: Option<f64>) -> TimescaleReport {
    validate_timescales_with(p, omega0_over_gamma, DEFAULT_TIMESCALE_RATIO)
}

pub fn validate_timescales_with(p: &ScenarioParams, omega0_over_gamma: Option<f64>, ratio: f64) -> TimescaleReport {
    let mut report = TimescaleReport::default();
    let Some(w0) = omega0_over_gamma else {
        report
            .notes
            .push("omega0_over_gamma not given; comparisons against omega0 and c/l0 skipped".into());
        return report;
    };
    let omega0 = w0 * p.gamma;
    let fast = [("gamma", p.gamma), ("k0l0*nu", p.k0l0 * p.nu)];
    let mut slow = vec![("omega0", omega0)];
    if p.k0l0 > 0.0 {
        slow.push(("c/l0", omega0 / p.k0l0));
    }
    for (fname, f) in fast {
        for &(sname, s) in &slow {
            if f > ratio * s {
                report.warnings.push(format!(
                    "{fname} = {f:.6e} is not small against {sname} = {s:.6e} (ratio {:.3e} > {ratio})",
                    f / s
                ));
            }
        }
    }
    report
}

/// Effective decay rate and level shift in the short-delay limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModifiedRates {
    pub gamma_eff: f64,
    /// `omega0_eff - omega0`.
    pub shift: f64,
}

pub fn modified_rates(p: &ScenarioParams) -> ModifiedRates {
    let j0 = bessel_j(0, 2.0 * p.k0l0).unwrap_or(f64::NAN);
    let phi = p.phase();
    ModifiedRates {
        gamma_eff: p.gamma * (1.0 - p.epsilon * j0 * phi.cos()),
        shift: -0.5 * p.epsilon * p.gamma * j0 * phi.sin(),
    }
}

fn mirror_factor(p: &ScenarioParams, t: f64) -> C64 {
    let arg = (p.nu * t).sin() + (p.nu * (t - p.tau)).sin();
    C64::from_polar(1.0, -p.k0l0 * arg)
}

/// Fourth-order Runge–Kutta solution of the delay equation on `grid`.
///
/// When `tau > 0` the step is reduced to `tau / ceil(tau / dt)` so that the
/// delay is a whole number of steps; the returned trace carries the adjusted
/// grid and still reaches the requested end time. Delayed midpoint values come
/// from cubic Hermite interpolation of the stored solution.
pub fn dde_solve(p: &ScenarioParams, grid: &TimeGrid) -> Result<AmplitudeTrace> {
    p.validate()?;
    grid.validate_for(p)?;
    if grid.t_start != 0.0 {
        return Err(Error::config("t_start", "the delay equation starts at t = 0"));
    }
    let grid = delay_aligned(p, grid);
    let h = grid.dt;
    let half_g = 0.5 * p.gamma;
    let feedback = C64::from_polar(p.epsilon, p.phase());
    let rhs = |t: f64, c: C64, delayed: C64| -> C64 { -half_g * (c - feedback * mirror_factor(p, t) * delayed) };

    let n = grid.n_steps;
    let mut c = vec![C64::new(0.0, 0.0); n];
    let mut slope = vec![C64::new(0.0, 0.0); n];
    c[0] = C64::new(1.0, 0.0);

    if p.tau == 0.0 {
        for i in 0..n - 1 {
            let t = grid.time(i);
            let ci = c[i];
            let k1 = rhs(t, ci, ci);
            let y2 = ci + 0.5 * h * k1;
            let k2 = rhs(t + 0.5 * h, y2, y2);
            let y3 = ci + 0.5 * h * k2;
            let k3 = rhs(t + 0.5 * h, y3, y3);
            let y4 = ci + h * k3;
            let k4 = rhs(t + h, y4, y4);
            c[i + 1] = ci + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        return Ok(AmplitudeTrace {
            grid,
            values: c,
            frame: Frame::Rotating,
        });
    }

    let lag = (p.tau / h).round() as usize;
    let zero = C64::new(0.0, 0.0);
    for i in 0..n - 1 {
        let t = grid.time(i);
        let (d0, dm, d1) = if i < lag {
            (zero, zero, zero)
        } else {
            let j = i - lag;
            // The slope at t = tau jumps; the interval ending there needs its
            // left-hand value, where the delayed amplitude is still zero.
            let right_slope = if j + 1 == lag { -half_g * c[lag] } else { slope[j + 1] };
            let mid = 0.5 * (c[j] + c[j + 1]) + h * (slope[j] - right_slope) / 8.0;
            (c[j], mid, c[j + 1])
        };
        let ci = c[i];
        let k1 = rhs(t, ci, d0);
        slope[i] = k1;
        let k2 = rhs(t + 0.5 * h, ci + 0.5 * h * k1, dm);
        let k3 = rhs(t + 0.5 * h, ci + 0.5 * h * k2, dm);
        let k4 = rhs(t + h, ci + h * k3, d1);
        c[i + 1] = ci + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    Ok(AmplitudeTrace {
        grid,
        values: c,
        frame: Frame::Rotating,
    })
}

fn delay_aligned(p: &ScenarioParams, grid: &TimeGrid) -> TimeGrid {
    if p.tau == 0.0 {
        return *grid;
    }
    let per_delay = (p.tau / grid.dt - 1e-9).ceil().max(1.0);
    let dt = p.tau / per_delay;
    if dt == grid.dt {
        return *grid;
    }
    TimeGrid::covering(grid.t_end(), dt)
}

/// First-order solution in `epsilon`, exact up to `t = 2 tau`.
pub fn analytic_first_order(p: &ScenarioParams, grid: &TimeGrid) -> Result<AmplitudeTrace> {
    analytic_first_order_with(p, grid, None)
}

/// As [`analytic_first_order`] with an explicit sideband cutoff `|m| <= m_max`.
pub fn analytic_first_order_with(p: &ScenarioParams, grid: &TimeGrid, m_max: Option<usize>) -> Result<AmplitudeTrace> {
    p.validate()?;
    let theta = p.nu_tau();
    let m_max = match m_max {
        Some(m) => m,
        None => pi_truncation_order(p.k0l0, theta, PI_TAIL_TOLERANCE)?,
    };
    let pis = pi_factors(p.k0l0, theta, m_max, None)?;
    let prefactor = C64::from_polar(0.5 * p.epsilon * p.gamma, p.phase());
    let values = grid
        .times()
        .map(|t| {
            let free = C64::new((-0.5 * p.gamma * t).exp(), 0.0);
            let s = t - p.tau;
            if s <= 0.0 {
                return free;
            }
            let integral: C64 = pis
                .iter()
                .enumerate()
                .map(|(idx, pi)| {
                    let w = (idx as f64 - m_max as f64) * p.nu;
                    pi * C64::from_polar(s, -w * p.tau) * exprel(C64::new(0.0, -w * s))
                })
                .sum();
            free + prefactor * (-0.5 * p.gamma * s).exp() * integral
        })
        .collect();
    Ok(AmplitudeTrace {
        grid: *grid,
        values,
        frame: Frame::Rotating,
    })
}

/// Short-delay closed form, in the same rotating frame as [`dde_solve`]
/// (the level shift appears as the phase `e^{-i shift t}`).
pub fn markov_amplitude(p: &ScenarioParams, grid: &TimeGrid) -> Result<AmplitudeTrace> {
    markov_amplitude_with(p, grid, None)
}

pub fn markov_amplitude_with(p: &ScenarioParams, grid: &TimeGrid, range: Option<BesselOrderRange>) -> Result<AmplitudeTrace> {
    p.validate()?;
    let rates = modified_rates(p);
    let arg = 2.0 * p.k0l0;
    let range = range.unwrap_or_else(|| BesselOrderRange::for_argument(arg));
    let table = bessel_j_orders(range.n_max, arg)?;
    let coupling = C64::from_polar(0.5 * p.epsilon * p.gamma, p.phase());
    let decay = C64::new(0.5 * rates.gamma_eff, rates.shift);
    let values = grid
        .times()
        .map(|t| {
            // (e^{-i n nu t} - 1) / (i n nu) = -t exprel(-i n nu t), finite at nu = 0.
            let ripple: C64 = range
                .orders()
                .filter(|&n| n != 0)
                .map(|n| signed_order(&table, n) * -t * exprel(C64::new(0.0, -(n as f64) * p.nu * t)))
                .sum();
            (-decay * t - coupling * ripple).exp()
        })
        .collect();
    Ok(AmplitudeTrace {
        grid: *grid,
        values,
        frame: Frame::Rotating,
    })
}
