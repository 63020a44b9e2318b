//! Photon amplitudes in the two emission channels.
//!
//! Channel B is perpendicular to the mirror axis and sees only the modified
//! atomic decay. Channel A runs along the axis; its standing-wave modes are
//! phase modulated by the mirror, which spreads each photon over a comb of
//! sidebands at multiples of `nu`.
//!
//! Couplings are normalised as `g^2 = eps gamma / pi` and
//! `h^2 = (1 - eps) gamma / (2 pi)`, so `integral |c|^2 d(omega)` is a
//! probability. All frequencies are detunings `omega - omega0`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::emission::modified_rates;
use crate::error::{Error, Result};
use crate::mirror_math::{bessel_j_orders, mode_coefficient_from, pi_factor_sum, pi_factors, signed_order, BesselOrderRange};
use crate::scenario::{AmplitudeTrace, Channel, Frame, FrequencyGrid, ModeAmplitudeProfile, Regime, ScenarioParams, TimeGrid};

pub fn coupling_a(p: &ScenarioParams) -> f64 {
    (p.epsilon * p.gamma / PI).sqrt()
}

pub fn coupling_b(p: &ScenarioParams) -> f64 {
    ((1.0 - p.epsilon) * p.gamma / (2.0 * PI)).sqrt()
}

fn profile(grid: &FrequencyGrid, channel: Channel, regime: Regime, f: impl Fn(f64) -> C64) -> Result<ModeAmplitudeProfile> {
    grid.validate()?;
    Ok(ModeAmplitudeProfile {
        grid: *grid,
        values: grid.points().into_iter().map(f).collect(),
        channel,
        regime,
    })
}

/// Channel-B amplitude up to first order in `eps`, carrier part: free-space
/// Lorentzian plus the reabsorption correction weighted by `Pi_0`.
pub fn channel_b_carrier(p: &ScenarioParams, grid: &FrequencyGrid) -> Result<ModeAmplitudeProfile> {
    p.validate()?;
    let h = coupling_b(p);
    let half = 0.5 * p.gamma;
    let pi0 = pi_factor_sum(0, p.k0l0, p.nu_tau(), None)?;
    let corr = p.epsilon * half * pi0 * C64::from_polar(1.0, p.phase());
    profile(grid, Channel::B, Regime::NonMarkovian, |w| {
        let d = C64::new(half, -w);
        h / d + h * corr * C64::from_polar(1.0, w * p.tau) / (d * d)
    })
}

/// Channel-B sidebands `1 <= |m| <= m_max` generated by the moving mirror.
pub fn channel_b_sidebands(p: &ScenarioParams, grid: &FrequencyGrid, m_max: usize) -> Result<ModeAmplitudeProfile> {
    p.validate()?;
    if p.nu == 0.0 {
        return Err(Error::domain(
            "channel_b_sidebands",
            "nu = 0 has no sidebands; use channel_b_carrier",
        ));
    }
    let h = coupling_b(p);
    let half = 0.5 * p.gamma;
    let pis = pi_factors(p.k0l0, p.nu_tau(), m_max, None)?;
    let pre = h * p.epsilon * p.gamma / p.nu * C64::from_polar(1.0, p.phase());
    let terms: Vec<(f64, C64)> = (1..=m_max as i64)
        .flat_map(|m| [m, -m])
        .map(|m| {
            let pi = pis[(m + m_max as i64) as usize];
            (m as f64, pi / C64::new(0.0, 2.0 * m as f64))
        })
        .collect();
    profile(grid, Channel::B, Regime::NonMarkovian, |w| {
        let carrier = 1.0 / C64::new(half, -w);
        let sum: C64 = terms
            .iter()
            .map(|&(m, weight)| {
                let shifted = w - m * p.nu;
                weight * C64::from_polar(1.0, shifted * p.tau) * (carrier - 1.0 / C64::new(half, -shifted))
            })
            .sum();
        pre * sum
    })
}

/// Channel-B steady state with the short-delay decay rate and level shift.
pub fn channel_b_markov(p: &ScenarioParams, grid: &FrequencyGrid) -> Result<ModeAmplitudeProfile> {
    p.validate()?;
    let r = modified_rates(p);
    require_decay(r.gamma_eff)?;
    let h = coupling_b(p);
    profile(grid, Channel::B, Regime::Markovian, |w| h / C64::new(0.5 * r.gamma_eff, -(w - r.shift)))
}

fn require_decay(gamma_eff: f64) -> Result<()> {
    if gamma_eff > 0.0 {
        Ok(())
    } else {
        Err(Error::SteadyStateUndefined { gamma_eff })
    }
}

/// Mode coefficients `A_n` for `|n| <= n_max` at atom phase `k0x`; index
/// `n + n_max` holds `A_n`.
fn mode_coefficients(k0x: f64, table: &[f64], n_max: usize) -> Vec<C64> {
    let n_max = n_max as i64;
    (-n_max..=n_max)
        .map(|n| mode_coefficient_from(n, k0x, signed_order(table, n)))
        .collect()
}

struct MarkovComb {
    g: f64,
    coeffs: Vec<C64>,
    n_max: usize,
    nu: f64,
    shift: f64,
    half_rate: f64,
}

impl MarkovComb {
    fn new(p: &ScenarioParams, n_max: Option<usize>) -> Result<Self> {
        p.validate()?;
        let range = BesselOrderRange::resolve(p.k0l0, n_max);
        let table = bessel_j_orders(range.n_max, p.k0l0)?;
        let r = modified_rates(p);
        Ok(Self {
            g: coupling_a(p),
            coeffs: mode_coefficients(p.k0r, &table, range.n_max),
            n_max: range.n_max,
            nu: p.nu,
            shift: r.shift,
            half_rate: 0.5 * r.gamma_eff,
        })
    }

    fn terms(&self, w: f64) -> impl Iterator<Item = (C64, C64)> + '_ {
        self.coeffs.iter().enumerate().map(move |(idx, a)| {
            let n = idx as f64 - self.n_max as f64;
            (*a, C64::new(-self.half_rate, w - self.shift - n * self.nu))
        })
    }

    fn at(&self, w: f64, t: f64) -> C64 {
        self.g
            * self
                .terms(w)
                .map(|(a, d)| a * t * crate::mirror_math::exprel(d * t))
                .sum::<C64>()
    }

    fn steady(&self, w: f64) -> C64 {
        -self.g * self.terms(w).map(|(a, d)| a / d).sum::<C64>()
    }
}

/// Channel-A amplitude of the mode at detuning `detuning` as a function of
/// time, in the short-delay limit.
pub fn channel_a_time(p: &ScenarioParams, detuning: f64, grid_t: &TimeGrid, n_max: Option<usize>) -> Result<AmplitudeTrace> {
    let comb = MarkovComb::new(p, n_max)?;
    Ok(AmplitudeTrace {
        grid: *grid_t,
        values: grid_t.times().map(|t| comb.at(detuning, t)).collect(),
        frame: Frame::Rotating,
    })
}

/// Channel-A profile over detuning at a fixed time `t`.
pub fn channel_a_snapshot(p: &ScenarioParams, grid: &FrequencyGrid, t: f64, n_max: Option<usize>) -> Result<ModeAmplitudeProfile> {
    let comb = MarkovComb::new(p, n_max)?;
    profile(grid, Channel::A, Regime::Markovian, |w| comb.at(w, t))
}

/// Channel-A steady state in the short-delay limit: a Lorentzian comb of width
/// `gamma_eff` whose even teeth scale with `sin(k0R)` and odd teeth with
/// `cos(k0R)`.
pub fn channel_a_steady_markov(p: &ScenarioParams, grid: &FrequencyGrid, n_max: Option<usize>) -> Result<ModeAmplitudeProfile> {
    let comb = MarkovComb::new(p, n_max)?;
    require_decay(2.0 * comb.half_rate)?;
    profile(grid, Channel::A, Regime::Markovian, |w| comb.steady(w))
}

/// Channel-A steady state with retardation to first order in `eps`.
///
/// The mode coefficients use the position phase of the emitted mode,
/// `kR = k0R + (omega - omega0) tau / 2`.
pub fn channel_a_steady_nonmarkov(p: &ScenarioParams, grid: &FrequencyGrid, m_max: usize) -> Result<ModeAmplitudeProfile> {
    p.validate()?;
    let g = coupling_a(p);
    let half = 0.5 * p.gamma;
    let table = bessel_j_orders(m_max, p.k0l0)?;
    let pi0 = pi_factor_sum(0, p.k0l0, p.nu_tau(), None)?;
    let corr = p.epsilon * half * pi0 * C64::from_polar(1.0, p.phase());
    let m_max = m_max as i64;
    profile(grid, Channel::A, Regime::NonMarkovian, |w| {
        let kr = p.k0r + 0.5 * w * p.tau;
        g * (-m_max..=m_max)
            .map(|m| {
                let a = mode_coefficient_from(m, kr, signed_order(&table, m));
                let shifted = w - m as f64 * p.nu;
                let d = C64::new(half, -shifted);
                a / d + a * corr * C64::from_polar(1.0, shifted * p.tau) / (d * d)
            })
            .sum::<C64>()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::emission::dde_solve;
    use crate::mirror_math::bessel_j;
    use proptest::prelude::*;

    #[test]
    fn free_lorentzian_in_channel_b() {
        let p = ScenarioParams::new().with_epsilon(0.0);
        let prof = channel_b_carrier(&p, &FrequencyGrid::symmetric(2000.0, 400_001)).unwrap();
        assert!((prof.probability() - 1.0).abs() < 1e-3);
        let h2 = 1.0 / (2.0 * PI);
        for (w, c) in prof.grid.points().iter().zip(&prof.values).step_by(997) {
            assert!((c.norm_sqr() - h2 / (0.25 + w * w)).abs() < 1e-14);
        }
    }

    #[test]
    fn half_period_carrier_equals_static() {
        let p = ScenarioParams::new().with_tau(1.0).with_nu(PI).with_k0l0(1.3).with_k0r(0.2);
        let grid = FrequencyGrid::symmetric(10.0, 201);
        let a = channel_b_carrier(&p, &grid).unwrap();
        let b = channel_b_carrier(&p.static_mirror(), &grid).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn sidebands_vanish_for_static_mirror_and_reject_zero_nu() {
        let p = ScenarioParams::new().with_nu(20.0).with_tau(0.3);
        let prof = channel_b_sidebands(&p, &FrequencyGrid::symmetric(50.0, 101), 4).unwrap();
        assert!(prof.values.iter().all(|c| c.norm() == 0.0));
        let err = channel_b_sidebands(&p.with_nu(0.0), &FrequencyGrid::symmetric(1.0, 3), 2);
        assert!(matches!(err, Err(Error::Domain { .. })));
    }

    // Oracle: h * integral_0^inf e^{i w s} c1(s) ds by quadrature, where
    // c1 is the first-order reexcitation amplitude.
    fn sideband_quadrature(p: &ScenarioParams, w: f64, m_max: usize) -> C64 {
        let pis = pi_factors(p.k0l0, p.nu_tau(), m_max, None).unwrap();
        let pre = C64::from_polar(0.5 * p.epsilon * p.gamma, p.phase());
        let c1 = |s: f64| -> C64 {
            let u = s - p.tau;
            (1..=m_max as i64)
                .flat_map(|m| [m, -m])
                .map(|m| {
                    let k = m as f64 * p.nu;
                    let integral = (C64::from_polar(1.0, -k * p.tau) - C64::from_polar(1.0, -k * s)) / C64::new(0.0, k);
                    pis[(m + m_max as i64) as usize] * integral
                })
                .sum::<C64>()
                * pre
                * (-0.5 * p.gamma * u).exp()
        };
        let (a, b, n) = (p.tau, p.tau + 60.0, 600_000);
        let h = (b - a) / n as f64;
        let f = |s: f64| C64::from_polar(1.0, w * s) * c1(s);
        let mut acc = f(a) + f(b);
        for i in 1..n {
            acc += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        coupling_b(p) * acc * h / 3.0
    }

    #[test]
    fn sidebands_match_time_domain_integral() {
        let p = ScenarioParams::new()
            .with_epsilon(0.6)
            .with_nu(5.0)
            .with_tau(0.7)
            .with_k0l0(0.8)
            .with_k0r(0.4);
        let grid = FrequencyGrid::new(-6.0, 6.0, 7);
        let prof = channel_b_sidebands(&p, &grid, 3).unwrap();
        for (w, c) in grid.points().into_iter().zip(&prof.values) {
            let q = sideband_quadrature(&p, w, 3);
            assert!((c - q).norm() < 1e-8 * q.norm().max(1e-3), "w = {w}: {c} vs {q}");
        }
    }

    #[test]
    fn sideband_peaks_scale_inversely_with_nu() {
        let theta = 1.1;
        let peak = |nu: f64| {
            let p = ScenarioParams::new().with_nu(nu).with_tau(theta / nu).with_k0l0(1.0);
            let grid = FrequencyGrid::new(nu - 2.0, nu + 2.0, 4001);
            let prof = channel_b_sidebands(&p, &grid, 6).unwrap();
            let (i, v) = prof
                .populations()
                .into_iter()
                .enumerate()
                .fold((0, 0.0), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
            (grid.point(i), v.sqrt())
        };
        let (w20, a20) = peak(20.0);
        let (w100, a100) = peak(100.0);
        assert!((w20 - 20.0).abs() < 0.05 && (w100 - 100.0).abs() < 0.05);
        assert!(((a20 / a100) / 5.0 - 1.0).abs() < 0.05);
    }

    #[test]
    fn sideband_half_width_is_half_gamma() {
        let p = ScenarioParams::new().with_nu(40.0).with_tau(0.05).with_k0l0(0.7);
        let grid = FrequencyGrid::new(38.0, 42.0, 40001);
        let pops = channel_b_sidebands(&p, &grid, 5).unwrap().populations();
        let top = pops.iter().cloned().fold(0.0, f64::max);
        let above: Vec<f64> = grid
            .points()
            .into_iter()
            .zip(&pops)
            .filter(|(_, v)| **v >= 0.5 * top)
            .map(|(w, _)| w)
            .collect();
        let fwhm = above.last().unwrap() - above[0];
        assert!((fwhm / 2.0 - 0.5).abs() < 0.02, "half width {}", fwhm / 2.0);
    }

    #[test]
    fn probability_is_conserved_for_static_markov_case() {
        for eps in [0.0, 0.5] {
            for k0r in [0.0, 0.4, PI / 2.0] {
                let p = ScenarioParams::new().with_epsilon(eps).with_k0r(k0r);
                let r = modified_rates(&p);
                let grid = FrequencyGrid::symmetric(20.0 * r.gamma_eff.max(p.gamma), 40001);
                let a = channel_a_steady_markov(&p, &grid, None).unwrap().probability();
                let b = channel_b_markov(&p, &grid).unwrap().probability();
                assert!((a + b - 1.0).abs() < 0.02, "eps {eps} k0R {k0r}: {}", a + b);
            }
        }
    }

    #[test]
    fn time_dependent_amplitude_approaches_steady_state() {
        let p = ScenarioParams::new().with_nu(20.0).with_k0l0(1.0).with_k0r(0.3);
        let r = modified_rates(&p);
        let steady = channel_a_steady_markov(&p, &FrequencyGrid::new(-45.0, 45.0, 19), None).unwrap();
        let g = coupling_a(&p);
        let sum_abs: f64 = (-20..=20i64)
            .map(|n| {
                let a = crate::mirror_math::mode_coefficient_a(n, p.k0r, p.k0l0).unwrap();
                a.norm()
            })
            .sum();
        for (w, c_inf) in steady.grid.points().into_iter().zip(&steady.values) {
            let t20 = 20.0 / r.gamma_eff;
            let tr = channel_a_time(&p, w, &TimeGrid::new(0.0, t20, 3), None).unwrap();
            assert_eq!(tr.values[0].norm(), 0.0);
            // The transient is bounded by e^{-gamma_eff t / 2} times the comb weight.
            let bound = (-10.0f64).exp() * g * sum_abs / (0.5 * r.gamma_eff);
            assert!((tr.values[1] - c_inf).norm() <= bound);
            assert!((tr.values[2] - c_inf).norm() <= 1e-6 * c_inf.norm());
        }
    }

    #[test]
    fn static_mirror_channel_a_is_single_lorentzian() {
        let p = ScenarioParams::new().with_k0r(0.7).with_epsilon(0.4);
        let r = modified_rates(&p);
        let grid = FrequencyGrid::symmetric(5.0, 51);
        let prof = channel_a_steady_markov(&p, &grid, None).unwrap();
        for (w, c) in grid.points().into_iter().zip(&prof.values) {
            let expect = coupling_a(&p) * 0.7f64.sin() / C64::new(0.5 * r.gamma_eff, -(w - r.shift));
            assert!((c - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn undefined_steady_state_is_reported() {
        let p = ScenarioParams::new().with_epsilon(1.0).with_omega0_tau(0.0);
        let err = channel_a_steady_markov(&p, &FrequencyGrid::symmetric(1.0, 3), None);
        assert!(matches!(err, Err(Error::SteadyStateUndefined { .. })));
        assert!(channel_a_time(&p, 0.0, &TimeGrid::new(0.0, 0.1, 5), None).is_ok());
    }

    #[test]
    fn antinode_and_node_select_even_and_odd_teeth() {
        let nu = 50.0;
        let base = ScenarioParams::new().with_nu(nu).with_k0l0(1.0).with_epsilon(0.5);
        let at_teeth = |k0r: f64| {
            let p = base.clone().with_k0r(k0r);
            let r = modified_rates(&p);
            let grid = FrequencyGrid::new(r.shift - 2.0 * nu, r.shift + 2.0 * nu, 5);
            channel_a_steady_markov(&p, &grid, None).unwrap().populations()
        };
        let odd = at_teeth(0.0);
        let even = at_teeth(PI / 2.0);
        for i in [1, 3] {
            assert!(odd[i] > 1e3 * even[i]);
        }
        for i in [0, 2, 4] {
            assert!(even[i] > 1e3 * odd[i]);
        }
    }

    #[test]
    fn central_tooth_suppressed_at_bessel_root() {
        let root = 2.404_825_557_695_773;
        let p = ScenarioParams::new().with_nu(20.0).with_k0l0(root).with_k0r(PI / 2.0);
        let r = modified_rates(&p);
        let grid = FrequencyGrid::new(r.shift - 40.0, r.shift + 40.0, 5);
        let pops = channel_a_steady_markov(&p, &grid, None).unwrap().populations();
        assert!(pops[2] < 1e-3 * pops[0].max(pops[4]));
    }

    #[test]
    fn nonmarkov_static_profile_matches_hand_formula() {
        let p = ScenarioParams::new().with_tau(1.0).with_k0r(0.9).with_epsilon(0.3);
        let grid = FrequencyGrid::symmetric(6.0, 61);
        let prof = channel_a_steady_nonmarkov(&p, &grid, 4).unwrap();
        let g = coupling_a(&p);
        for (w, c) in grid.points().into_iter().zip(&prof.values) {
            let s = (0.9 + 0.5 * w).sin();
            let d = C64::new(0.5, -w);
            let expect = g * s * (1.0 / d + 0.3 * 0.5 * C64::from_polar(1.0, 1.8 + w) / (d * d));
            assert!((c - expect).norm() < 1e-13);
        }
    }

    #[test]
    fn nonmarkov_reduces_to_markov_without_delay() {
        let p = ScenarioParams::new().with_epsilon(1e-8).with_nu(20.0).with_k0l0(1.2).with_k0r(0.5);
        let grid = FrequencyGrid::symmetric(45.0, 181);
        let a = channel_a_steady_nonmarkov(&p, &grid, 17).unwrap();
        let b = channel_a_steady_markov(&p, &grid, Some(17)).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).norm() <= 1e-6 * y.norm().max(1e-6));
        }
    }

    #[test]
    fn nonmarkov_sidebands_become_asymmetric() {
        let nu = 10.0;
        let asym = [0.0, PI / 8.0, PI / 4.0, PI / 2.0]
            .iter()
            .map(|&k0r| {
                let p = ScenarioParams::new().with_tau(1.0).with_nu(nu).with_k0l0(1.0).with_k0r(k0r);
                let grid = FrequencyGrid::new(-nu, nu, 3);
                let pops = channel_a_steady_nonmarkov(&p, &grid, 12).unwrap().populations();
                (pops[2] / pops[0] - 1.0).abs()
            })
            .fold(0.0, f64::max);
        assert!(asym > 0.05, "asymmetry {asym}");
    }

    #[test]
    fn carrier_matches_delay_equation_spectrum() {
        // h * integral e^{i w t} c(t) dt from the numerical amplitude; with a
        // small eps the first-order profile must agree to O(eps^2).
        let p = ScenarioParams::new().with_epsilon(0.02).with_tau(1.0).with_nu(3.0).with_k0l0(0.6).with_k0r(0.3);
        let tr = dde_solve(&p, &TimeGrid::covering(60.0, 0.002)).unwrap();
        let grid = FrequencyGrid::new(-4.0, 4.0, 9);
        let carrier = channel_b_carrier(&p, &grid).unwrap();
        let side = channel_b_sidebands(&p, &grid, 8).unwrap();
        let h = coupling_b(&p);
        for (i, w) in grid.points().into_iter().enumerate() {
            let dt = tr.grid.dt;
            let f: Vec<C64> = tr.samples().map(|(t, c)| C64::from_polar(1.0, w * t) * c).collect();
            let n = f.len() - 1;
            let simpson: C64 = f
                .iter()
                .enumerate()
                .map(|(k, v)| v * if k == 0 || k == n { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 })
                .sum::<C64>()
                * dt
                / 3.0;
            let num = h * simpson;
            let ana = carrier.values[i] + side.values[i];
            assert!((num - ana).norm() < 4.0 * p.epsilon.powi(2) * h * 4.0);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn even_and_odd_weights_follow_position(z in 0.0f64..3.0, r1 in 0.1f64..1.4, r2 in 0.1f64..1.4) {
            let table = bessel_j_orders(20, z).unwrap();
            let a1 = mode_coefficients(r1, &table, 20);
            let a2 = mode_coefficients(r2, &table, 20);
            for n in [-4i64, -2, 0, 2, 4] {
                let j = bessel_j(n, z).unwrap();
                if j.abs() > 1e-6 {
                    let ratio = a1[(n + 20) as usize].re / a2[(n + 20) as usize].re;
                    prop_assert!((ratio - r1.sin() / r2.sin()).abs() < 1e-10 * (r1.sin() / r2.sin()).abs().max(1.0));
                }
            }
            for n in [-3i64, -1, 1, 3] {
                let j = bessel_j(n, z).unwrap();
                if j.abs() > 1e-6 {
                    let ratio = a1[(n + 20) as usize].im / a2[(n + 20) as usize].im;
                    prop_assert!((ratio - r1.cos() / r2.cos()).abs() < 1e-10 * (r1.cos() / r2.cos()).abs().max(1.0));
                }
            }
        }

        #[test]
        fn late_time_snapshot_equals_steady_state(
            nu in 5.0f64..50.0,
            z in 0.0f64..2.5,
            k0r in 0.0f64..3.1,
            eps in 0.0f64..0.9,
        ) {
            let p = ScenarioParams::new().with_nu(nu).with_k0l0(z).with_k0r(k0r).with_epsilon(eps);
            let r = modified_rates(&p);
            let grid = FrequencyGrid::symmetric(2.5 * nu, 41);
            let steady = channel_a_steady_markov(&p, &grid, None).unwrap();
            let late = channel_a_snapshot(&p, &grid, 40.0 / r.gamma_eff, None).unwrap();
            let scale = steady.values.iter().map(|c| c.norm()).fold(0.0, f64::max);
            for (x, y) in late.values.iter().zip(&steady.values) {
                prop_assert!((x - y).norm() <= 1e-6 * y.norm().max(1e-2 * scale));
            }
        }
    }
}
