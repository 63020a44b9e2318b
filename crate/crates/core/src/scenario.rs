//! Scenario parameters, sampling grids and the sampled amplitude containers
//! shared by every computation.
//!
//! Units: `gamma` sets the time scale. Times are in units of `1/gamma`,
//! frequencies and detunings in units of `gamma` (with the default `gamma = 1`
//! the two coincide). The speed of light never appears; only the phases
//! `k0l0`, `k0R`, `omega0_tau` and the delays `tau`, `d/c` do.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Physical inputs of one atom–mirror configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioParams {
    /// Free-space decay rate.
    pub gamma: f64,
    /// Fraction of the emission that is collected onto the mirror.
    pub epsilon: f64,
    /// Mirror angular frequency.
    pub nu: f64,
    /// Mean atom–mirror–atom round-trip time `2R/c`.
    pub tau: f64,
    /// Mirror amplitude as an optical phase, `k0 * l0`.
    pub k0l0: f64,
    /// Atom position as an optical phase, `k0 * R`.
    #[serde(rename = "k0R")]
    pub k0r: f64,
    /// Optical round-trip phase `omega0 * tau`. `None` derives it as
    /// `2 k0R mod 2 pi`.
    pub omega0_tau: Option<f64>,
    /// Retardation from the atom to the detector.
    pub d_over_c: f64,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            epsilon: 0.5,
            nu: 0.0,
            tau: 0.0,
            k0l0: 0.0,
            k0r: 0.0,
            omega0_tau: None,
            d_over_c: 0.0,
        }
    }
}

impl ScenarioParams {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_nu(mut self, nu: f64) -> Self {
        self.nu = nu;
        self
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    pub fn with_k0l0(mut self, k0l0: f64) -> Self {
        self.k0l0 = k0l0;
        self
    }

    pub fn with_k0r(mut self, k0r: f64) -> Self {
        self.k0r = k0r;
        self
    }

    /// Sets the optical phase explicitly instead of deriving it from `k0R`.
    pub fn with_omega0_tau(mut self, phase: f64) -> Self {
        self.omega0_tau = Some(phase);
        self
    }

    pub fn with_d_over_c(mut self, d_over_c: f64) -> Self {
        self.d_over_c = d_over_c;
        self
    }

    /// The same scenario with the mirror at rest.
    pub fn static_mirror(&self) -> Self {
        Self {
            k0l0: 0.0,
            ..self.clone()
        }
    }

    /// Optical round-trip phase in `[0, 2 pi)` when derived, as given otherwise.
    pub fn phase(&self) -> f64 {
        self.omega0_tau
            .unwrap_or_else(|| (2.0 * self.k0r).rem_euclid(TAU))
    }

    pub fn phase_is_derived(&self) -> bool {
        self.omega0_tau.is_none()
    }

    /// `nu * tau`, the mirror phase accumulated over one round trip.
    pub fn nu_tau(&self) -> f64 {
        self.nu * self.tau
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("gamma", self.gamma),
            ("epsilon", self.epsilon),
            ("nu", self.nu),
            ("tau", self.tau),
            ("k0l0", self.k0l0),
            ("k0R", self.k0r),
            ("d_over_c", self.d_over_c),
        ];
        for (key, v) in finite {
            if !v.is_finite() {
                return Err(Error::config(key, format!("must be finite, got {v}")));
            }
        }
        if let Some(p) = self.omega0_tau {
            if !p.is_finite() {
                return Err(Error::config("omega0_tau", format!("must be finite, got {p}")));
            }
        }
        if self.gamma <= 0.0 {
            return Err(Error::config("gamma", format!("must be > 0, got {}", self.gamma)));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(Error::config(
                "epsilon",
                format!("must lie in [0, 1], got {}", self.epsilon),
            ));
        }
        for (key, v) in [
            ("nu", self.nu),
            ("tau", self.tau),
            ("k0l0", self.k0l0),
            ("d_over_c", self.d_over_c),
        ] {
            if v < 0.0 {
                return Err(Error::config(key, format!("must be >= 0, got {v}")));
            }
        }
        Ok(())
    }
}

/// Uniform time samples `t_start + i * dt` for `i < n_steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeGrid {
    pub t_start: f64,
    pub dt: f64,
    pub n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, dt: f64, n_steps: usize) -> Self {
        Self { t_start, dt, n_steps }
    }

    /// Grid from 0 with step `dt` whose last sample is at or beyond `t_end`.
    pub fn covering(t_end: f64, dt: f64) -> Self {
        let n = (t_end / dt - 1e-9).ceil().max(0.0) as usize + 1;
        Self::new(0.0, dt, n)
    }

    /// Grid covering `[0, t_end]` with the largest step that respects the
    /// solver limits for `p` and divides `tau` exactly.
    pub fn aligned(p: &ScenarioParams, t_end: f64) -> Self {
        let mut dt = max_step(p);
        if p.tau > 0.0 {
            dt = p.tau / (p.tau / dt - 1e-9).ceil();
        }
        Self::covering(t_end, dt)
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t_start + i as f64 * self.dt
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_steps).map(|i| self.time(i))
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.n_steps.saturating_sub(1))
    }

    /// Checks `dt > 0` and `dt <= min(0.05 / max(nu, gamma), tau / 50)`.
    pub fn validate_for(&self, p: &ScenarioParams) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::config("dt", format!("must be > 0, got {}", self.dt)));
        }
        if self.n_steps == 0 {
            return Err(Error::config("t_end", "time grid is empty"));
        }
        let limit = max_step(p);
        if self.dt > limit * (1.0 + 1e-9) {
            return Err(Error::config(
                "dt",
                format!("{} exceeds the step limit {limit} for this scenario", self.dt),
            ));
        }
        Ok(())
    }
}

/// Largest admissible integration step for `p`.
pub fn max_step(p: &ScenarioParams) -> f64 {
    let mut limit = 0.05 / p.nu.max(p.gamma);
    if p.tau > 0.0 {
        limit = limit.min(p.tau / 50.0);
    }
    limit
}

/// Uniform detuning samples `omega - omega0` between the bounds, inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrequencyGrid {
    pub omega_min: f64,
    pub omega_max: f64,
    pub n_points: usize,
}

impl FrequencyGrid {
    pub fn new(omega_min: f64, omega_max: f64, n_points: usize) -> Self {
        Self {
            omega_min,
            omega_max,
            n_points,
        }
    }

    /// Symmetric grid `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, n_points: usize) -> Self {
        Self::new(-half_width, half_width, n_points)
    }

    pub fn step(&self) -> f64 {
        (self.omega_max - self.omega_min) / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.omega_max
        } else {
            self.omega_min + i as f64 * self.step()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_min < self.omega_max) {
            return Err(Error::config(
                "omega_max",
                format!("must exceed omega_min ({} >= {})", self.omega_min, self.omega_max),
            ));
        }
        if self.n_points < 2 {
            return Err(Error::config("n_points", "need at least 2 points"));
        }
        Ok(())
    }

    /// Trapezoid integral of sampled values over the grid.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        let h = self.step();
        let n = values.len();
        if n < 2 {
            return 0.0;
        }
        h * (values.iter().sum::<f64>() - 0.5 * (values[0] + values[n - 1]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    /// Slowly varying amplitude `c(t) e^{i omega0 t}`.
    Rotating,
    Lab,
}

/// A uniformly sampled complex amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTrace {
    pub grid: TimeGrid,
    pub values: Vec<C64>,
    pub frame: Frame,
}

impl AmplitudeTrace {
    pub fn populations(&self) -> Vec<f64> {
        self.values.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Largest pointwise `|a - b|`; both traces must share a grid.
    pub fn max_abs_diff(&self, other: &AmplitudeTrace) -> f64 {
        assert_eq!(self.values.len(), other.values.len(), "traces on different grids");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, C64)> + '_ {
        self.grid.times().zip(self.values.iter().copied())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Channel {
    /// Along the atom–mirror axis.
    A,
    /// Perpendicular, unaffected by the mirror.
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Markovian,
    NonMarkovian,
}

/// Photon amplitude over detuning, normalised so that `sum |c|^2 d omega`
/// is a probability.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeAmplitudeProfile {
    pub grid: FrequencyGrid,
    pub values: Vec<C64>,
    pub channel: Channel,
    pub regime: Regime,
}

impl ModeAmplitudeProfile {
    pub fn populations(&self) -> Vec<f64> {
        self.values.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Photon probability captured by the grid.
    pub fn probability(&self) -> f64 {
        self.grid.integrate(&self.populations())
    }
}
