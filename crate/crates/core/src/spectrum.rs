//! Operational emission spectrum seen by a detector behind a tunable filter.
//!
//! The detector field is a c-number: a direct pulse plus a phase-modulated
//! copy reflected from the mirror. A filter with response
//! `Gamma_D Theta(t) e^{-(Gamma_D + i omega_D) t}` is convolved with it and the
//! squared modulus gives the filtered energy density. For a narrow filter
//! and late times this reduces to a coherent comb of Lorentzians weighted by
//! the carrier and sideband strengths.
//!
//! Everything is in the detuning frame: frequencies are `omega - omega0`, and
//! the level shift enters as the phase `e^{-i shift t}`.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::emission::{modified_rates, ModifiedRates};
use crate::error::{Error, Result};
use crate::mirror_math::{bessel_j, bessel_j_orders, signed_order, BesselOrderRange};
use crate::scenario::{FrequencyGrid, ScenarioParams};

/// Filter observation time in units of `1/Gamma_D` when none is given.
pub const DEFAULT_OBSERVATION_BANDWIDTHS: f64 = 30.0;

/// Relative tolerance of the step-halving check in the filter quadrature.
pub const QUADRATURE_TOLERANCE: f64 = 0.01;

const RESYNC_INTERVAL: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FilterSpec {
    pub omega_d: f64,
    pub gamma_d: f64,
}

impl FilterSpec {
    pub fn new(omega_d: f64, gamma_d: f64) -> Self {
        Self { omega_d, gamma_d }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma_d > 0.0) || !self.gamma_d.is_finite() {
            return Err(Error::config("Gamma_D", format!("must be > 0, got {}", self.gamma_d)));
        }
        if !self.omega_d.is_finite() {
            return Err(Error::config("omega_D", "must be finite"));
        }
        Ok(())
    }

    pub fn default_time(&self) -> f64 {
        DEFAULT_OBSERVATION_BANDWIDTHS / self.gamma_d
    }
}

/// Carrier strength convention.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CarrierModel {
    /// `1 - e^{i omega0 tau} J_0(2 k0l0)`, the `k = 0` term of the reflected
    /// double Bessel sum.
    #[default]
    Full,
    /// `1 - e^{i omega0 tau} J_0(k0l0)^2`, keeping only `n = m = 0`.
    J0Squared,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    Raw,
    /// Divided by the largest value on the grid.
    #[default]
    PeakNormalized,
    /// Divided by the value at the shifted carrier frequency.
    CarrierNormalized,
}

/// Carrier and sideband strengths of the ideal-resolution spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SidebandTable {
    pub b0: C64,
    /// `B_m` for `1 <= |m| <= m_max`.
    pub entries: BTreeMap<i64, C64>,
}

impl SidebandTable {
    pub fn get(&self, m: i64) -> Option<C64> {
        if m == 0 {
            Some(self.b0)
        } else {
            self.entries.get(&m).copied()
        }
    }

    pub fn m_max(&self) -> usize {
        self.entries.keys().map(|m| m.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// `sum_{m != 0} |B_m|^2`.
    pub fn sideband_weight(&self) -> f64 {
        self.entries.values().map(|b| b.norm_sqr()).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub grid: FrequencyGrid,
    pub values: Vec<f64>,
    pub normalization: Normalization,
    /// Divisor applied to the raw values.
    pub scale: f64,
}

impl SpectrumResult {
    fn normalized(grid: FrequencyGrid, raw: Vec<f64>, normalization: Normalization, carrier_value: impl FnOnce() -> f64) -> Result<Self> {
        let scale = match normalization {
            Normalization::Raw => 1.0,
            Normalization::PeakNormalized => raw.iter().cloned().fold(0.0, f64::max),
            Normalization::CarrierNormalized => carrier_value(),
        };
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::domain("normalize spectrum", format!("reference value {scale} cannot be used")));
        }
        Ok(Self {
            grid,
            values: raw.into_iter().map(|v| v / scale).collect(),
            normalization,
            scale,
        })
    }

    /// Grid points of strict local maxima.
    pub fn local_maxima(&self) -> Vec<(f64, f64)> {
        let v = &self.values;
        (1..v.len().saturating_sub(1))
            .filter(|&i| v[i] > v[i - 1] && v[i] >= v[i + 1])
            .map(|i| (self.grid.point(i), v[i]))
            .collect()
    }
}

/// Default comb cutoff: the first `m >= max(1, ceil(2 k0l0))` with
/// `|J_m(2 k0l0)| < 1e-8`, plus two.
pub fn default_comb_order(k0l0: f64) -> usize {
    let x = 2.0 * k0l0;
    let start = (x.ceil() as usize).max(1);
    let table = bessel_j_orders(start + 60, x).unwrap_or_default();
    let first = (start..table.len()).find(|&m| table[m].abs() < 1e-8).unwrap_or(table.len());
    first + 2
}

pub fn sideband_strengths(p: &ScenarioParams, m_max: usize) -> Result<SidebandTable> {
    sideband_strengths_with(p, m_max, CarrierModel::Full)
}

pub fn sideband_strengths_with(p: &ScenarioParams, m_max: usize, carrier: CarrierModel) -> Result<SidebandTable> {
    p.validate()?;
    let x = 2.0 * p.k0l0;
    let table = bessel_j_orders(m_max, x)?;
    let phase = C64::from_polar(1.0, p.phase());
    let j0 = match carrier {
        CarrierModel::Full => table[0],
        CarrierModel::J0Squared => bessel_j(0, p.k0l0)?.powi(2),
    };
    let retard = p.tau + p.d_over_c;
    let entries = (1..=m_max as i64)
        .flat_map(|m| [-m, m])
        .map(|m| {
            let b = phase * C64::from_polar(signed_order(&table, m), -(m as f64) * p.nu * retard);
            (m, b)
        })
        .collect();
    Ok(SidebandTable {
        b0: 1.0 - phase * j0,
        entries,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    pub m_max: Option<usize>,
    pub carrier: CarrierModel,
    pub normalization: Normalization,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            m_max: None,
            carrier: CarrierModel::Full,
            normalization: Normalization::PeakNormalized,
        }
    }
}

/// Coherent Lorentzian comb, the ideal-resolution limit of the filtered
/// spectrum, with the default options.
pub fn spectrum_ideal(p: &ScenarioParams, grid: &FrequencyGrid, m_max: Option<usize>) -> Result<SpectrumResult> {
    spectrum_ideal_with(
        p,
        grid,
        &SpectrumOptions {
            m_max,
            ..Default::default()
        },
    )
}

pub fn spectrum_ideal_with(p: &ScenarioParams, grid: &FrequencyGrid, opts: &SpectrumOptions) -> Result<SpectrumResult> {
    grid.validate()?;
    let rates = decaying_rates(p)?;
    let m_max = opts.m_max.unwrap_or_else(|| default_comb_order(p.k0l0));
    let table = sideband_strengths_with(p, m_max, opts.carrier)?;
    let eval = |w: f64| ideal_amplitude(&table, &rates, p.nu, w).norm_sqr();
    let raw: Vec<f64> = grid.points().into_iter().map(eval).collect();
    SpectrumResult::normalized(*grid, raw, opts.normalization, || eval(rates.shift))
}

fn ideal_amplitude(table: &SidebandTable, r: &ModifiedRates, nu: f64, w: f64) -> C64 {
    let lorentz = |x: f64| 1.0 / C64::new(-0.5 * r.gamma_eff, x - r.shift);
    table.b0 * lorentz(w)
        - table
            .entries
            .iter()
            .map(|(&m, b)| b * lorentz(w - m as f64 * nu))
            .sum::<C64>()
}

fn decaying_rates(p: &ScenarioParams) -> Result<ModifiedRates> {
    p.validate()?;
    let r = modified_rates(p);
    if r.gamma_eff > 0.0 {
        Ok(r)
    } else {
        Err(Error::SteadyStateUndefined { gamma_eff: r.gamma_eff })
    }
}

/// Rotating-frame c-number field at the detector, with the overall
/// coupling constant set to one.
#[derive(Debug, Clone)]
pub struct DetectorField {
    decay: C64,
    phase: C64,
    direct_delay: f64,
    reflected_delay: f64,
    nu: f64,
    table: Vec<f64>,
    n_max: usize,
    gamma_eff: f64,
}

impl DetectorField {
    pub fn new(p: &ScenarioParams, n_max: Option<usize>) -> Result<Self> {
        p.validate()?;
        let r = modified_rates(p);
        let range = BesselOrderRange::resolve(p.k0l0, n_max);
        Ok(Self {
            decay: C64::new(0.5 * r.gamma_eff, r.shift),
            phase: C64::from_polar(1.0, p.phase()),
            direct_delay: p.d_over_c,
            reflected_delay: p.tau + p.d_over_c,
            nu: p.nu,
            table: bessel_j_orders(range.n_max, p.k0l0)?,
            n_max: range.n_max,
            gamma_eff: r.gamma_eff,
        })
    }

    /// Pulse travelling straight to the detector.
    pub fn direct(&self, t: f64) -> C64 {
        if t < self.direct_delay {
            return C64::new(0.0, 0.0);
        }
        (-self.decay * (t - self.direct_delay)).exp()
    }

    /// Phase-modulated pulse arriving after the mirror round trip.
    pub fn reflected(&self, t: f64) -> C64 {
        if t < self.reflected_delay {
            return C64::new(0.0, 0.0);
        }
        let s = self.modulation(t);
        -self.phase * s * s * (-self.decay * (t - self.reflected_delay)).exp()
    }

    pub fn at(&self, t: f64) -> C64 {
        self.direct(t) + self.reflected(t)
    }

    /// Truncated `sum_n J_n(k0l0) e^{-i n nu t}`.
    fn modulation(&self, t: f64) -> C64 {
        let base = C64::from_polar(1.0, -self.nu * t);
        let mut power = C64::new(1.0, 0.0);
        let mut s = C64::new(self.table[0], 0.0);
        for n in 1..=self.n_max {
            power *= base;
            let jn = self.table[n];
            let jm = if n % 2 == 0 { jn } else { -jn };
            s += jn * power + jm * power.conj();
        }
        s
    }

    /// Time after which both pulses are below `1e-18` of their bound.
    fn cutoff(&self) -> f64 {
        let weight: f64 = self.table[0].abs() + 2.0 * self.table[1..].iter().map(|j| j.abs()).sum::<f64>();
        let decades = (1e18f64).ln() + 2.0 * weight.max(1.0).ln();
        self.reflected_delay + 2.0 * decades / self.gamma_eff
    }
}

pub fn detector_field(p: &ScenarioParams, t: f64) -> Result<C64> {
    Ok(DetectorField::new(p, None)?.at(t))
}

/// Field samples on the quadrature grid for one observation time, shared
/// between filter settings.
#[derive(Debug, Clone)]
pub struct SampledField {
    t_obs: f64,
    segments: Vec<Segment>,
}

#[derive(Debug, Clone)]
struct Segment {
    start: f64,
    /// Fine step; the coarse rule uses every second sample.
    step: f64,
    values: Vec<C64>,
}

impl SampledField {
    /// Samples the field on `[d/c, min(t, cutoff)]` with a step of at most
    /// `max_step / 2`, splitting at the arrival of the reflected pulse.
    pub fn new(field: &DetectorField, t: f64, max_step: f64) -> Result<Self> {
        if !(max_step > 0.0) || !max_step.is_finite() {
            return Err(Error::config("quadrature_dt", format!("must be > 0, got {max_step}")));
        }
        if !(field.gamma_eff > 0.0) {
            return Err(Error::SteadyStateUndefined {
                gamma_eff: field.gamma_eff,
            });
        }
        let end = t.min(field.cutoff());
        let mut segments = Vec::new();
        let mid = field.reflected_delay.min(end);
        if mid > field.direct_delay {
            segments.push(Segment::sample(field.direct_delay, mid, max_step, |s| field.direct(s)));
        }
        if end > field.reflected_delay {
            segments.push(Segment::sample(field.reflected_delay, end, max_step, |s| field.at(s)));
        }
        Ok(Self { t_obs: t, segments })
    }

    /// The same field multiplied by `e^{i angle}`.
    pub fn rotated(&self, angle: f64) -> Self {
        let u = C64::from_polar(1.0, angle);
        let mut out = self.clone();
        for seg in &mut out.segments {
            for v in &mut seg.values {
                *v *= u;
            }
        }
        out
    }

    /// Filter output `integral f(t - t') E(t') dt'`, checked against the
    /// same rule with twice the step.
    pub fn filtered_amplitude(&self, f: &FilterSpec) -> Result<C64> {
        f.validate()?;
        let mut fine = C64::new(0.0, 0.0);
        let mut coarse = C64::new(0.0, 0.0);
        let mut magnitude = 0.0;
        for seg in &self.segments {
            let (a, b, m) = seg.simpson(f, self.t_obs);
            fine += a;
            coarse += b;
            magnitude += m;
        }
        let diff = (fine - coarse).norm();
        if diff > QUADRATURE_TOLERANCE * fine.norm() + 1e-9 * magnitude {
            return Err(Error::Convergence {
                op: "filtered_energy_density",
                reason: format!(
                    "step halving changed the filter output by {:.3e} (relative {:.3e}); reduce quadrature_dt",
                    diff,
                    diff / fine.norm()
                ),
            });
        }
        Ok(fine)
    }
}

impl Segment {
    fn sample(a: f64, b: f64, max_step: f64, f: impl Fn(f64) -> C64) -> Self {
        let coarse = 2 * ((b - a) / (2.0 * max_step)).ceil().max(1.0) as usize;
        let n = 2 * coarse;
        let step = (b - a) / n as f64;
        let values = (0..=n)
            .map(|k| f(if k == n { b } else { a + k as f64 * step }))
            .collect();
        Self { start: a, step, values }
    }

    /// Fine and coarse Simpson sums plus an L1 bound of the integrand.
    fn simpson(&self, f: &FilterSpec, t_obs: f64) -> (C64, C64, f64) {
        let rate = C64::new(f.gamma_d, f.omega_d);
        let kernel_at = |t: f64| f.gamma_d * (-rate * (t_obs - t)).exp();
        let ratio = (rate * self.step).exp();
        let n = self.values.len() - 1;
        let mut kernel = kernel_at(self.start);
        let mut fine = C64::new(0.0, 0.0);
        let mut coarse = C64::new(0.0, 0.0);
        let mut magnitude = 0.0;
        for (k, v) in self.values.iter().enumerate() {
            if k > 0 {
                kernel = if k % RESYNC_INTERVAL == 0 {
                    kernel_at(self.start + k as f64 * self.step)
                } else {
                    kernel * ratio
                };
            }
            let term = kernel * v;
            magnitude += term.norm();
            let wf = simpson_weight(k, n);
            fine += term * wf;
            if k % 2 == 0 {
                coarse += term * simpson_weight(k / 2, n / 2);
            }
        }
        let h = self.step;
        (fine * h / 3.0, coarse * 2.0 * h / 3.0, magnitude * h)
    }
}

fn simpson_weight(k: usize, n: usize) -> f64 {
    if k == 0 || k == n {
        1.0
    } else if k % 2 == 1 {
        4.0
    } else {
        2.0
    }
}

/// Largest step satisfying the resolution rule for filter setting `omega_d`.
pub fn default_quadrature_step(p: &ScenarioParams, gamma_d: f64, omega_d_max: f64) -> f64 {
    let r = modified_rates(p);
    let m_max = default_comb_order(p.k0l0) as f64;
    (0.02 / gamma_d).min(0.02 / (omega_d_max.abs() + p.nu * m_max + r.gamma_eff.abs()))
}

/// `|integral f(t - t') E(t') dt'|^2` by direct quadrature.
pub fn filtered_energy_density(p: &ScenarioParams, f: &FilterSpec, t: f64, quadrature_dt: f64) -> Result<f64> {
    f.validate()?;
    let field = DetectorField::new(p, None)?;
    let samples = SampledField::new(&field, t, quadrature_dt)?;
    Ok(samples.filtered_amplitude(f)?.norm_sqr())
}

/// Filtered energy density over a scan of filter settings with a common
/// bandwidth; settings are evaluated in parallel on shared field samples.
pub fn filtered_scan(
    p: &ScenarioParams,
    gamma_d: f64,
    grid: &FrequencyGrid,
    t: f64,
    quadrature_dt: Option<f64>,
    normalization: Normalization,
) -> Result<SpectrumResult> {
    grid.validate()?;
    FilterSpec::new(0.0, gamma_d).validate()?;
    let dt = quadrature_dt
        .unwrap_or_else(|| default_quadrature_step(p, gamma_d, grid.omega_min.abs().max(grid.omega_max.abs())));
    let field = DetectorField::new(p, None)?;
    let samples = SampledField::new(&field, t, dt)?;
    let raw = grid
        .points()
        .into_par_iter()
        .map(|w| Ok(samples.filtered_amplitude(&FilterSpec::new(w, gamma_d))?.norm_sqr()))
        .collect::<Result<Vec<f64>>>()?;
    let shift = modified_rates(p).shift;
    SpectrumResult::normalized(*grid, raw, normalization, || {
        samples
            .filtered_amplitude(&FilterSpec::new(shift, gamma_d))
            .map(|a| a.norm_sqr())
            .unwrap_or(f64::NAN)
    })
}

/// Narrow-filter, late-time limit of the filtered energy density:
/// `Gamma_D^2 |L - e^{i omega0 tau} sum_k c_k L_k|^2` with `c_k` the
/// truncated double Bessel sum collected by `k = n + m`.
pub fn filtered_closed_form(p: &ScenarioParams, f: &FilterSpec, t: f64, n_max: Option<usize>) -> Result<f64> {
    f.validate()?;
    Ok((f.gamma_d * closed_form_amplitude(p, f, t, n_max)?).norm_sqr())
}

fn closed_form_amplitude(p: &ScenarioParams, f: &FilterSpec, t: f64, n_max: Option<usize>) -> Result<C64> {
    let r = decaying_rates(p)?;
    let range = BesselOrderRange::resolve(p.k0l0, n_max);
    let table = bessel_j_orders(range.n_max, p.k0l0)?;
    let n = range.n_max as i64;
    let wd = f.omega_d;
    let lorentz = |x: f64| 1.0 / C64::new(-0.5 * r.gamma_eff, x - r.shift);
    let direct = -C64::from_polar(1.0, -wd * (t - p.d_over_c)) * lorentz(wd);
    let retard = p.tau + p.d_over_c;
    let outer = -C64::from_polar(1.0, -wd * (t - retard));
    let reflected: C64 = (-2 * n..=2 * n)
        .map(|k| {
            let ck: f64 = (-n..=n)
                .filter(|&m| (k - m).abs() <= n)
                .map(|m| signed_order(&table, m) * signed_order(&table, k - m))
                .sum();
            ck * outer * C64::from_polar(1.0, -(k as f64) * p.nu * retard) * lorentz(wd - k as f64 * p.nu)
        })
        .sum();
    Ok(direct - C64::from_polar(1.0, p.phase()) * reflected)
}

/// Closed-form filtered density over a scan of filter settings.
pub fn closed_form_scan(
    p: &ScenarioParams,
    gamma_d: f64,
    grid: &FrequencyGrid,
    t: f64,
    normalization: Normalization,
) -> Result<SpectrumResult> {
    grid.validate()?;
    let raw = grid
        .points()
        .into_iter()
        .map(|w| filtered_closed_form(p, &FilterSpec::new(w, gamma_d), t, None))
        .collect::<Result<Vec<f64>>>()?;
    let shift = modified_rates(p).shift;
    SpectrumResult::normalized(*grid, raw, normalization, || {
        filtered_closed_form(p, &FilterSpec::new(shift, gamma_d), t, None).unwrap_or(f64::NAN)
    })
}
