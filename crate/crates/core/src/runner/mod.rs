//! Configuration-driven runs: one task per invocation, CSV datasets plus a
//! JSON metadata file, and parameter sweeps over any scenario field.

mod config;

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::emission::{analytic_first_order, dde_solve, markov_amplitude, modified_rates, PI_TAIL_TOLERANCE};
use crate::error::{Error, Result};
use crate::mirror_math::{pi_factor_sum, pi_truncation_order, BesselOrderRange};
use crate::populations::{channel_a_steady_markov, channel_a_steady_nonmarkov, channel_b_carrier, channel_b_markov, channel_b_sidebands};
use crate::scenario::{AmplitudeTrace, FrequencyGrid, ModeAmplitudeProfile, ScenarioParams};
use crate::spectrum::{closed_form_scan, default_comb_order, default_quadrature_step, filtered_scan, sideband_strengths_with, spectrum_ideal_with, SpectrumOptions};

pub use config::{parse_config, parse_config_str, parse_real, FilterSettings, RunConfig, SpectrumSettings, SweepAxis, Task, TimeSettings, SWEEPABLE};

pub const TOOL_NAME: &str = "oscmirror";

const BUNDLED: [(&str, &str); 10] = [
    ("fig3", include_str!("../../configs/fig3.cfg")),
    ("fig4", include_str!("../../configs/fig4.cfg")),
    ("fig5a", include_str!("../../configs/fig5a.cfg")),
    ("fig5b", include_str!("../../configs/fig5b.cfg")),
    ("fig6", include_str!("../../configs/fig6.cfg")),
    ("fig7", include_str!("../../configs/fig7.cfg")),
    ("fig8", include_str!("../../configs/fig8.cfg")),
    ("fig9", include_str!("../../configs/fig9.cfg")),
    ("fig10", include_str!("../../configs/fig10.cfg")),
    ("fig_amp", include_str!("../../configs/fig_amp.cfg")),
];

/// Example configurations shipped with the crate, by name.
pub fn bundled_configs() -> &'static [(&'static str, &'static str)] {
    &BUNDLED
}

/// What a run wrote.
#[derive(Debug, Clone)]
pub struct ResultBundle {
    pub output_dir: PathBuf,
    /// File names relative to `output_dir`.
    pub files: Vec<String>,
    pub metadata: Value,
    /// Failed sweep points as `(index, exit code, message)`.
    pub failures: Vec<(usize, i32, String)>,
    /// Largest modulus of the task's main curve, used in sweep summaries.
    pub peak_abs: Option<f64>,
}

impl ResultBundle {
    pub fn exit_code(&self) -> i32 {
        self.failures.first().map_or(0, |f| f.1)
    }
}

/// Runs the configured task and writes its outputs.
pub fn run(config: &RunConfig) -> Result<ResultBundle> {
    if config.task == Task::Sweep {
        return sweep(config);
    }
    fs::create_dir_all(&config.output_dir)?;
    let mut out = Outputs::new(&config.output_dir);
    let p = &config.scenario;
    match config.task {
        Task::Decay => decay(config, &mut out)?,
        Task::ChannelA => channel_a(config, &mut out)?,
        Task::ChannelB => channel_b(config, &mut out)?,
        Task::Spectrum => spectrum(config, &mut out)?,
        Task::Rates => rates(p, &mut out)?,
        Task::Sweep => unreachable!(),
    }
    let metadata = metadata(config, &out)?;
    write_json(&config.output_dir.join("metadata.json"), &metadata)?;
    Ok(ResultBundle {
        output_dir: config.output_dir.clone(),
        files: out.files,
        metadata,
        failures: Vec::new(),
        peak_abs: out.peak_abs,
    })
}

struct Outputs {
    dir: PathBuf,
    files: Vec<String>,
    defaults: BTreeMap<String, Value>,
    notes: Vec<String>,
    peak_abs: Option<f64>,
}

impl Outputs {
    fn new(dir: &Path) -> Self {
        Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
            defaults: BTreeMap::new(),
            notes: Vec::new(),
            peak_abs: None,
        }
    }

    fn csv(&mut self, name: &str, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
        let mut buf = header.join(",");
        buf.push('\n');
        for row in rows {
            buf.push_str(&row.join(","));
            buf.push('\n');
        }
        fs::write(self.dir.join(name), buf)?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn trace(&mut self, name: &str, tr: &AmplitudeTrace) -> Result<()> {
        let rows = tr.samples().map(|(t, c)| vec![num(t), num(c.re), num(c.im), num(c.norm_sqr())]);
        self.csv(name, &["t", "re_c", "im_c", "abs2_c"], rows)
    }

    fn profile(&mut self, name: &str, prof: &ModeAmplitudeProfile) -> Result<()> {
        let rows = prof
            .grid
            .points()
            .into_iter()
            .zip(&prof.values)
            .map(|(w, c)| vec![num(w), num(c.re), num(c.im), num(c.norm_sqr())]);
        self.csv(name, &["omega_minus_omega0", "re_c", "im_c", "abs2_c"], rows)
    }

    fn default(&mut self, key: &str, value: Value) {
        self.defaults.insert(key.to_string(), value);
    }
}

/// Seventeen significant digits.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_json(path: &Path, v: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    let mut f = fs::File::create(path)?;
    f.write_all(text.as_bytes())?;
    Ok(())
}

fn decay(cfg: &RunConfig, out: &mut Outputs) -> Result<()> {
    let p = &cfg.scenario;
    let time = cfg.time.expect("validated");
    let moving = dde_solve(p, &time.grid())?;
    let fixed = dde_solve(&p.static_mirror(), &time.grid())?;
    let first = analytic_first_order(p, &moving.grid)?;
    let markov = markov_amplitude(p, &moving.grid)?;
    out.default("dde_dt", json!(moving.grid.dt));
    out.default(
        "first_order_m_max",
        json!(pi_truncation_order(p.k0l0, p.nu_tau(), PI_TAIL_TOLERANCE)?),
    );
    out.default(
        "markov_frame",
        json!("rotating at the bare transition frequency; the level shift stays in the phase"),
    );
    out.peak_abs = Some(
        moving
            .samples()
            .filter(|(t, _)| *t >= p.tau)
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max),
    );
    out.trace("decay_oscillating.csv", &moving)?;
    out.trace("decay_static.csv", &fixed)?;
    out.trace("decay_first_order.csv", &first)?;
    out.trace("decay_markov.csv", &markov)
}

fn channel_a(cfg: &RunConfig, out: &mut Outputs) -> Result<()> {
    let p = &cfg.scenario;
    let grid = cfg.frequency.expect("validated");
    let n_max = cfg
        .bessel_n_max
        .unwrap_or_else(|| BesselOrderRange::for_argument(p.k0l0).n_max);
    let m_max = cfg.spectrum.m_max.unwrap_or(n_max);
    out.default("bessel_n_max", json!(n_max));
    out.default("nonmarkov_m_max", json!(m_max));
    match channel_a_steady_markov(p, &grid, Some(n_max)) {
        Ok(prof) => out.profile("channel_a_markov.csv", &prof)?,
        Err(Error::SteadyStateUndefined { gamma_eff }) => out
            .notes
            .push(format!("channel_a_markov.csv skipped: gamma_eff = {gamma_eff} has no steady state")),
        Err(e) => return Err(e),
    }
    let nm = channel_a_steady_nonmarkov(p, &grid, m_max)?;
    out.peak_abs = Some(max_abs(&nm.values));
    out.profile("channel_a_nonmarkov.csv", &nm)
}

fn channel_b(cfg: &RunConfig, out: &mut Outputs) -> Result<()> {
    let p = &cfg.scenario;
    let grid = cfg.frequency.expect("validated");
    let carrier = channel_b_carrier(p, &grid)?;
    out.profile("channel_b_carrier.csv", &carrier)?;
    let mut total = carrier.clone();
    if p.nu > 0.0 {
        let m_max = match cfg.spectrum.m_max {
            Some(m) => m,
            None => pi_truncation_order(p.k0l0, p.nu_tau(), PI_TAIL_TOLERANCE)?.max(1),
        };
        out.default("sideband_m_max", json!(m_max));
        let side = channel_b_sidebands(p, &grid, m_max)?;
        for (t, s) in total.values.iter_mut().zip(&side.values) {
            *t += s;
        }
        out.peak_abs = Some(max_abs(&side.values));
        out.profile("channel_b_sidebands.csv", &side)?;
    } else {
        out.notes.push("nu = 0: no sidebands".into());
        out.peak_abs = Some(0.0);
    }
    out.profile("channel_b_total.csv", &total)?;
    match channel_b_markov(p, &grid) {
        Ok(prof) => out.profile("channel_b_markov.csv", &prof),
        Err(Error::SteadyStateUndefined { gamma_eff }) => {
            out.notes
                .push(format!("channel_b_markov.csv skipped: gamma_eff = {gamma_eff} has no steady state"));
            Ok(())
        }
        Err(e) => Err(e),
    }
}

fn spectrum(cfg: &RunConfig, out: &mut Outputs) -> Result<()> {
    let p = &cfg.scenario;
    let grid = cfg.frequency.expect("validated");
    let m_max = cfg.spectrum.m_max.unwrap_or_else(|| default_comb_order(p.k0l0));
    let opts = SpectrumOptions {
        m_max: Some(m_max),
        carrier: cfg.spectrum.carrier,
        normalization: cfg.spectrum.normalization,
    };
    out.default("comb_m_max", json!(m_max));
    out.default("normalization", json!(cfg.spectrum.normalization));
    out.default("carrier_model", json!(cfg.spectrum.carrier));
    let s = spectrum_ideal_with(p, &grid, &opts)?;
    out.peak_abs = Some(s.scale);
    out.default("spectrum_scale", json!(s.scale));
    let rows = grid.points().into_iter().zip(&s.values).map(|(w, v)| vec![num(w), num(*v)]);
    out.csv("spectrum.csv", &["omega_minus_omega0", "S_normalized"], rows)?;

    let table = sideband_strengths_with(p, m_max, cfg.spectrum.carrier)?;
    let m = m_max as i64;
    let rows = (-m..=m).map(|k| {
        let b = table.get(k).unwrap_or(C64::new(0.0, 0.0));
        vec![k.to_string(), num(b.re), num(b.im), num(b.norm_sqr())]
    });
    out.csv("sidebands.csv", &["m", "re_B", "im_B", "abs2_B"], rows)?;

    if let Some(f) = cfg.filter {
        let t = f.t.unwrap_or(30.0 / f.gamma_d);
        let wmax = grid.omega_min.abs().max(grid.omega_max.abs());
        let dt = f
            .quadrature_dt
            .unwrap_or_else(|| default_quadrature_step(p, f.gamma_d, wmax));
        out.default("filter_t", json!(t));
        out.default("quadrature_dt", json!(dt));
        let norm = cfg.spectrum.normalization;
        let numeric = filtered_scan(p, f.gamma_d, &grid, t, Some(dt), norm)?;
        let closed = closed_form_scan(p, f.gamma_d, &grid, t, norm)?;
        let rows = grid
            .points()
            .into_iter()
            .zip(numeric.values.iter().zip(&closed.values))
            .map(|(w, (a, b))| vec![num(w), num(*a), num(*b)]);
        out.csv("filtered.csv", &["omega_D", "w_normalized", "w_closed_form_normalized"], rows)?;
    }
    Ok(())
}

struct RateRow {
    gamma_eff: f64,
    shift: f64,
    pi0: C64,
    pi1_abs: f64,
    b_abs2: [f64; 4],
}

const RATE_HEADER: [&str; 10] = [
    "gamma_eff",
    "level_shift",
    "pi0_re",
    "pi0_im",
    "pi0_abs",
    "pi1_abs",
    "b0_abs2",
    "b1_abs2",
    "b2_abs2",
    "b3_abs2",
];

impl RateRow {
    fn new(p: &ScenarioParams) -> Result<Self> {
        let r = modified_rates(p);
        let table = sideband_strengths_with(p, 3, Default::default())?;
        let b = |m: i64| table.get(m).map_or(0.0, |b| b.norm_sqr());
        Ok(Self {
            gamma_eff: r.gamma_eff,
            shift: r.shift,
            pi0: pi_factor_sum(0, p.k0l0, p.nu_tau(), None)?,
            pi1_abs: pi_factor_sum(1, p.k0l0, p.nu_tau(), None)?.norm(),
            b_abs2: [b(0), b(1), b(2), b(3)],
        })
    }

    fn cells(&self) -> Vec<String> {
        let mut v = vec![
            num(self.gamma_eff),
            num(self.shift),
            num(self.pi0.re),
            num(self.pi0.im),
            num(self.pi0.norm()),
            num(self.pi1_abs),
        ];
        v.extend(self.b_abs2.iter().map(|x| num(*x)));
        v
    }
}

fn rates(p: &ScenarioParams, out: &mut Outputs) -> Result<()> {
    let row = RateRow::new(p)?;
    out.csv("rates.csv", &RATE_HEADER, [row.cells()])
}

fn max_abs(values: &[C64]) -> f64 {
    values.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn scenario_json(p: &ScenarioParams) -> Value {
    json!({
        "gamma": p.gamma,
        "epsilon": p.epsilon,
        "nu": p.nu,
        "tau": p.tau,
        "k0l0": p.k0l0,
        "k0R": p.k0r,
        "omega0_tau": p.phase(),
        "omega0_tau_source": if p.phase_is_derived() { "derived: 2 k0R mod 2 pi" } else { "explicit" },
        "d_over_c": p.d_over_c,
    })
}

fn metadata(cfg: &RunConfig, out: &Outputs) -> Result<Value> {
    let p = &cfg.scenario;
    let r = modified_rates(p);
    let pi0 = pi_factor_sum(0, p.k0l0, p.nu_tau(), None)?;
    let mut defaults = out.defaults.clone();
    if cfg.omega0_over_gamma.is_none() {
        defaults.insert("omega0_over_gamma".into(), json!("absent; optical timescale checks skipped"));
    }
    Ok(json!({
        "tool": {"name": TOOL_NAME, "version": env!("CARGO_PKG_VERSION")},
        "task": cfg.task.name(),
        "config": cfg.raw,
        "scenario": scenario_json(p),
        "derived": {
            "gamma_eff": r.gamma_eff,
            "level_shift": r.shift,
            "nu_tau": p.nu_tau(),
            "pi0": {"re": pi0.re, "im": pi0.im, "abs": pi0.norm()},
        },
        "defaults": defaults,
        "warnings": cfg.timescales.warnings,
        "notes": cfg.timescales.notes.iter().chain(&out.notes).collect::<Vec<_>>(),
        "files": out.files,
    }))
}

/// Raw configuration of one sweep point.
fn point_raw(cfg: &RunConfig, axis: &SweepAxis, value: f64, dir: &Path) -> BTreeMap<String, String> {
    let mut raw: BTreeMap<String, String> = cfg
        .raw
        .iter()
        .filter(|(k, _)| !k.starts_with("sweep."))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    match axis.parameter.as_str() {
        "nu" => {
            raw.remove("nu_over_gamma_eff");
        }
        "nu_over_gamma_eff" => {
            raw.remove("nu");
        }
        _ => {}
    }
    raw.insert(axis.parameter.clone(), format!("{value}"));
    raw.insert("task".into(), axis.task.name().into());
    raw.insert("output_dir".into(), dir.to_string_lossy().into_owned());
    raw
}

fn config_from_raw(raw: &BTreeMap<String, String>) -> Result<RunConfig> {
    let overrides: Vec<String> = raw.iter().map(|(k, v)| format!("{k}={v}")).collect();
    parse_config_str("", &overrides)
}

/// Runs the sweep task once per axis value into numbered subdirectories and
/// writes `summary.csv`. Failed points are recorded and do not stop the rest.
pub fn sweep(config: &RunConfig) -> Result<ResultBundle> {
    let axis = config
        .sweep
        .as_ref()
        .ok_or_else(|| Error::config("sweep.parameter", "no [sweep] section"))?;
    if axis.values.is_empty() {
        return Err(Error::config("sweep.values", "the sweep has no values"));
    }
    fs::create_dir_all(&config.output_dir)?;
    let points: Vec<(usize, f64)> = axis.values.iter().copied().enumerate().collect();
    let eval = |&(i, v): &(usize, f64)| {
        let name = format!("{i:03}_{}={v}", axis.parameter);
        let dir = config.output_dir.join(&name);
        let result = config_from_raw(&point_raw(config, axis, v, &dir)).and_then(|cfg| {
            let bundle = run(&cfg)?;
            let row = RateRow::new(&cfg.scenario)?;
            Ok((bundle, row))
        });
        (i, v, name, result)
    };
    let results: Vec<_> = if axis.parallel {
        points.par_iter().map(eval).collect()
    } else {
        points.iter().map(eval).collect()
    };

    let mut header = vec!["index".to_string(), axis.parameter.clone(), "status".to_string()];
    header.extend(RATE_HEADER.iter().map(|s| s.to_string()));
    header.push("peak_abs".into());
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut point_dirs = Vec::new();
    for (i, v, name, result) in &results {
        let mut row = vec![i.to_string(), num(*v)];
        match result {
            Ok((bundle, rates)) => {
                row.push("ok".into());
                row.extend(rates.cells());
                row.push(bundle.peak_abs.map_or(String::new(), num));
                point_dirs.push(name.clone());
            }
            Err(e) => {
                let msg = e.to_string().replace([',', '\n'], ";");
                row.push(format!("error: {msg}"));
                row.extend(std::iter::repeat_n(String::new(), RATE_HEADER.len() + 1));
                failures.push((*i, e.exit_code(), e.to_string()));
            }
        }
        rows.push(row);
    }
    let mut out = Outputs::new(&config.output_dir);
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    out.csv("summary.csv", &header_refs, rows)?;
    out.default("sweep_parallel", json!(axis.parallel));
    out.default("sweep_task", json!(axis.task.name()));
    for (i, _, msg) in &failures {
        out.notes.push(format!("point {i} failed: {msg}"));
    }
    let mut metadata = metadata(config, &out)?;
    metadata["sweep"] = json!({
        "parameter": axis.parameter,
        "values": axis.values,
        "points": point_dirs,
        "failed": failures.iter().map(|f| f.0).collect::<Vec<_>>(),
    });
    write_json(&config.output_dir.join("metadata.json"), &metadata)?;
    Ok(ResultBundle {
        output_dir: config.output_dir.clone(),
        files: out.files,
        metadata,
        failures,
        peak_abs: None,
    })
}

/// Reruns the configuration stored in a metadata file into `out`.
pub fn rerun_from_metadata(metadata_path: &Path, out: &Path) -> Result<ResultBundle> {
    let cfg = parse_config(metadata_path, &[format!("output_dir={}", out.display())])?;
    run(&cfg)
}

/// A frequency grid centred on the shifted carrier, `half_width` either side.
pub fn carrier_centred_grid(p: &ScenarioParams, half_width: f64, n_points: usize) -> FrequencyGrid {
    let shift = modified_rates(p).shift;
    FrequencyGrid::new(shift - half_width, shift + half_width, n_points)
}
