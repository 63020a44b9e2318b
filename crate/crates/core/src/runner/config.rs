//! Run configuration: `key = value` text with `[section]` headers, or the
//! equivalent JSON object.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

use crate::emission::{modified_rates, validate_timescales, TimescaleReport};
use crate::error::{ConfigError, Error, Result};
use crate::scenario::{FrequencyGrid, ScenarioParams, TimeGrid};
use crate::spectrum::{CarrierModel, Normalization};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Task {
    #[serde(rename = "decay")]
    Decay,
    #[serde(rename = "channelA")]
    ChannelA,
    #[serde(rename = "channelB")]
    ChannelB,
    #[serde(rename = "spectrum")]
    Spectrum,
    #[serde(rename = "rates")]
    Rates,
    #[serde(rename = "sweep")]
    Sweep,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Decay => "decay",
            Task::ChannelA => "channelA",
            Task::ChannelB => "channelB",
            Task::Spectrum => "spectrum",
            Task::Rates => "rates",
            Task::Sweep => "sweep",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().replace('_', "").as_str() {
            "decay" => Ok(Task::Decay),
            "channela" => Ok(Task::ChannelA),
            "channelb" => Ok(Task::ChannelB),
            "spectrum" => Ok(Task::Spectrum),
            "rates" => Ok(Task::Rates),
            "sweep" => Ok(Task::Sweep),
            other => Err(format!(
                "unknown task '{other}' (expected decay, channelA, channelB, spectrum, rates or sweep)"
            )),
        }
    }
}

/// Parameters a sweep may vary.
pub const SWEEPABLE: [&str; 10] = [
    "gamma",
    "epsilon",
    "nu",
    "nu_over_gamma_eff",
    "tau",
    "k0l0",
    "k0R",
    "omega0_tau",
    "d_over_c",
    "omega0_over_gamma",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeSettings {
    pub t_end: f64,
    pub dt: f64,
}

impl TimeSettings {
    pub fn grid(&self) -> TimeGrid {
        TimeGrid::covering(self.t_end, self.dt)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FilterSettings {
    pub gamma_d: f64,
    /// Observation time; `30 / Gamma_D` when absent.
    pub t: Option<f64>,
    pub quadrature_dt: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumSettings {
    pub m_max: Option<usize>,
    pub normalization: Normalization,
    pub carrier: CarrierModel,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepAxis {
    pub parameter: String,
    pub values: Vec<f64>,
    pub task: Task,
    pub parallel: bool,
}

/// A validated run description.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub task: Task,
    pub scenario: ScenarioParams,
    pub time: Option<TimeSettings>,
    pub frequency: Option<FrequencyGrid>,
    pub filter: Option<FilterSettings>,
    pub spectrum: SpectrumSettings,
    pub bessel_n_max: Option<usize>,
    pub sweep: Option<SweepAxis>,
    pub output_dir: PathBuf,
    pub omega0_over_gamma: Option<f64>,
    pub timescales: TimescaleReport,
    /// Every key as given, after overrides; enough to rebuild this config.
    pub raw: BTreeMap<String, String>,
}

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    line: Option<usize>,
}

type Entries = BTreeMap<String, Entry>;

const KNOWN_KEYS: [&str; 31] = [
    "task",
    "output_dir",
    "gamma",
    "epsilon",
    "nu",
    "nu_over_gamma_eff",
    "tau",
    "k0l0",
    "k0R",
    "omega0_tau",
    "d_over_c",
    "omega0_over_gamma",
    "time.t_end",
    "time.dt",
    "frequency.omega_min",
    "frequency.omega_max",
    "frequency.n_points",
    "filter.Gamma_D",
    "filter.t",
    "filter.quadrature_dt",
    "spectrum.m_max",
    "spectrum.normalization",
    "spectrum.carrier",
    "bessel.n_max",
    "sweep.parameter",
    "sweep.values",
    "sweep.start",
    "sweep.stop",
    "sweep.count",
    "sweep.task",
    "sweep.parallel",
];

/// Reads a config file (key/value text, JSON, or a metadata file written by a
/// previous run), applies `key=value` overrides and validates the result.
/// Timescale warnings are printed to stderr.
pub fn parse_config(path: &Path, overrides: &[String]) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(ConfigError::new(format!("cannot read {}: {e}", path.display()))))?;
    let cfg = parse_config_str(&text, overrides)?;
    for w in &cfg.timescales.warnings {
        eprintln!("warning: {w}");
    }
    Ok(cfg)
}

pub fn parse_config_str(text: &str, overrides: &[String]) -> Result<RunConfig> {
    let mut entries = if text.trim_start().starts_with('{') {
        json_entries(text)?
    } else {
        text_entries(text)?
    };
    for ov in overrides {
        let (key, value) = ov
            .split_once('=')
            .ok_or_else(|| ConfigError::new(format!("override '{ov}' is not of the form key=value")))?;
        let key = key.trim().to_string();
        check_known(&key, None)?;
        entries.insert(
            key,
            Entry {
                value: value.trim().to_string(),
                line: None,
            },
        );
    }
    build(entries)
}

fn check_known(key: &str, line: Option<usize>) -> Result<()> {
    if KNOWN_KEYS.contains(&key) {
        Ok(())
    } else {
        Err(ConfigError::for_key(key, "unknown key").at_line(line).into())
    }
}

fn text_entries(text: &str) -> Result<Entries> {
    let mut entries = Entries::new();
    let mut section = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::new(format!("malformed section header '{content}'")).at_line(Some(line)))?;
            section = name.trim().to_string();
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| ConfigError::new(format!("expected key = value, got '{content}'")).at_line(Some(line)))?;
        let key = key.trim();
        let full = if section.is_empty() {
            key.to_string()
        } else {
            format!("{section}.{key}")
        };
        check_known(&full, Some(line))?;
        if entries.contains_key(&full) {
            return Err(ConfigError::for_key(full, "given more than once").at_line(Some(line)).into());
        }
        entries.insert(
            full,
            Entry {
                value: unquote(value.trim()).to_string(),
                line: Some(line),
            },
        );
    }
    Ok(entries)
}

fn unquote(s: &str) -> &str {
    s.strip_prefix('"').and_then(|s| s.strip_suffix('"')).unwrap_or(s)
}

fn json_entries(text: &str) -> Result<Entries> {
    let root: Value = serde_json::from_str(text)
        .map_err(|e| ConfigError::new(format!("invalid JSON: {e}")).at_line(Some(e.line())))?;
    let mut obj = match root {
        Value::Object(map) => map,
        _ => return Err(ConfigError::new("JSON config must be an object").into()),
    };
    // Metadata written by a run keeps the flat config under "config".
    if let Some(Value::Object(inner)) = obj.get("config") {
        obj = inner.clone();
    }
    let mut entries = Entries::new();
    for (key, value) in obj {
        match value {
            Value::Object(section) => {
                for (k, v) in section {
                    insert_json(&mut entries, format!("{key}.{k}"), v)?;
                }
            }
            v => insert_json(&mut entries, key, v)?,
        }
    }
    Ok(entries)
}

fn insert_json(entries: &mut Entries, key: String, v: Value) -> Result<()> {
    check_known(&key, None)?;
    let value = match v {
        Value::String(s) => s,
        Value::Array(items) => items.iter().map(json_scalar).collect::<Vec<_>>().join(", "),
        other => json_scalar(&other),
    };
    entries.insert(key, Entry { value, line: None });
    Ok(())
}

fn json_scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Parses a real number, also accepting multiples of pi such as `pi/8`,
/// `3*pi/8`, `2pi` or `-0.5*pi`.
pub fn parse_real(s: &str) -> std::result::Result<f64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let Some((pre, post)) = t.split_once("pi") else {
        return Err(format!("'{s}' is not a number"));
    };
    let pre = pre.strip_suffix('*').unwrap_or(pre);
    let factor = match pre {
        "" | "+" => 1.0,
        "-" => -1.0,
        p => p.parse::<f64>().map_err(|_| format!("'{s}' is not a number"))?,
    };
    let divisor = match post {
        "" => 1.0,
        d => d
            .strip_prefix('/')
            .and_then(|d| d.parse::<f64>().ok())
            .ok_or_else(|| format!("'{s}' is not a number"))?,
    };
    Ok(factor * std::f64::consts::PI / divisor)
}

struct Reader<'a> {
    entries: &'a Entries,
}

impl<'a> Reader<'a> {
    fn err(&self, key: &str, msg: impl Into<String>) -> Error {
        let line = self.entries.get(key).and_then(|e| e.line);
        ConfigError::for_key(key, msg).at_line(line).into()
    }

    fn has(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    fn has_section(&self, section: &str) -> bool {
        let prefix = format!("{section}.");
        self.entries.keys().any(|k| k.starts_with(&prefix))
    }

    fn real(&self, key: &str) -> Result<Option<f64>> {
        let Some(e) = self.entries.get(key) else {
            return Ok(None);
        };
        let v = parse_real(&e.value).map_err(|m| self.err(key, m))?;
        if !v.is_finite() {
            return Err(self.err(key, "must be finite"));
        }
        Ok(Some(v))
    }

    fn real_or(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.real(key)?.unwrap_or(default))
    }

    fn require_real(&self, key: &str, why: &str) -> Result<f64> {
        self.real(key)?
            .ok_or_else(|| ConfigError::for_key(key, format!("required {why}")).into())
    }

    fn count(&self, key: &str) -> Result<Option<usize>> {
        let Some(e) = self.entries.get(key) else {
            return Ok(None);
        };
        e.value
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| self.err(key, format!("expected a non-negative integer, got '{}'", e.value)))
    }

    fn parsed<T: FromStr<Err = String>>(&self, key: &str) -> Result<Option<T>> {
        let Some(e) = self.entries.get(key) else {
            return Ok(None);
        };
        e.value.parse::<T>().map(Some).map_err(|m| self.err(key, m))
    }

    fn flag(&self, key: &str, default: bool) -> Result<bool> {
        let Some(e) = self.entries.get(key) else {
            return Ok(default);
        };
        match e.value.trim().to_ascii_lowercase().as_str() {
            "true" | "yes" | "1" => Ok(true),
            "false" | "no" | "0" => Ok(false),
            other => Err(self.err(key, format!("expected true or false, got '{other}'"))),
        }
    }

    fn text(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|e| e.value.as_str())
    }
}

fn parse_normalization(s: &str) -> std::result::Result<Normalization, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "raw" => Ok(Normalization::Raw),
        "peak" | "peak_normalized" => Ok(Normalization::PeakNormalized),
        "carrier" | "carrier_normalized" => Ok(Normalization::CarrierNormalized),
        other => Err(format!("unknown normalization '{other}' (raw, peak or carrier)")),
    }
}

fn parse_carrier(s: &str) -> std::result::Result<CarrierModel, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "full" => Ok(CarrierModel::Full),
        "j0_squared" => Ok(CarrierModel::J0Squared),
        other => Err(format!("unknown carrier model '{other}' (full or j0_squared)")),
    }
}

fn build(entries: Entries) -> Result<RunConfig> {
    let r = Reader { entries: &entries };
    let task = r.parsed::<Task>("task")?.unwrap_or(Task::Decay);

    let mut scenario = ScenarioParams {
        gamma: r.real_or("gamma", 1.0)?,
        epsilon: r.real_or("epsilon", 0.5)?,
        nu: r.real_or("nu", 0.0)?,
        tau: r.real_or("tau", 0.0)?,
        k0l0: r.real_or("k0l0", 0.0)?,
        k0r: r.real_or("k0R", 0.0)?,
        omega0_tau: r.real("omega0_tau")?,
        d_over_c: r.real_or("d_over_c", 0.0)?,
    };
    if let Some(ratio) = r.real("nu_over_gamma_eff")? {
        if r.has("nu") {
            return Err(r.err("nu_over_gamma_eff", "conflicts with nu; give only one"));
        }
        scenario.nu = ratio * modified_rates(&scenario).gamma_eff;
    }
    scenario.validate().map_err(|e| locate(e, &r))?;

    let omega0_over_gamma = r.real("omega0_over_gamma")?;
    if let Some(w) = omega0_over_gamma {
        if w <= 0.0 {
            return Err(r.err("omega0_over_gamma", "must be > 0"));
        }
    }

    let time = if r.has_section("time") {
        let t = TimeSettings {
            t_end: r.require_real("time.t_end", "in [time]")?,
            dt: r.require_real("time.dt", "in [time]")?,
        };
        if !(t.t_end > 0.0) {
            return Err(r.err("time.t_end", "must be > 0"));
        }
        Some(t)
    } else {
        None
    };

    let frequency = if r.has_section("frequency") {
        let grid = FrequencyGrid::new(
            r.require_real("frequency.omega_min", "in [frequency]")?,
            r.require_real("frequency.omega_max", "in [frequency]")?,
            r.count("frequency.n_points")?
                .ok_or_else(|| Error::from(ConfigError::for_key("frequency.n_points", "required in [frequency]")))?,
        );
        grid.validate().map_err(|e| relabel(e, "frequency", &r))?;
        Some(grid)
    } else {
        None
    };

    let filter = if r.has_section("filter") {
        let f = FilterSettings {
            gamma_d: r.require_real("filter.Gamma_D", "in [filter]")?,
            t: r.real("filter.t")?,
            quadrature_dt: r.real("filter.quadrature_dt")?,
        };
        if !(f.gamma_d > 0.0) {
            return Err(r.err("filter.Gamma_D", "must be > 0"));
        }
        for (key, v) in [("filter.t", f.t), ("filter.quadrature_dt", f.quadrature_dt)] {
            if let Some(v) = v {
                if !(v > 0.0) {
                    return Err(r.err(key, "must be > 0"));
                }
            }
        }
        Some(f)
    } else {
        None
    };

    let spectrum = SpectrumSettings {
        m_max: r.count("spectrum.m_max")?,
        normalization: r
            .text("spectrum.normalization")
            .map(parse_normalization)
            .transpose()
            .map_err(|m| r.err("spectrum.normalization", m))?
            .unwrap_or_default(),
        carrier: r
            .text("spectrum.carrier")
            .map(parse_carrier)
            .transpose()
            .map_err(|m| r.err("spectrum.carrier", m))?
            .unwrap_or_default(),
    };

    let sweep = if r.has_section("sweep") {
        Some(sweep_axis(&r)?)
    } else {
        None
    };

    let cfg = RunConfig {
        task,
        timescales: validate_timescales(&scenario, omega0_over_gamma),
        scenario,
        time,
        frequency,
        filter,
        spectrum,
        bessel_n_max: r.count("bessel.n_max")?,
        sweep,
        output_dir: PathBuf::from(r.text("output_dir").unwrap_or("out")),
        omega0_over_gamma,
        raw: entries.iter().map(|(k, e)| (k.clone(), e.value.clone())).collect(),
    };
    check_requirements(&cfg, &r)?;
    Ok(cfg)
}

fn sweep_axis(r: &Reader<'_>) -> Result<SweepAxis> {
    let parameter = r
        .text("sweep.parameter")
        .ok_or_else(|| Error::from(ConfigError::for_key("sweep.parameter", "required in [sweep]")))?
        .trim()
        .to_string();
    if !SWEEPABLE.contains(&parameter.as_str()) {
        return Err(r.err(
            "sweep.parameter",
            format!("'{parameter}' is not a scenario parameter ({})", SWEEPABLE.join(", ")),
        ));
    }
    let values = if let Some(list) = r.text("sweep.values") {
        if r.has("sweep.start") || r.has("sweep.stop") || r.has("sweep.count") {
            return Err(r.err("sweep.values", "give either values or start/stop/count"));
        }
        list.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(parse_real)
            .collect::<std::result::Result<Vec<f64>, String>>()
            .map_err(|m| r.err("sweep.values", m))?
    } else if r.has("sweep.start") || r.has("sweep.stop") || r.has("sweep.count") {
        let start = r.require_real("sweep.start", "with stop and count")?;
        let stop = r.require_real("sweep.stop", "with start and count")?;
        let count = r
            .count("sweep.count")?
            .ok_or_else(|| Error::from(ConfigError::for_key("sweep.count", "required with start and stop")))?;
        match count {
            0 => Vec::new(),
            1 => vec![start],
            n => (0..n)
                .map(|i| if i + 1 == n { stop } else { start + (stop - start) * i as f64 / (n - 1) as f64 })
                .collect(),
        }
    } else {
        Vec::new()
    };
    if values.is_empty() {
        return Err(r.err("sweep.values", "the sweep has no values"));
    }
    let task = r.parsed::<Task>("sweep.task")?.unwrap_or(Task::Rates);
    if task == Task::Sweep {
        return Err(r.err("sweep.task", "sweeps cannot be nested"));
    }
    Ok(SweepAxis {
        parameter,
        values,
        task,
        parallel: r.flag("sweep.parallel", true)?,
    })
}

fn check_requirements(cfg: &RunConfig, r: &Reader<'_>) -> Result<()> {
    let task = match (&cfg.task, &cfg.sweep) {
        (Task::Sweep, None) => {
            return Err(ConfigError::for_key("sweep.parameter", "task sweep needs a [sweep] section").into());
        }
        (Task::Sweep, Some(axis)) => axis.task,
        (t, _) => *t,
    };
    match task {
        Task::Decay => {
            let time = cfg
                .time
                .ok_or_else(|| Error::from(ConfigError::for_key("time.t_end", "task decay needs a [time] grid (t_end, dt)")))?;
            // Sweeps validate each point separately.
            if cfg.task != Task::Sweep {
                time.grid().validate_for(&cfg.scenario).map_err(|e| relabel(e, "time", r))?;
            }
        }
        Task::ChannelA | Task::ChannelB | Task::Spectrum => {
            if cfg.frequency.is_none() {
                return Err(ConfigError::for_key(
                    "frequency.omega_min",
                    format!("task {task} needs a [frequency] grid (omega_min, omega_max, n_points)"),
                )
                .into());
            }
        }
        Task::Rates | Task::Sweep => {}
    }
    Ok(())
}

/// Attaches the config line to a scenario validation error.
fn locate(e: Error, r: &Reader<'_>) -> Error {
    match e {
        Error::Config(mut c) => {
            if let Some(key) = &c.key {
                c.line = r.entries.get(key).and_then(|e| e.line);
            }
            Error::Config(c)
        }
        other => other,
    }
}

/// Prefixes grid keys with their section and attaches the config line.
fn relabel(e: Error, section: &str, r: &Reader<'_>) -> Error {
    match e {
        Error::Config(mut c) => {
            if let Some(key) = c.key.take() {
                let full = format!("{section}.{key}");
                c.line = r.entries.get(&full).and_then(|e| e.line);
                c.key = Some(full);
            }
            Error::Config(c)
        }
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_multiples() {
        let pi = std::f64::consts::PI;
        assert_eq!(parse_real("pi/8").unwrap(), pi / 8.0);
        assert_eq!(parse_real("3*pi/8").unwrap(), 3.0 * pi / 8.0);
        assert_eq!(parse_real("2pi").unwrap(), 2.0 * pi);
        assert_eq!(parse_real("-pi").unwrap(), -pi);
        assert_eq!(parse_real("1.5e-3").unwrap(), 1.5e-3);
        assert!(parse_real("pie").is_err());
        assert!(parse_real("abc").is_err());
    }

    #[test]
    fn sections_and_defaults() {
        let cfg = parse_config_str(
            "task = decay\nnu = 20\ntau = 4\n[time]\nt_end = 10\ndt = 0.0025\n",
            &[],
        )
        .unwrap();
        assert_eq!(cfg.scenario.epsilon, 0.5);
        assert_eq!(cfg.scenario.gamma, 1.0);
        assert!(cfg.scenario.phase_is_derived());
        assert_eq!(cfg.time.unwrap().dt, 0.0025);
    }

    #[test]
    fn unknown_and_duplicate_keys_carry_lines() {
        let err = parse_config_str("nu = 1\nfoo = 2\n", &[]).unwrap_err();
        assert!(err.to_string().contains("'foo'") && err.to_string().contains("line 2"));
        let err = parse_config_str("nu = 1\n\nnu = 2\n", &[]).unwrap_err();
        assert!(err.to_string().contains("line 3"));
        let err = parse_config_str("[time]\ndt = x\nt_end = 1\n", &[]).unwrap_err();
        assert!(err.to_string().contains("time.dt") && err.to_string().contains("line 2"));
    }

    #[test]
    fn override_bounds_are_reported() {
        let err = parse_config_str("task = rates\n", &["epsilon=1.5".into()]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("epsilon") && err.to_string().contains("[0, 1]"));
        assert!(parse_config_str("task = rates\n", &["bogus=1".into()]).is_err());
        assert!(parse_config_str("task = rates\n", &["epsilon".into()]).is_err());
    }

    #[test]
    fn empty_file_needs_a_time_grid() {
        let err = parse_config_str("", &[]).unwrap_err();
        assert!(err.to_string().contains("[time]"));
        let cfg = parse_config_str("", &["task=rates".into()]).unwrap();
        assert_eq!(cfg.task, Task::Rates);
        assert_eq!(cfg.scenario.k0l0, 0.0);
    }

    #[test]
    fn step_limit_is_a_config_error() {
        let err = parse_config_str("nu = 20\ntau = 4\n[time]\nt_end = 10\ndt = 0.01\n", &[]).unwrap_err();
        assert!(err.to_string().contains("time.dt") && err.to_string().contains("line 5"));
    }

    #[test]
    fn relative_mirror_frequency() {
        let cfg = parse_config_str("task = rates\nnu_over_gamma_eff = 20\nk0l0 = 1.9\nk0R = pi/8\n", &[]).unwrap();
        let r = modified_rates(&cfg.scenario);
        assert!((cfg.scenario.nu - 20.0 * r.gamma_eff).abs() < 1e-12);
        assert!(parse_config_str("task = rates\nnu = 1\nnu_over_gamma_eff = 20\n", &[]).is_err());
    }

    #[test]
    fn json_and_metadata_forms() {
        let a = parse_config_str(
            r#"{"task": "spectrum", "k0R": "pi/8", "frequency": {"omega_min": -5, "omega_max": 5, "n_points": 11}}"#,
            &[],
        )
        .unwrap();
        let b = parse_config_str(
            r#"{"config": {"task": "spectrum", "k0R": "pi/8", "frequency.omega_min": "-5", "frequency.omega_max": "5", "frequency.n_points": "11"}}"#,
            &[],
        )
        .unwrap();
        assert_eq!(a.scenario, b.scenario);
        assert_eq!(a.frequency, b.frequency);
    }

    #[test]
    fn sweep_axis_forms() {
        let cfg = parse_config_str("task = sweep\n[sweep]\nparameter = k0l0\nstart = 0\nstop = 3\ncount = 31\n", &[]).unwrap();
        let axis = cfg.sweep.unwrap();
        assert_eq!(axis.values.len(), 31);
        assert_eq!(axis.values[30], 3.0);
        assert_eq!(axis.task, Task::Rates);
        let err = parse_config_str("task = sweep\n[sweep]\nparameter = k0l0\nvalues =\n", &[]).unwrap_err();
        assert!(err.to_string().contains("no values"));
        assert!(parse_config_str("task = sweep\n[sweep]\nparameter = colour\nvalues = 1\n", &[]).is_err());
        assert!(parse_config_str("task = sweep\n", &[]).is_err());
    }
}
