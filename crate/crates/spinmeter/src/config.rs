//! key = value scenario configuration.
//!
//! The file is parsed as TOML but only top-level scalar keys and flat arrays
//! are accepted. Angles and times may be written as numbers or as strings
//! like `"pi/4"`, `"2*pi"` or `"16 pi"`.

use serde::Deserialize;
use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::path::PathBuf;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{}{message}", location.as_ref().map(|l| format!("{l}: ")).unwrap_or_default())]
pub struct ConfigError {
    pub location: Option<String>,
    pub message: String,
}

impl ConfigError {
    fn at_key(text: &str, key: &str, message: impl Into<String>) -> Self {
        let location = match line_of(text, key) {
            Some(n) => format!("line {n}, key `{key}`"),
            None => format!("key `{key}`"),
        };
        ConfigError {
            location: Some(location),
            message: message.into(),
        }
    }

    pub fn plain(message: impl Into<String>) -> Self {
        ConfigError {
            location: None,
            message: message.into(),
        }
    }
}

fn line_of(text: &str, key: &str) -> Option<usize> {
    text.lines().position(|l| {
        let l = l.trim_start();
        l.strip_prefix(key)
            .is_some_and(|rest| rest.trim_start().starts_with('='))
    })
    .map(|i| i + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    RingProfile,
    Density1D,
    Spread1D,
    Trajectory1D,
    Spiral1D,
    Asymptotics,
    TrotterCheck,
    Moments2D,
}

impl Scenario {
    pub const ALL: [Scenario; 8] = [
        Scenario::RingProfile,
        Scenario::Density1D,
        Scenario::Spread1D,
        Scenario::Trajectory1D,
        Scenario::Spiral1D,
        Scenario::Asymptotics,
        Scenario::TrotterCheck,
        Scenario::Moments2D,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::RingProfile => "ring_profile",
            Scenario::Density1D => "density_1d",
            Scenario::Spread1D => "spread_1d",
            Scenario::Trajectory1D => "trajectory_1d",
            Scenario::Spiral1D => "spiral_1d",
            Scenario::Asymptotics => "asymptotics",
            Scenario::TrotterCheck => "trotter_check",
            Scenario::Moments2D => "moments_2d",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Scenario::RingProfile => "2D radial function F(r|T) across the measurement ring",
            Scenario::Density1D => "1D density and local velocity at time t for several widths",
            Scenario::Spread1D => "1D density and sigma_x density of a spreading packet for several v_sp",
            Scenario::Trajectory1D => "time series of <x>, width and spin for several widths",
            Scenario::Spiral1D => "(<sigma_y>, <sigma_perp>) spiral and its fixed point",
            Scenario::Asymptotics => "long-time spin components as a function of coupling strength",
            Scenario::TrotterCheck => "1D product-formula convergence and path-sum oracle",
            Scenario::Moments2D => "2D pointer moments after the Rashba pulse",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Scenario::ALL.into_iter().find(|s| s.name() == name)
    }

    fn uses_1d_setup(self) -> bool {
        !matches!(self, Scenario::RingProfile | Scenario::Moments2D)
    }

    /// Keys accepted in addition to `scenario`, `output_dir` and `formats`.
    fn keys(self) -> &'static [&'static str] {
        match self {
            Scenario::RingProfile => &["w_over_rso", "samples"],
            Scenario::Moments2D => &["w_over_rso", "beta", "phi", "grid_points", "grid_extent"],
            Scenario::Density1D | Scenario::Trajectory1D | Scenario::Spiral1D => &[
                "theta", "beta", "phi", "alpha", "delta", "w", "w_values", "v_sp", "t", "dt",
                "grid_points", "grid_extent",
            ],
            Scenario::Spread1D => &[
                "theta", "beta", "phi", "alpha", "delta", "w", "v_sp", "v_sp_values", "t",
                "grid_points", "grid_extent",
            ],
            Scenario::Asymptotics => {
                &["theta", "beta", "phi", "alpha", "delta", "w", "w_values", "samples"]
            }
            Scenario::TrotterCheck => &[
                "theta", "beta", "phi", "alpha", "delta", "w", "t", "steps", "grid_points",
                "grid_extent",
            ],
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

impl Formats {
    pub fn names(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.csv {
            v.push("csv");
        }
        if self.json {
            v.push("json");
        }
        if self.svg {
            v.push("svg");
        }
        v
    }
}

/// Validated configuration with every default filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub theta: f64,
    pub beta: f64,
    pub phi: f64,
    pub alpha: f64,
    /// Zeeman strength; `None` means Δ̃ = Δ sinθ = 1.
    pub delta: Option<f64>,
    pub w_values: Vec<f64>,
    pub v_sp_values: Vec<f64>,
    pub w_over_rso: f64,
    pub t: f64,
    pub dt: f64,
    pub steps: Vec<usize>,
    pub samples: usize,
    pub grid_points: Option<usize>,
    pub grid_extent: Option<f64>,
    pub output_dir: PathBuf,
    pub formats: Formats,
}

/// Number written as a TOML integer, float or a multiple of pi in a string.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Num(f64);

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            I(i64),
            F(f64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::I(i) => Ok(Num(i as f64)),
            Raw::F(f) => Ok(Num(f)),
            Raw::S(s) => parse_pi_expr(&s)
                .map(Num)
                .ok_or_else(|| serde::de::Error::custom(format!("cannot read `{s}` as a number"))),
        }
    }
}

/// `a`, `pi`, `a*pi`, `a pi`, `pi/b`, `a*pi/b`, with optional leading minus.
pub fn parse_pi_expr(s: &str) -> Option<f64> {
    let s = s.trim().to_ascii_lowercase();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim().to_string(), d.trim().parse::<f64>().ok()?),
        None => (s.clone(), 1.0),
    };
    let (neg, num) = match num.strip_prefix('-') {
        Some(rest) => (true, rest.trim().to_string()),
        None => (false, num),
    };
    let value = if let Some(coef) = num.strip_suffix("pi") {
        let coef = coef.trim().trim_end_matches('*').trim();
        let c = if coef.is_empty() { 1.0 } else { coef.parse::<f64>().ok()? };
        c * PI
    } else {
        num.parse::<f64>().ok()?
    };
    let v = if neg { -value / den } else { value / den };
    v.is_finite().then_some(v)
}

const KNOWN_KEYS: [&str; 19] = [
    "scenario",
    "theta",
    "beta",
    "phi",
    "alpha",
    "delta",
    "w",
    "w_values",
    "v_sp",
    "v_sp_values",
    "w_over_rso",
    "t",
    "dt",
    "steps",
    "samples",
    "grid_points",
    "grid_extent",
    "output_dir",
    "formats",
];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(rename = "scenario")]
    _scenario: String,
    theta: Option<Num>,
    beta: Option<Num>,
    phi: Option<Num>,
    alpha: Option<Num>,
    delta: Option<Num>,
    w: Option<Num>,
    w_values: Option<Vec<Num>>,
    v_sp: Option<Num>,
    v_sp_values: Option<Vec<Num>>,
    w_over_rso: Option<Num>,
    t: Option<Num>,
    dt: Option<Num>,
    steps: Option<Vec<usize>>,
    samples: Option<usize>,
    grid_points: Option<usize>,
    grid_extent: Option<Num>,
    output_dir: Option<String>,
    formats: Option<Vec<String>>,
}

pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| {
        ConfigError::plain(e.to_string().trim_end().to_string())
    })?;
    for (key, value) in &table {
        let nested = match value {
            toml::Value::Table(_) => true,
            toml::Value::Array(items) => items
                .iter()
                .any(|v| matches!(v, toml::Value::Table(_) | toml::Value::Array(_))),
            _ => false,
        };
        if nested {
            return Err(ConfigError::at_key(text, key, "only flat key = value entries are supported"));
        }
    }
    let Some(name) = table.get("scenario") else {
        return Err(ConfigError::plain("missing required key `scenario`"));
    };
    let Some(name) = name.as_str() else {
        return Err(ConfigError::at_key(text, "scenario", "scenario must be a string"));
    };
    let Some(scenario) = Scenario::from_name(name) else {
        let known: Vec<_> = Scenario::ALL.iter().map(|s| s.name()).collect();
        return Err(ConfigError::at_key(
            text,
            "scenario",
            format!("unknown scenario `{name}` (expected one of {})", known.join(", ")),
        ));
    };
    for key in table.keys() {
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(ConfigError::at_key(text, key, "unknown key"));
        }
        let common = ["scenario", "output_dir", "formats"].contains(&key.as_str());
        if !common && !scenario.keys().contains(&key.as_str()) {
            return Err(ConfigError::at_key(
                text,
                key,
                format!("key is not used by scenario `{scenario}`"),
            ));
        }
    }
    let raw: RawConfig = toml::from_str(text)
        .map_err(|e| ConfigError::plain(e.to_string().trim_end().to_string()))?;
    build(scenario, raw, text)
}

fn build(scenario: Scenario, raw: RawConfig, text: &str) -> Result<ScenarioConfig, ConfigError> {
    let err = |key: &str, msg: &str| ConfigError::at_key(text, key, msg);
    let get = |v: Option<Num>, default: f64| v.map_or(default, |n| n.0);

    let theta = get(raw.theta, FRAC_PI_4);
    if !(0.0..=PI).contains(&theta) {
        return Err(err("theta", "theta must lie in [0, pi]"));
    }
    let beta = get(raw.beta, 0.0);
    if !(0.0..=PI).contains(&beta) {
        return Err(err("beta", "beta must lie in [0, pi]"));
    }
    let phi = get(raw.phi, 0.0);
    if !phi.is_finite() {
        return Err(err("phi", "phi must be finite"));
    }
    let alpha = get(raw.alpha, 1.0);
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(err("alpha", "alpha must be non-negative"));
    }
    if scenario == Scenario::Asymptotics && alpha == 0.0 {
        return Err(err("alpha", "the long-time limits need alpha > 0"));
    }
    let delta = raw.delta.map(|d| d.0);
    if delta.is_some_and(|d| !(d.is_finite() && d >= 0.0)) {
        return Err(err("delta", "delta must be non-negative"));
    }
    if delta.is_none() && scenario.uses_1d_setup() && theta.sin().abs() < 1e-12 {
        return Err(err(
            "theta",
            "theta = 0 or pi has no transverse field; set delta explicitly",
        ));
    }

    let positive = |key: &str, v: f64| -> Result<f64, ConfigError> {
        if v.is_finite() && v > 0.0 {
            Ok(v)
        } else {
            Err(err(key, &format!("{key} must be positive")))
        }
    };
    let non_negative = |key: &str, v: f64| -> Result<f64, ConfigError> {
        if v.is_finite() && v >= 0.0 {
            Ok(v)
        } else {
            Err(err(key, &format!("{key} must be non-negative")))
        }
    };

    if raw.w.is_some() && raw.w_values.is_some() {
        return Err(err("w_values", "give either w or w_values, not both"));
    }
    let default_w: Vec<f64> = match scenario {
        Scenario::Density1D | Scenario::Trajectory1D | Scenario::Spiral1D => vec![0.5, 1.0, 2.0],
        Scenario::Asymptotics => Vec::new(),
        _ => vec![1.0],
    };
    let w_values = match (raw.w, raw.w_values) {
        (Some(w), _) => vec![positive("w", w.0)?],
        (None, Some(ws)) => {
            if ws.is_empty() {
                return Err(err("w_values", "w_values must not be empty"));
            }
            ws.iter()
                .map(|w| positive("w_values", w.0).map_err(|_| err("w_values", "w must be positive")))
                .collect::<Result<_, _>>()?
        }
        (None, None) => default_w,
    };

    if raw.v_sp.is_some() && raw.v_sp_values.is_some() {
        return Err(err("v_sp_values", "give either v_sp or v_sp_values, not both"));
    }
    let default_v = if scenario == Scenario::Spread1D {
        vec![0.0, 0.4, 0.8]
    } else {
        vec![0.0]
    };
    let v_sp_values = match (raw.v_sp, raw.v_sp_values) {
        (Some(v), _) => vec![non_negative("v_sp", v.0)?],
        (None, Some(vs)) => {
            if vs.is_empty() {
                return Err(err("v_sp_values", "v_sp_values must not be empty"));
            }
            vs.iter()
                .map(|v| non_negative("v_sp_values", v.0))
                .collect::<Result<_, _>>()?
        }
        (None, None) => default_v,
    };

    let w_over_rso = positive("w_over_rso", get(raw.w_over_rso, 0.01))?;
    let default_t = match scenario {
        Scenario::Density1D => 2.0 * PI,
        Scenario::Spread1D | Scenario::Trajectory1D => 16.0 * PI,
        Scenario::Spiral1D => 200.0,
        Scenario::TrotterCheck => PI,
        _ => 0.0,
    };
    let t = non_negative("t", get(raw.t, default_t))?;
    let default_dt = if scenario == Scenario::Spiral1D { 0.1 } else { 0.01 };
    let dt = positive("dt", get(raw.dt, default_dt))?;
    if matches!(scenario, Scenario::Trajectory1D | Scenario::Spiral1D) {
        if t <= 0.0 {
            return Err(err("t", "t must be positive"));
        }
        if t / dt > 1e6 {
            return Err(err("dt", "more than 10^6 time samples requested"));
        }
    }

    let steps = raw.steps.unwrap_or_else(|| vec![8, 16, 32, 64, 128]);
    if steps.is_empty() || steps.contains(&0) {
        return Err(err("steps", "steps must be a non-empty list of positive integers"));
    }
    if steps.windows(2).any(|p| p[1] <= p[0]) {
        return Err(err("steps", "steps must be strictly increasing"));
    }
    let default_samples = if scenario == Scenario::Asymptotics { 41 } else { 801 };
    let samples = raw.samples.unwrap_or(default_samples);
    if samples < 2 {
        return Err(err("samples", "samples must be at least 2"));
    }
    let grid_points = raw.grid_points;
    if grid_points.is_some_and(|n| n < 8) {
        return Err(err("grid_points", "grid_points must be at least 8"));
    }
    let grid_extent = raw.grid_extent.map(|e| positive("grid_extent", e.0)).transpose()?;

    let mut formats = Formats {
        csv: true,
        json: true,
        svg: false,
    };
    if let Some(list) = raw.formats {
        formats = Formats {
            csv: false,
            json: false,
            svg: false,
        };
        for f in &list {
            match f.as_str() {
                "csv" => formats.csv = true,
                "json" => formats.json = true,
                "svg" => formats.svg = true,
                other => {
                    return Err(err(
                        "formats",
                        &format!("unknown format `{other}` (expected csv, json or svg)"),
                    ))
                }
            }
        }
    }
    let output_dir = PathBuf::from(raw.output_dir.unwrap_or_else(|| format!("out/{scenario}")));

    let cfg = ScenarioConfig {
        scenario,
        theta,
        beta,
        phi,
        alpha,
        delta,
        w_values,
        v_sp_values,
        w_over_rso,
        t,
        dt,
        steps,
        samples,
        grid_points,
        grid_extent,
        output_dir,
        formats,
    };
    preflight(&cfg, text)?;
    Ok(cfg)
}

/// Library-side validation that needs no evolution: setup ranges and the
/// validity window of the 2D asymptotics.
fn preflight(cfg: &ScenarioConfig, text: &str) -> Result<(), ConfigError> {
    use spinmeter_core::rashba2d::{MAX_RING_W_OVER_RSO, MIN_W_OVER_RSO};
    use spinmeter_core::MeasurementSetup;
    let lib = |e: spinmeter_core::Error| ConfigError::plain(e.to_string());
    if cfg.scenario.uses_1d_setup() {
        let delta = cfg.delta.unwrap_or_else(|| 1.0 / cfg.theta.sin());
        for &w in &cfg.w_values {
            for &v in &cfg.v_sp_values {
                MeasurementSetup::new(cfg.alpha, delta, cfg.theta, w, cfg.t, v).map_err(lib)?;
            }
        }
        return Ok(());
    }
    MeasurementSetup::rashba_units(cfg.w_over_rso).map_err(lib)?;
    if cfg.w_over_rso < MIN_W_OVER_RSO {
        return Err(ConfigError::at_key(
            text,
            "w_over_rso",
            format!("w/R_so below {MIN_W_OVER_RSO} makes the propagator integrals near-singular"),
        ));
    }
    if cfg.scenario == Scenario::RingProfile && cfg.w_over_rso > MAX_RING_W_OVER_RSO {
        return Err(ConfigError::at_key(
            text,
            "w_over_rso",
            format!(
                "the ring profile is an asymptotic result valid for w/R_so <= {MAX_RING_W_OVER_RSO}"
            ),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_expressions() {
        let cases = [
            ("pi", PI),
            ("pi/4", FRAC_PI_4),
            ("2*pi", 2.0 * PI),
            ("16 pi", 16.0 * PI),
            ("-pi/2", -PI / 2.0),
            ("0.25", 0.25),
            ("3/4", 0.75),
        ];
        for (s, want) in cases {
            assert_eq!(parse_pi_expr(s), Some(want), "{s}");
        }
        assert_eq!(parse_pi_expr("tau"), None);
        assert_eq!(parse_pi_expr("1/0"), None);
    }

    #[test]
    fn line_lookup() {
        let text = "scenario = \"x\"\n\n  beta=1\nbetax = 2\n";
        assert_eq!(line_of(text, "beta"), Some(3));
        assert_eq!(line_of(text, "betax"), Some(4));
        assert_eq!(line_of(text, "phi"), None);
    }

    #[test]
    fn integers_are_numbers() {
        let c = parse_config("scenario = \"spread_1d\"\nw = 2\nt = 3\n").unwrap();
        assert_eq!(c.w_values, vec![2.0]);
        assert_eq!(c.t, 3.0);
    }
}
