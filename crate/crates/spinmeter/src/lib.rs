//! Config-driven scenario runner for the spin-meter simulations.
//!
//! A run parses a key = value config, evaluates one scenario through
//! `spinmeter-core`, and writes CSV tables, optional SVG plots and a JSON
//! summary into the output directory.

pub mod config;
pub mod output;
pub mod scenarios;

use config::ScenarioConfig;
use scenarios::Outcome;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

/// Failure classes, each with its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Accuracy(String),
    #[error("{0}")]
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Config(_) => 2,
            Failure::Accuracy(_) => 3,
        }
    }
}

impl From<spinmeter_core::Error> for Failure {
    fn from(e: spinmeter_core::Error) -> Self {
        match e {
            spinmeter_core::Error::Numerical { .. } => Failure::Accuracy(e.to_string()),
            _ => Failure::Config(e.to_string()),
        }
    }
}

impl From<config::ConfigError> for Failure {
    fn from(e: config::ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut cfg = config::parse_config(&text)?;
    // relative output directories are taken from the config file's location
    if cfg.output_dir.is_relative() {
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.output_dir = base.join(&cfg.output_dir);
    }
    Ok(cfg)
}

pub fn config_json(cfg: &ScenarioConfig) -> Value {
    json!({
        "scenario": cfg.scenario.name(),
        "theta": cfg.theta,
        "beta": cfg.beta,
        "phi": cfg.phi,
        "alpha": cfg.alpha,
        "delta": cfg.delta,
        "w_values": cfg.w_values,
        "v_sp_values": cfg.v_sp_values,
        "w_over_rso": cfg.w_over_rso,
        "t": cfg.t,
        "dt": cfg.dt,
        "steps": cfg.steps,
        "samples": cfg.samples,
        "grid_points": cfg.grid_points,
        "grid_extent": cfg.grid_extent,
        "formats": cfg.formats.names(),
    })
}

pub fn summary_json(cfg: &ScenarioConfig, outcome: &Outcome, files: &[String]) -> Value {
    json!({
        "scenario": cfg.scenario.name(),
        "status": if outcome.passed() { "ok" } else { "accuracy_failure" },
        "config": config_json(cfg),
        "results": outcome.results,
        "checks": outcome.checks.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        "warnings": outcome.warnings,
        "files": files,
    })
}

#[derive(Debug)]
pub struct RunReport {
    pub outcome: Outcome,
    pub files: Vec<PathBuf>,
    pub summary: Value,
}

/// Run a scenario and write its outputs. Accuracy failures are reported
/// through `RunReport::outcome` after the files are written.
pub fn execute(cfg: &ScenarioConfig) -> Result<RunReport, Failure> {
    let outcome = scenarios::run(cfg)?;
    let dir = &cfg.output_dir;
    let io = |e: std::io::Error| Failure::Io(format!("writing to {}: {e}", dir.display()));
    let mut names = Vec::new();
    for t in &outcome.tables {
        if cfg.formats.csv {
            names.push(format!("{}.csv", t.stem));
        }
        if cfg.formats.svg {
            names.push(format!("{}.svg", t.stem));
        }
    }
    if cfg.formats.json {
        names.push("summary.json".to_string());
    }
    let summary = summary_json(cfg, &outcome, &names);
    let mut files = Vec::new();
    for t in &outcome.tables {
        if cfg.formats.csv {
            files.push(output::write_file(dir, &format!("{}.csv", t.stem), &output::to_csv(t)).map_err(io)?);
        }
        if cfg.formats.svg {
            files.push(output::write_file(dir, &format!("{}.svg", t.stem), &output::to_svg(t)).map_err(io)?);
        }
    }
    if cfg.formats.json {
        let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
        text.push('\n');
        files.push(output::write_file(dir, "summary.json", &text).map_err(io)?);
    }
    Ok(RunReport {
        outcome,
        files,
        summary,
    })
}
