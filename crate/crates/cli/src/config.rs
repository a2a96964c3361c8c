//! Strict TOML scenario configuration.

use std::fmt;
use std::path::PathBuf;

use clap::ValueEnum;
use mgcl_core::conformal::{Gauge, SolveOptions};
use mgcl_core::estimate::{HeinzSampler, SchauderSampler};
use mgcl_core::surface::FamilySpec;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Analyze,
    Conformal,
    ThetaSweep,
    ProbeSchauder,
    ProbeHeinz,
    Bernstein,
    VerifyAll,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Analyze => "analyze",
            Scenario::Conformal => "conformal",
            Scenario::ThetaSweep => "theta-sweep",
            Scenario::ProbeSchauder => "probe-schauder",
            Scenario::ProbeHeinz => "probe-heinz",
            Scenario::Bernstein => "bernstein",
            Scenario::VerifyAll => "verify-all",
        }
    }

    fn needs_surface(self) -> bool {
        matches!(
            self,
            Scenario::Analyze | Scenario::Conformal | Scenario::ThetaSweep
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Option<Scenario>,
    pub surface: Option<FamilySpec>,
    #[serde(default)]
    pub numeric: Numeric,
    #[serde(default)]
    pub output: Output,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Numeric {
    pub modes: usize,
    pub grid: (usize, usize),
    pub tol: f64,
    pub psi_modes: Option<usize>,
    pub max_iterations: usize,
    pub gauge: Gauge,
    pub seed: u64,
    pub radii: Vec<f64>,
    /// Random probe samples.
    pub samples: usize,
    /// Evaluation points for `analyze` and `conformal`, in the scenario's own coordinates.
    pub points: Vec<(f64, f64)>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub omega: f64,
    pub omega_cap: f64,
    pub theta: f64,
    pub schauder: SchauderSampler,
    pub heinz: HeinzSampler,
}

impl Default for Numeric {
    fn default() -> Self {
        let solve = SolveOptions::default();
        Self {
            modes: solve.modes,
            grid: solve.grid,
            tol: solve.tol,
            psi_modes: solve.psi_modes,
            max_iterations: solve.max_iterations,
            gauge: solve.gauge,
            seed: 0,
            radii: (1..=7).map(|p| 2f64.powi(p)).collect(),
            samples: 1000,
            points: vec![(0.0, 0.0)],
            c1: None,
            c2: None,
            omega: 1.0,
            omega_cap: 1.0,
            theta: 8.0,
            schauder: SchauderSampler::default(),
            heinz: HeinzSampler::default(),
        }
    }
}

impl Numeric {
    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            modes: self.modes,
            grid: self.grid,
            tol: self.tol,
            psi_modes: self.psi_modes,
            max_iterations: self.max_iterations,
            gauge: self.gauge,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Output {
    pub directory: PathBuf,
    pub formats: Vec<Format>,
}

impl Default for Output {
    fn default() -> Self {
        Self {
            directory: PathBuf::from("mgcl-out"),
            formats: vec![Format::Csv, Format::Json, Format::Svg],
        }
    }
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

pub fn parse(text: &str) -> Result<ScenarioConfig, ConfigError> {
    toml::from_str(text).map_err(|e| bad(e.to_string().trim_end().to_string()))
}

impl ScenarioConfig {
    /// Range checks for `scenario`; the library repeats the ones it relies on.
    pub fn validate(&self, scenario: Scenario) -> Result<(), ConfigError> {
        if let Some(s) = self.scenario {
            if s != scenario {
                return Err(bad(format!(
                    "config is for scenario `{}` but `{}` was requested",
                    s.name(),
                    scenario.name()
                )));
            }
        }
        let n = &self.numeric;
        if scenario.needs_surface() {
            let s = self
                .surface
                .as_ref()
                .ok_or_else(|| bad(format!("scenario `{}` needs a [surface] table", scenario.name())))?;
            if !(s.radius > 0.0 && s.radius.is_finite()) {
                return Err(bad("surface.radius must be positive and finite"));
            }
            if scenario != Scenario::ThetaSweep {
                let limit = if scenario == Scenario::Conformal { 1.0 } else { s.radius };
                if let Some(p) = n.points.iter().find(|p| !(p.0.hypot(p.1) < limit)) {
                    return Err(bad(format!(
                        "numeric.points entry ({}, {}) lies outside the open disc of radius {limit}",
                        p.0, p.1
                    )));
                }
            }
        }
        if !(1..=256).contains(&n.modes) {
            return Err(bad("numeric.modes must lie in 1..=256"));
        }
        if !(2..=1024).contains(&n.grid.0) || !(8..=8192).contains(&n.grid.1) {
            return Err(bad("numeric.grid must satisfy 2 <= n_r <= 1024 and 8 <= n_theta <= 8192"));
        }
        if !(n.tol > 0.0 && n.tol < 1.0) {
            return Err(bad("numeric.tol must lie in (0, 1)"));
        }
        if n.psi_modes.is_some_and(|m| !(2..=512).contains(&m)) {
            return Err(bad("numeric.psi_modes must lie in 2..=512"));
        }
        if n.max_iterations == 0 {
            return Err(bad("numeric.max_iterations must be positive"));
        }
        if scenario == Scenario::ThetaSweep || scenario == Scenario::Bernstein {
            let min = if scenario == Scenario::ThetaSweep { 4 } else { 2 };
            if n.radii.len() < min
                || n.radii.iter().any(|r| !(*r > 0.0 && r.is_finite()))
                || n.radii.windows(2).any(|w| !(w[1] > w[0]))
            {
                return Err(bad(format!(
                    "numeric.radii must hold at least {min} positive, strictly increasing values"
                )));
            }
        }
        if !(1..=1_000_000).contains(&n.samples) {
            return Err(bad("numeric.samples must lie in 1..=1000000"));
        }
        for (key, v) in [("c1", n.c1), ("c2", n.c2)] {
            if v.is_some_and(|c| !(c > 0.0 && c.is_finite())) {
                return Err(bad(format!("numeric.{key} must be positive")));
            }
        }
        if n.c1.is_some() != n.c2.is_some() {
            return Err(bad("numeric.c1 and numeric.c2 must be given together"));
        }
        if scenario == Scenario::Bernstein {
            if !(0.0..2.0).contains(&n.omega) {
                return Err(bad("numeric.omega must lie in [0, 2)"));
            }
            if !(n.omega_cap > 0.0 && n.theta > 0.0) {
                return Err(bad("numeric.omega_cap and numeric.theta must be positive"));
            }
        }
        if !(1..=64).contains(&n.schauder.degree) || !(1..=16).contains(&n.schauder.components) {
            return Err(bad("numeric.schauder needs degree in 1..=64 and components in 1..=16"));
        }
        if !(1..=32).contains(&n.heinz.modes) || !(n.heinz.amplitude >= 0.0 && n.heinz.amplitude < 1.0) {
            return Err(bad("numeric.heinz needs modes in 1..=32 and amplitude in [0, 1)"));
        }
        if self.output.formats.is_empty() {
            return Err(bad("output.formats must not be empty"));
        }
        Ok(())
    }
}
