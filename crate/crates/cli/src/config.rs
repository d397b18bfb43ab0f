//! Scan configuration: JSON file plus command line overrides.

use std::path::PathBuf;

use macroreal::catalog::Family;
use macroreal::qubit::QubitState;
use serde::{Deserialize, Serialize};

use crate::{CliError, Result};

/// Initial state, either by name or by Bloch-sphere angles.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct StateSpec {
    /// "zero", "plus" or "mixed".
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
}

impl StateSpec {
    pub fn resolve(&self) -> Result<QubitState> {
        match (&self.state, self.theta) {
            (Some(name), None) => match name.as_str() {
                "zero" => Ok(QubitState::zero()),
                "plus" => Ok(QubitState::plus()),
                "mixed" => Ok(QubitState::maximally_mixed()),
                other => Err(CliError::input(format!(
                    "unknown state {other:?}; expected zero, plus or mixed"
                ))),
            },
            (None, Some(theta)) => {
                QubitState::from_angles(theta, self.phi.unwrap_or(0.0)).map_err(CliError::from)
            }
            (None, None) => Ok(QubitState::plus()),
            (Some(_), Some(_)) => Err(CliError::input(
                "give either a named state or explicit angles, not both",
            )),
        }
    }
}

/// Equally spaced grid over the phase gap between consecutive measurements.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) {
            return Err(CliError::input("grid step must be positive"));
        }
        if !(self.start < self.stop) {
            return Err(CliError::input("grid start must be below stop"));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(CliError::input("grid endpoints must be finite"));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.start + i as f64 * self.step).collect()
    }

    pub fn parse(text: &str) -> Result<Grid> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::input(format!(
                "grid {text:?} should look like start:stop:step"
            )));
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| {
                p.parse::<f64>()
                    .map_err(|_| CliError::input(format!("bad grid number {p:?}")))
            })
            .collect::<Result<_>>()?;
        let g = Grid { start: nums[0], stop: nums[1], step: nums[2] };
        g.validate()?;
        Ok(g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(CliError::input(format!(
                "unknown format {other:?}; expected csv or json"
            ))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanConfig {
    #[serde(flatten, default)]
    pub state: StateSpec,
    #[serde(default = "default_n_times")]
    pub n_times: usize,
    pub grid: Grid,
    pub families: Vec<String>,
    #[serde(default = "default_format")]
    pub format: OutputFormat,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub out: Option<PathBuf>,
}

fn default_n_times() -> usize {
    3
}

fn default_format() -> OutputFormat {
    OutputFormat::Csv
}

impl ScanConfig {
    pub fn from_file(path: &std::path::Path) -> Result<ScanConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
    }

    pub fn resolved_families(&self) -> Result<Vec<Family>> {
        if self.families.is_empty() {
            return Err(CliError::input("at least one family is required"));
        }
        self.families
            .iter()
            .map(|name| {
                name.parse::<Family>()
                    .map_err(|_| CliError::input(format!("unknown family {name:?}")))
            })
            .collect()
    }
}
