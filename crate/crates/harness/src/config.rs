//! Sweep specifications read from TOML.

use std::path::Path;

use recoupling::{Precision, Spin};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Dmatrix,
    Character,
    Threej,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Asym,
    #[default]
    Compare,
}

impl Mode {
    pub fn exact(self) -> bool {
        matches!(self, Mode::Exact | Mode::Compare)
    }
    pub fn asym(self) -> bool {
        matches!(self, Mode::Asym | Mode::Compare)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Parameter grids. Which fields are required depends on the quantity.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    /// `M / J` targets for Wigner elements; snapped to the nearest admissible `M`.
    #[serde(default)]
    pub x: Vec<f64>,
    /// `M' / J` targets.
    #[serde(default)]
    pub y: Vec<f64>,
    /// `cos^2(beta/2)` values.
    #[serde(default)]
    pub xi2: Vec<f64>,
    #[serde(default = "zero_list")]
    pub alpha: Vec<f64>,
    #[serde(default = "zero_list")]
    pub gamma: Vec<f64>,
    /// Number of Haar-random rotations for character sweeps.
    #[serde(default)]
    pub random_rotations: usize,
    /// `J_i = J r_i` for 3j sweeps, snapped to half-integers.
    #[serde(default)]
    pub j_ratios: Vec<[f64; 3]>,
    /// `M_1 = f_1 J_1`, `M_2 = f_2 J_2` for 3j sweeps; `M_3 = -M_1 - M_2`.
    #[serde(default)]
    pub m_fractions: Vec<[f64; 2]>,
}

fn zero_list() -> Vec<f64> {
    vec![0.0]
}

fn default_kappa() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub quantity: Quantity,
    #[serde(default)]
    pub mode: Mode,
    /// Spins (or spin scales for 3j sweeps), ascending.
    pub j_values: Vec<f64>,
    #[serde(default)]
    pub grid: Grid,
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    #[serde(default)]
    pub output_format: OutputFormat,
    #[serde(default)]
    pub seed: u64,
    /// Working precision of exact evaluation in decimal digits.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("field `{field}`: {message}")]
    Field { field: &'static str, message: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl ConfigError {
    pub fn field(field: &'static str, message: impl Into<String>) -> Self {
        ConfigError::Field { field, message: message.into() }
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

impl SweepSpec {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let spec: SweepSpec = toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((0, 0), |s| line_col(text, s.start));
            ConfigError::Syntax { line, column, message: e.message().trim().to_string() }
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.j_values.is_empty() {
            return Err(ConfigError::field("j_values", "grid is empty"));
        }
        if self.j_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ConfigError::field("j_values", "must be strictly ascending"));
        }
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return Err(ConfigError::field("kappa", "must be positive"));
        }
        if let Some(d) = self.precision {
            if Precision::from_digits(d).is_none() {
                return Err(ConfigError::field("precision", format!("{d} digits is outside the supported range")));
            }
        }
        let g = &self.grid;
        let nonempty = |v: &[f64], f: &'static str| {
            if v.is_empty() {
                Err(ConfigError::field(f, "grid is empty"))
            } else {
                Ok(())
            }
        };
        let in_range = |v: &[f64], f: &'static str, lo: f64, hi: f64| {
            if v.iter().all(|&t| t >= lo && t <= hi) {
                Ok(())
            } else {
                Err(ConfigError::field(f, format!("values must lie in [{lo}, {hi}]")))
            }
        };
        match self.quantity {
            Quantity::Dmatrix => {
                for j in &self.j_values {
                    if Spin::from_f64(*j).is_none_or(|s| s.twice() == 0) {
                        return Err(ConfigError::field("j_values", format!("{j} is not a positive half-integer")));
                    }
                }
                nonempty(&g.x, "grid.x")?;
                nonempty(&g.y, "grid.y")?;
                nonempty(&g.xi2, "grid.xi2")?;
                nonempty(&g.alpha, "grid.alpha")?;
                nonempty(&g.gamma, "grid.gamma")?;
                in_range(&g.x, "grid.x", -1.0, 1.0)?;
                in_range(&g.y, "grid.y", -1.0, 1.0)?;
                in_range(&g.xi2, "grid.xi2", 0.0, 1.0)?;
            }
            Quantity::Character => {
                for j in &self.j_values {
                    if Spin::from_f64(*j).is_none() {
                        return Err(ConfigError::field("j_values", format!("{j} is not a half-integer")));
                    }
                }
                if g.random_rotations == 0 {
                    return Err(ConfigError::field("grid.random_rotations", "grid is empty"));
                }
            }
            Quantity::Threej => {
                if self.j_values.iter().any(|&j| !(j > 0.0 && j.is_finite())) {
                    return Err(ConfigError::field("j_values", "scales must be positive"));
                }
                if g.j_ratios.is_empty() {
                    return Err(ConfigError::field("grid.j_ratios", "grid is empty"));
                }
                if g.m_fractions.is_empty() {
                    return Err(ConfigError::field("grid.m_fractions", "grid is empty"));
                }
                if g.j_ratios.iter().flatten().any(|&r| !(r > 0.0)) {
                    return Err(ConfigError::field("grid.j_ratios", "ratios must be positive"));
                }
                if g.m_fractions.iter().flatten().any(|&f| !(-1.0..=1.0).contains(&f)) {
                    return Err(ConfigError::field("grid.m_fractions", "values must lie in [-1, 1]"));
                }
            }
        }
        Ok(())
    }

    /// The configured precision, else the `SU2ASYM_PRECISION` environment variable, else the default.
    pub fn precision(&self) -> Precision {
        self.precision.and_then(Precision::from_digits).unwrap_or_else(default_precision)
    }
}

pub const PRECISION_ENV: &str = "SU2ASYM_PRECISION";

pub fn default_precision() -> Precision {
    std::env::var(PRECISION_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .and_then(Precision::from_digits)
        .unwrap_or(Precision::DEFAULT)
}
