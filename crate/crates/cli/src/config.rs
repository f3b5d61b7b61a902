//! Run configuration: flags layered over an optional JSON file.

use std::fs;
use std::path::{Path, PathBuf};

use bdl_core::asymptotics::{Formula, HigherOrderConstants};
use bdl_core::RadialPotential;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

/// Which Bogoliubov functional to minimize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModeName {
    Full,
    ScatteringConstant,
}

/// A logarithmic range of one parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub parameter: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl SweepSpec {
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        if !(self.min > 0.0 && self.max > self.min && self.max.is_finite()) {
            return Err(CliError::input(format!(
                "sweep range must satisfy 0 < min < max, got [{}, {}]",
                self.min, self.max
            )));
        }
        if self.count < 2 {
            return Err(CliError::input(format!("sweep count must be at least 2, got {}", self.count)));
        }
        Ok(bdl_core::fit::log_space(self.min, self.max, self.count))
    }
}

/// Everything a subcommand needs. The resolved config is echoed into the
/// result record, and feeding that echo back through `--config` repeats the
/// run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subcommand: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub potential: Option<RadialPotential>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeName>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<Formula>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constants: Option<HigherOrderConstants>,
    /// RK4 steps for the scattering solve.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_points: Option<usize>,
    /// Momentum nodes for the Bogoliubov grid.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_nodes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<f64>,
    /// Gauss–Legendre nodes for the Lieb–Liniger equation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_trap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_box: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    /// Reserved; no subcommand is stochastic.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($field:ident),*) => {
        RunConfig { $($field: $top.$field.or($base.$field)),* }
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read config {}: {e}", path.display())))?;
        let mut value: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::input(format!("config {} is not JSON: {e}", path.display())))?;
        if let Some(p) = value.get_mut("potential") {
            *p = inline_tabulated(p.take(), path.parent())?;
        }
        serde_json::from_value(value).map_err(|e| CliError::input(format!("config {}: {e}", path.display())))
    }

    /// Fields set in `top` win; the rest come from `self`.
    pub fn overlay(self, top: RunConfig) -> RunConfig {
        let base = self;
        overlay!(
            base, top, subcommand, potential, dim, rho, a, c, gamma, mode, formula, constants, grid_points,
            grid_nodes, cutoff, nodes, r_trap, l_box, sweep, csv, seed
        )
    }

    pub fn require_potential(&self) -> Result<&RadialPotential, CliError> {
        self.potential
            .as_ref()
            .ok_or_else(|| CliError::input("a potential is required (--potential)"))
    }

    pub fn require(&self, value: Option<f64>, flag: &str) -> Result<f64, CliError> {
        value.ok_or_else(|| CliError::input(format!("--{flag} is required")))
    }
}

/// Parse a `--potential` argument: inline JSON, a JSON file, or a two-column
/// (r, v) CSV file.
pub fn parse_potential(arg: &str) -> Result<RadialPotential, CliError> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') {
        let value: Value =
            serde_json::from_str(arg).map_err(|e| CliError::input(format!("potential is not JSON: {e}")))?;
        return potential_from_value(value, None);
    }
    let path = Path::new(arg);
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        let (r, v) = read_table(path)?;
        return RadialPotential::tabulated(r, v).map_err(CliError::from);
    }
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read potential {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("potential file {} is not JSON: {e}", path.display())))?;
    potential_from_value(value, path.parent())
}

fn potential_from_value(value: Value, base: Option<&Path>) -> Result<RadialPotential, CliError> {
    let value = inline_tabulated(value, base)?;
    serde_json::from_value(value).map_err(|e| CliError::input(format!("invalid potential: {e}")))
}

/// Replace `{"kind": "tabulated", "file": "v.csv"}` with inline `r`, `v`
/// arrays. Relative paths resolve against `base`.
fn inline_tabulated(mut value: Value, base: Option<&Path>) -> Result<Value, CliError> {
    let is_tabulated = value.get("kind").and_then(Value::as_str) == Some("tabulated");
    let Some(obj) = value.as_object_mut().filter(|_| is_tabulated) else {
        return Ok(value);
    };
    let Some(file) = obj.remove("file") else {
        return Ok(value);
    };
    let file = file
        .as_str()
        .ok_or_else(|| CliError::input("tabulated potential 'file' must be a string"))?;
    let path = match base {
        Some(dir) if Path::new(file).is_relative() => dir.join(file),
        _ => PathBuf::from(file),
    };
    let (r, v) = read_table(&path)?;
    obj.insert("r".into(), r.into());
    obj.insert("v".into(), v.into());
    Ok(value)
}

/// Two numeric columns; a non-numeric first row is taken as a header.
pub fn read_table(path: &Path) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let (mut r, mut v) = (Vec::new(), Vec::new());
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        if record.len() != 2 {
            return Err(CliError::input(format!(
                "{} row {}: expected 2 columns, found {}",
                path.display(),
                line + 1,
                record.len()
            )));
        }
        match (record[0].parse::<f64>(), record[1].parse::<f64>()) {
            (Ok(x), Ok(y)) => {
                r.push(x);
                v.push(y);
            }
            _ if line == 0 => continue,
            _ => {
                return Err(CliError::input(format!(
                    "{} row {}: not numeric",
                    path.display(),
                    line + 1
                )))
            }
        }
    }
    Ok((r, v))
}
