//! Run configuration: a flat key/value text file.
//!
//! Recognized keys: rho, alpha, beta, bend_k, radius, length, n_nodes,
//! bc (free|periodic), dt or dt_factor, t_end, preset, initial_file,
//! constrained (true|false), diag_path, snap_path, snap_every.
//! Lines starting with `#` and blank lines are ignored.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use rod_core::presets::Preset;
use rod_core::{BoundaryCondition, Grid, RodParameters};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DtMode {
    /// Explicit time step.
    Explicit(f64),
    /// h = factor * k^2.
    FactorOfSpacingSquared(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    Preset(Preset),
    /// Node-value file; used when `preset = custom`.
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: RodParameters,
    pub n_nodes: usize,
    pub bc: BoundaryCondition,
    pub dt_mode: DtMode,
    pub t_end: f64,
    pub initial: InitialCondition,
    pub constrained: bool,
    pub diag_path: PathBuf,
    pub snap_path: PathBuf,
    pub snap_every: u64,
}

impl RunConfig {
    pub fn grid(&self) -> Result<Grid, CliError> {
        Grid::new(self.n_nodes, self.params.length, self.bc)
            .map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn dt(&self, grid: &Grid) -> f64 {
        match self.dt_mode {
            DtMode::Explicit(dt) => dt,
            DtMode::FactorOfSpacingSquared(f) => f * grid.spacing() * grid.spacing(),
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Usage(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        const KEYS: &[&str] = &[
            "rho",
            "alpha",
            "beta",
            "bend_k",
            "radius",
            "length",
            "n_nodes",
            "bc",
            "dt",
            "dt_factor",
            "t_end",
            "preset",
            "initial_file",
            "constrained",
            "diag_path",
            "snap_path",
            "snap_every",
        ];
        let mut kv: HashMap<&str, (usize, &str)> = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("line {}: expected `key = value`, got `{line}`", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            if !KEYS.contains(&key) {
                return Err(CliError::Usage(format!(
                    "line {}: unknown key `{key}`",
                    lineno + 1
                )));
            }
            if kv.insert(key, (lineno + 1, value)).is_some() {
                return Err(CliError::Usage(format!(
                    "line {}: duplicate key `{key}`",
                    lineno + 1
                )));
            }
        }

        let get = |key: &str| -> Result<&str, CliError> {
            kv.get(key)
                .map(|&(_, v)| v)
                .ok_or_else(|| CliError::Usage(format!("missing key `{key}`")))
        };
        let number = |key: &str| -> Result<f64, CliError> {
            let (line, v) = kv
                .get(key)
                .ok_or_else(|| CliError::Usage(format!("missing key `{key}`")))?;
            v.parse::<f64>().map_err(|_| {
                CliError::Usage(format!("line {line}: key `{key}`: `{v}` is not a number"))
            })
        };

        let params = RodParameters::new(
            number("rho")?,
            number("alpha")?,
            number("beta")?,
            number("bend_k")?,
            number("radius")?,
            number("length")?,
        )
        .map_err(|e| CliError::Usage(e.to_string()))?;

        let n_nodes = number("n_nodes")? as usize;
        let bc = match get("bc")? {
            "free" => BoundaryCondition::Free,
            "periodic" => BoundaryCondition::Periodic,
            other => {
                return Err(CliError::Usage(format!(
                    "key `bc`: expected free or periodic, got `{other}`"
                )))
            }
        };

        let dt_mode = match (kv.contains_key("dt"), kv.contains_key("dt_factor")) {
            (true, false) => DtMode::Explicit(number("dt")?),
            (false, true) => DtMode::FactorOfSpacingSquared(number("dt_factor")?),
            (true, true) => {
                return Err(CliError::Usage(
                    "keys `dt` and `dt_factor` are mutually exclusive".into(),
                ))
            }
            (false, false) => {
                return Err(CliError::Usage("one of `dt` or `dt_factor` is required".into()))
            }
        };
        match dt_mode {
            DtMode::Explicit(v) | DtMode::FactorOfSpacingSquared(v) if !(v > 0.0) => {
                return Err(CliError::Usage(format!("time step must be positive, got {v}")))
            }
            _ => {}
        }

        let t_end = number("t_end")?;
        if !(t_end > 0.0) {
            return Err(CliError::Usage(format!("key `t_end`: must be positive, got {t_end}")));
        }

        let initial = match get("preset")? {
            "custom" => {
                let file = get("initial_file").map_err(|_| {
                    CliError::Usage("preset `custom` requires key `initial_file`".into())
                })?;
                InitialCondition::File(PathBuf::from(file))
            }
            name => match Preset::parse(name) {
                Some(p) => InitialCondition::Preset(p),
                None => {
                    return Err(CliError::Usage(format!(
                        "key `preset`: expected paper, straight_rest, theta_wave or custom, got `{name}`"
                    )))
                }
            },
        };

        let constrained = match get("constrained")? {
            "true" => true,
            "false" => false,
            other => {
                return Err(CliError::Usage(format!(
                    "key `constrained`: expected true or false, got `{other}`"
                )))
            }
        };

        let snap_every = number("snap_every")? as u64;
        if snap_every < 1 {
            return Err(CliError::Usage("key `snap_every`: must be >= 1".into()));
        }

        Ok(RunConfig {
            params,
            n_nodes,
            bc,
            dt_mode,
            t_end,
            initial,
            constrained,
            diag_path: PathBuf::from(get("diag_path")?),
            snap_path: PathBuf::from(get("snap_path")?),
            snap_every,
        })
    }
}
