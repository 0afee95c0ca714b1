//! Flat key-value run configuration with flag overrides (flags win).

use std::collections::BTreeMap;
use std::path::Path;

use ddc_core::evaluator::{EvalConfig, QuadratureConfig};
use ddc_core::CoreError;

/// Everything a batch run needs. Defaults give a small off-resonant
/// one-dimensional configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub omega_a: f64,
    pub omega_b: f64,
    pub mu: f64,
    pub sep: f64,
    pub sep_list: Vec<f64>,
    pub box_length: f64,
    pub cutoff: f64,
    pub dim: u32,
    pub eps_ladder: Vec<f64>,
    pub truncation: u32,
    pub tol: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            omega_a: 1.23,
            omega_b: 0.83,
            mu: 1.0,
            sep: 2.0,
            sep_list: Vec::new(),
            box_length: 11.0,
            cutoff: 1.75,
            dim: 1,
            eps_ladder: (0..12).map(|j| 0.4 / f64::powi(2.0, j)).collect(),
            truncation: 2,
            tol: 1e-6,
        }
    }
}

fn parse_list(v: &str) -> Result<Vec<f64>, CoreError> {
    v.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|e| CoreError::InvalidConfig(format!("bad number {x:?}: {e}")))
        })
        .collect()
}

impl RunConfig {
    /// Parse a `key = value` file; `#` starts a comment.
    pub fn from_file(path: &Path) -> Result<Self, CoreError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CoreError::InvalidConfig(format!("{}: {e}", path.display())))?;
        let mut cfg = RunConfig::default();
        let mut pairs = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CoreError::InvalidConfig(format!("line {}: expected key = value", lineno + 1))
            })?;
            pairs.insert(k.trim().to_string(), v.trim().to_string());
        }
        for (k, v) in pairs {
            cfg.set(&k, &v)?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CoreError> {
        let bad = |e: std::num::ParseFloatError| {
            CoreError::InvalidConfig(format!("{key}: {e}"))
        };
        match key {
            "omega_a" => self.omega_a = value.parse().map_err(bad)?,
            "omega_b" => self.omega_b = value.parse().map_err(bad)?,
            "mu" => self.mu = value.parse().map_err(bad)?,
            "sep" => self.sep = value.parse().map_err(bad)?,
            "sep_list" => self.sep_list = parse_list(value)?,
            "box" => self.box_length = value.parse().map_err(bad)?,
            "cutoff" => self.cutoff = value.parse().map_err(bad)?,
            "dim" => {
                self.dim = value
                    .parse()
                    .map_err(|e| CoreError::InvalidConfig(format!("dim: {e}")))?
            }
            "epsilon_ladder" => self.eps_ladder = parse_list(value)?,
            "truncation" => {
                self.truncation = value
                    .parse()
                    .map_err(|e| CoreError::InvalidConfig(format!("truncation: {e}")))?
            }
            "tol" => self.tol = value.parse().map_err(bad)?,
            other => {
                return Err(CoreError::InvalidConfig(format!("unknown key {other:?}")));
            }
        }
        Ok(())
    }

    pub fn eval_config(&self) -> EvalConfig {
        EvalConfig {
            omega_a: self.omega_a,
            omega_b: self.omega_b,
            mu: self.mu,
            separation: self.sep,
            box_length: self.box_length,
            cutoff: self.cutoff,
            dim: self.dim,
            quad: QuadratureConfig {
                eps_ladder: self.eps_ladder.clone(),
                tol: self.tol,
                ..QuadratureConfig::default()
            },
        }
    }
}
