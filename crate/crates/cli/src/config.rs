//! Experiment configuration: TOML file plus command-line overrides.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use vilenkin_core::families::FunctionSpec;
use vilenkin_core::{make_tower, Family, TowerSpec};

/// A configuration problem: bad file, bad values, or a violated theorem
/// hypothesis detected before any computation runs.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "configuration error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

impl From<vilenkin_core::Error> for ConfigError {
    fn from(e: vilenkin_core::Error) -> Self {
        ConfigError(e.to_string())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TowerConfig {
    #[serde(flatten)]
    pub family: Family,
    pub depth: usize,
}

/// Experiment parameters; each experiment validates the subset it needs.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Params {
    /// Smoothness order (titchmarsh1, titchmarsh2, dini).
    pub alpha: Option<f64>,
    /// Logarithmic order (dini).
    pub nu: Option<f64>,
    /// Lebesgue exponent in (1, 2] (titchmarsh1).
    pub p: Option<f64>,
    /// Fractional-derivative order, alpha < gamma < alpha + 1/q (titchmarsh1).
    pub gamma: Option<f64>,
    /// Operator order a > 0 (vt).
    pub a: Option<f64>,
    /// Operator mode (vt): "group" or "lie".
    pub mode: Option<ScaleName>,
    /// Dual scale axis (titchmarsh1): "group" or "lie".
    pub scale: Option<ScaleName>,
    /// Single scale for condition-a; all k < N when absent.
    pub k: Option<usize>,
    /// Witness recipe for Heisenberg towers (condition-a):
    /// "coordinate" (default, certifies positivity) or "pair".
    pub witnesses: Option<WitnessRecipe>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleName {
    Group,
    Lie,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessRecipe {
    Coordinate,
    Pair,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub tower: TowerConfig,
    #[serde(default)]
    pub function: Option<FunctionSpec>,
    #[serde(default)]
    pub params: Params,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| ConfigError(format!("cannot parse {}: {e}", path.display())))
    }

    /// Applies `--seed` and `--depth` flag overrides.
    pub fn apply_overrides(
        &mut self,
        seed: Option<u64>,
        depth: Option<usize>,
    ) -> Result<(), ConfigError> {
        if let Some(depth) = depth {
            if depth == 0 {
                return Err(ConfigError("--depth must be positive".into()));
            }
            if let Family::VilenkinProduct { orders } = &mut self.tower.family {
                // keep the configured order pattern, repeating the last entry
                // when the override goes deeper
                let last = *orders.last().ok_or_else(|| {
                    ConfigError("vilenkin-product requires a nonempty orders list".into())
                })?;
                orders.resize(depth, last);
            }
            self.tower.depth = depth;
        }
        if let Some(seed) = seed {
            match &mut self.function {
                Some(FunctionSpec::RandomFourier { seed: s, .. })
                | Some(FunctionSpec::Dini { seed: s, .. }) => *s = seed,
                _ => {
                    return Err(ConfigError(
                        "--seed applies only to the random_fourier and dini families".into(),
                    ))
                }
            }
        }
        Ok(())
    }

    pub fn build_tower(&self) -> Result<Arc<TowerSpec>, ConfigError> {
        Ok(make_tower(self.tower.family.clone(), self.tower.depth)?)
    }

    /// The seed echoed into the report, when the function family has one.
    pub fn seed(&self) -> Option<u64> {
        match &self.function {
            Some(FunctionSpec::RandomFourier { seed, .. })
            | Some(FunctionSpec::Dini { seed, .. }) => Some(*seed),
            _ => None,
        }
    }

    pub fn require_function(&self) -> Result<&FunctionSpec, ConfigError> {
        self.function
            .as_ref()
            .ok_or_else(|| ConfigError("this experiment requires a [function] section".into()))
    }

    pub fn require_param(&self, value: Option<f64>, name: &str) -> Result<f64, ConfigError> {
        value.ok_or_else(|| ConfigError(format!("missing required parameter `{name}`")))
    }
}
