//! Run configuration and the JSON config file schema.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config field `{field}`: {reason}")]
    Field { field: &'static str, reason: String },
    #[error("unknown fitness function `{0}`")]
    UnknownFitness(String),
    #[error("config parse error: {0}")]
    Parse(#[from] serde_json::Error),
}

fn field_err(field: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Field {
        field,
        reason: reason.into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Neighborhood {
    VonNeumann,
    Moore,
}

/// All parameters of a single simulation run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimConfig {
    pub grid_width: usize,
    pub grid_height: usize,
    /// Body parts per action step (K).
    pub parts: usize,
    /// Steps per action (T); 1 means simple single-step actions.
    pub steps_per_action: usize,
    /// Fraction of agents initialized as creators (C).
    pub creator_fraction: f64,
    /// A creator's per-iteration invention probability (p).
    pub creator_p_invent: f64,
    /// Per-part replacement probability during invention.
    pub mutation_rate: f64,
    pub trend_bias_enabled: bool,
    pub sr_enabled: bool,
    /// Additive step for the self-regulation update.
    pub sr_delta: f64,
    pub neighborhood: Neighborhood,
    pub iterations: usize,
    /// Fraction of the landscape maximum defining "time to threshold".
    pub threshold_fraction: f64,
    pub seed: u64,
    /// Fitness function name ("ref6x3" or "chain6x3").
    pub fitness: String,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            grid_width: 10,
            grid_height: 10,
            parts: 6,
            steps_per_action: 1,
            creator_fraction: 1.0,
            creator_p_invent: 0.5,
            mutation_rate: 1.0 / 6.0,
            trend_bias_enabled: true,
            sr_enabled: false,
            sr_delta: 0.1,
            neighborhood: Neighborhood::VonNeumann,
            iterations: 100,
            threshold_fraction: 0.9,
            seed: 0,
            fitness: "ref6x3".to_string(),
        }
    }
}

impl SimConfig {
    pub fn agent_count(&self) -> usize {
        self.grid_width * self.grid_height
    }

    /// Total part positions per idea (K, or T*K for multi-step actions).
    pub fn positions(&self) -> usize {
        self.parts * self.steps_per_action
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.grid_width < 2 {
            return Err(field_err("grid_width", "must be >= 2 (imitation needs a distinct neighbor)"));
        }
        if self.grid_height < 2 {
            return Err(field_err("grid_height", "must be >= 2 (imitation needs a distinct neighbor)"));
        }
        if self.parts < 1 {
            return Err(field_err("parts", "must be >= 1"));
        }
        if self.steps_per_action < 1 {
            return Err(field_err("steps_per_action", "must be >= 1"));
        }
        if !(0.0..=1.0).contains(&self.creator_fraction) {
            return Err(field_err("creator_fraction", "must be in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.creator_p_invent) {
            return Err(field_err("creator_p_invent", "must be in [0, 1]"));
        }
        if !(self.mutation_rate > 0.0 && self.mutation_rate <= 1.0) {
            return Err(field_err("mutation_rate", "must be in (0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.sr_delta) {
            return Err(field_err("sr_delta", "must be in [0, 1]"));
        }
        if self.iterations < 1 {
            return Err(field_err("iterations", "must be >= 1"));
        }
        if !(self.threshold_fraction > 0.0 && self.threshold_fraction <= 1.0) {
            return Err(field_err("threshold_fraction", "must be in (0, 1]"));
        }
        match self.fitness.as_str() {
            "ref6x3" => {
                if self.parts != 6 {
                    return Err(field_err("parts", "ref6x3 requires parts = 6"));
                }
                if self.steps_per_action != 1 {
                    return Err(field_err("steps_per_action", "ref6x3 requires steps_per_action = 1"));
                }
            }
            "chain6x3" => {
                if self.parts != 6 {
                    return Err(field_err("parts", "chain6x3 requires parts = 6"));
                }
            }
            other => return Err(ConfigError::UnknownFitness(other.to_string())),
        }
        Ok(())
    }
}

/// Parameter grids and replicate count for the (C, p) sweep.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub c_grid: Vec<f64>,
    pub p_grid: Vec<f64>,
    pub replicates: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SrCompareBlock {
    pub replicates: usize,
}

/// The on-disk JSON config. Unknown keys are rejected to catch typos.
///
/// All simulation fields are optional and fall back to the documented
/// defaults; `creator_fraction` and `creator_p_invent` default to 1.0 and
/// 0.5 respectively.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConfigFile {
    pub grid_width: Option<usize>,
    pub grid_height: Option<usize>,
    pub parts: Option<usize>,
    pub steps_per_action: Option<usize>,
    pub creator_fraction: Option<f64>,
    pub creator_p_invent: Option<f64>,
    pub mutation_rate: Option<f64>,
    pub trend_bias_enabled: Option<bool>,
    pub sr_enabled: Option<bool>,
    pub sr_delta: Option<f64>,
    pub neighborhood: Option<Neighborhood>,
    pub iterations: Option<usize>,
    pub threshold_fraction: Option<f64>,
    pub seed: Option<u64>,
    pub fitness: Option<String>,
    pub sweep: Option<SweepBlock>,
    pub sr_compare: Option<SrCompareBlock>,
}

impl ConfigFile {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Resolve to a validated `SimConfig`, applying defaults for absent keys.
    pub fn resolve(&self) -> Result<SimConfig, ConfigError> {
        let d = SimConfig::default();
        let cfg = SimConfig {
            grid_width: self.grid_width.unwrap_or(d.grid_width),
            grid_height: self.grid_height.unwrap_or(d.grid_height),
            parts: self.parts.unwrap_or(d.parts),
            steps_per_action: self.steps_per_action.unwrap_or(d.steps_per_action),
            creator_fraction: self.creator_fraction.unwrap_or(d.creator_fraction),
            creator_p_invent: self.creator_p_invent.unwrap_or(d.creator_p_invent),
            mutation_rate: self.mutation_rate.unwrap_or(d.mutation_rate),
            trend_bias_enabled: self.trend_bias_enabled.unwrap_or(d.trend_bias_enabled),
            sr_enabled: self.sr_enabled.unwrap_or(d.sr_enabled),
            sr_delta: self.sr_delta.unwrap_or(d.sr_delta),
            neighborhood: self.neighborhood.unwrap_or(d.neighborhood),
            iterations: self.iterations.unwrap_or(d.iterations),
            threshold_fraction: self.threshold_fraction.unwrap_or(d.threshold_fraction),
            seed: self.seed.unwrap_or(d.seed),
            fitness: self.fitness.clone().unwrap_or(d.fitness),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
