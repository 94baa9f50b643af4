//! Debate configuration and validation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Debate strategy selecting the stage state machine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Judge consulted once per stage, after the final round.
    Default,
    /// Judge consulted after every round; stage stops at the first winner.
    EarlyTermination,
    /// On a no-winner verdict the stage restarts with judge feedback,
    /// up to `retry_limit` attempts.
    ExtendedReflection,
}

impl Strategy {
    pub fn as_str(&self) -> &'static str {
        match self {
            Strategy::Default => "default",
            Strategy::EarlyTermination => "early-term",
            Strategy::ExtendedReflection => "ext-reflect",
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "default" => Ok(Strategy::Default),
            "early-term" | "early_termination" => Ok(Strategy::EarlyTermination),
            "ext-reflect" | "extended_reflection" => Ok(Strategy::ExtendedReflection),
            other => Err(format!(
                "unknown strategy `{other}` (expected default|early-term|ext-reflect)"
            )),
        }
    }
}

/// Configuration governing a debate run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DebateConfig {
    pub strategy: Strategy,
    pub num_debaters: usize,
    pub num_rounds: usize,
    pub temperature: f64,
    pub judge_enabled: bool,
    /// Maximum attempts per stage. Only consulted under ExtendedReflection.
    pub retry_limit: usize,
    /// Seed for scripted backends that want reproducible shuffling.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Default for DebateConfig {
    /// The configuration found optimal in the search: temperature 0,
    /// three debaters, a judge, two rounds.
    fn default() -> Self {
        DebateConfig {
            strategy: Strategy::Default,
            num_debaters: 3,
            num_rounds: 2,
            temperature: 0.0,
            judge_enabled: true,
            retry_limit: 2,
            seed: None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("num_debaters must be in {{2,3,4}}, got {0}")]
    NumDebaters(usize),
    #[error("num_rounds must be in {{2,3,4,5}}, got {0}")]
    NumRounds(usize),
    #[error("temperature must be in [0,2], got {0}")]
    Temperature(f64),
    #[error("temperature must be one of {{0, 0.2, 0.7}} in strict mode, got {0}")]
    TemperatureStrict(f64),
    #[error("retry_limit must be >= 1 for extended reflection, got {0}")]
    RetryLimit(usize),
    #[error("judge_enabled must be true for strategy {0:?}")]
    JudgeRequired(Strategy),
}

impl DebateConfig {
    /// Validates the configuration. In strict mode the discrete search-space
    /// values for temperature are enforced as well.
    pub fn validate(&self, strict_paper_mode: bool) -> Result<&Self, ConfigError> {
        if !(2..=4).contains(&self.num_debaters) {
            return Err(ConfigError::NumDebaters(self.num_debaters));
        }
        if !(2..=5).contains(&self.num_rounds) {
            return Err(ConfigError::NumRounds(self.num_rounds));
        }
        if strict_paper_mode {
            let allowed = [0.0, 0.2, 0.7];
            if !allowed.iter().any(|t| (t - self.temperature).abs() < 1e-12) {
                return Err(ConfigError::TemperatureStrict(self.temperature));
            }
        } else if !(0.0..=2.0).contains(&self.temperature) {
            return Err(ConfigError::Temperature(self.temperature));
        }
        if self.strategy == Strategy::ExtendedReflection && self.retry_limit < 1 {
            return Err(ConfigError::RetryLimit(self.retry_limit));
        }
        if self.strategy != Strategy::Default && !self.judge_enabled {
            return Err(ConfigError::JudgeRequired(self.strategy));
        }
        Ok(self)
    }

    /// Attempts allowed per stage: 1 unless extended reflection.
    pub fn max_attempts(&self) -> usize {
        match self.strategy {
            Strategy::ExtendedReflection => self.retry_limit,
            _ => 1,
        }
    }
}
