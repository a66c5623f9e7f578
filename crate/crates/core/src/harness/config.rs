use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::limits::{classify_regime, LimitLaw, DEFAULT_BAND};
use crate::model::SimBudget;

/// Largest tolerated fraction of truncated replicates.
pub const DEFAULT_TRUNCATION_CAP: f64 = 0.01;

/// Factor applied to raw waiting times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    /// The timescale of the regime `(n, mu, m)` falls in.
    Auto,
    Explicit(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: u64,
    pub mu: f64,
    pub m: u32,
    pub replicates: u64,
    pub base_seed: u64,
    pub budget: SimBudget,
    pub scale: Scale,
    /// Law the scaled samples are tested against.
    pub comparison: Option<LimitLaw>,
    /// CSV destination; the summary goes next to it (see [`super::summary_path`]).
    pub output_path: Option<PathBuf>,
    /// Border half-width in `ln mu` used for classification.
    pub band: f64,
    pub truncation_cap: f64,
}

impl ExperimentConfig {
    pub fn new(n: u64, mu: f64, m: u32, replicates: u64, base_seed: u64) -> Self {
        Self {
            n,
            mu,
            m,
            replicates,
            base_seed,
            budget: SimBudget::default(),
            scale: Scale::Auto,
            comparison: None,
            output_path: None,
            band: DEFAULT_BAND,
            truncation_cap: DEFAULT_TRUNCATION_CAP,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.replicates < 1 {
            return Err(HarnessError::InvalidConfig(
                "replicates must be at least 1".into(),
            ));
        }
        if self.n < 2 || self.m < 1 {
            return Err(HarnessError::InvalidConfig(format!(
                "need n >= 2 and m >= 1, got n = {}, m = {}",
                self.n, self.m
            )));
        }
        if !(self.mu.is_finite() && self.mu >= 0.0) {
            return Err(HarnessError::InvalidConfig(format!(
                "mutation rate must be finite and non-negative, got {}",
                self.mu
            )));
        }
        if !(0.0..=1.0).contains(&self.truncation_cap) {
            return Err(HarnessError::InvalidConfig(format!(
                "truncation cap must lie in [0, 1], got {}",
                self.truncation_cap
            )));
        }
        match self.scale {
            Scale::Explicit(f) if !(f.is_finite() && f > 0.0) => {
                return Err(HarnessError::InvalidConfig(format!(
                    "explicit scale must be positive, got {f}"
                )))
            }
            // mu = 0 has no regime; the run itself reports the stall.
            Scale::Auto if self.mu > 0.0 => {
                classify_regime(self.n as f64, self.mu, self.m, self.band)?;
            }
            _ => {}
        }
        Ok(())
    }
}
