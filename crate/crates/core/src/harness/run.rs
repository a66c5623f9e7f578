use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Scale};
use super::output::write_outputs;
use super::stats::{dkw_bound, ks_distance, EmpiricalDistribution};
use super::HarnessError;
use crate::limits::{classify_regime, limit_law, Regime};
use crate::model::{simulate_tau, TauSample};
use crate::rng::replicate_rng;

/// Probability levels reported in [`Summary::quantiles`].
pub const QUANTILE_LEVELS: [f64; 7] = [0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99];

/// One CSV row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReplicateRecord {
    pub replicate_index: u64,
    pub raw_tau: f64,
    pub scaled_tau: f64,
    pub events: u64,
    pub fixations: u32,
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub kind: String,
    pub label: String,
    pub j: Option<u32>,
    #[serde(rename = "A")]
    pub a: Option<f64>,
    pub exponent: f64,
    pub timescale: f64,
    /// Descriptor of the limit law, when it can be evaluated.
    pub law: Option<String>,
}

impl RegimeReport {
    pub fn from_regime(regime: &Regime) -> Self {
        Self {
            kind: regime.kind.name().to_string(),
            label: regime.kind.label(),
            j: regime.kind.j(),
            a: regime.kind.border_constant(),
            exponent: regime.exponent,
            timescale: regime.timescale,
            law: limit_law(regime).ok().map(|l| l.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantileEntry {
    pub level: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub config: ExperimentConfig,
    pub regime: Option<RegimeReport>,
    pub scale_factor: f64,
    pub n_samples: u64,
    pub n_truncated: u64,
    pub truncation_fraction: f64,
    pub mean: f64,
    pub quantiles: Vec<QuantileEntry>,
    pub comparison: Option<String>,
    pub ks: Option<f64>,
    pub dkw_99: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    pub records: Vec<ReplicateRecord>,
    pub distribution: EmpiricalDistribution,
    pub summary: Summary,
}

/// [`run_experiment_with`] on rayon's global pool.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutcome, HarnessError> {
    run_experiment_with(config, None)
}

/// Runs all replicates, scales them, writes the CSV and summary when
/// `config.output_path` is set, and enforces the truncation cap.
///
/// `threads == Some(1)` runs serially on the calling thread; any other
/// `Some(k)` uses a dedicated pool of `k` workers.
pub fn run_experiment_with(
    config: &ExperimentConfig,
    threads: Option<usize>,
) -> Result<ExperimentOutcome, HarnessError> {
    config.validate()?;
    let samples = simulate_all(config, threads)?;

    let regime = if config.mu > 0.0 {
        classify_regime(config.n as f64, config.mu, config.m, config.band)
    } else {
        Err(crate::limits::LimitsError::InvalidArgument("mu = 0".into()))
    };
    let scale_factor = match config.scale {
        Scale::Auto => regime.as_ref().map_err(Clone::clone)?.timescale,
        Scale::Explicit(f) => f,
    };
    let records: Vec<ReplicateRecord> = samples
        .iter()
        .enumerate()
        .map(|(i, s)| ReplicateRecord {
            replicate_index: i as u64,
            raw_tau: s.tau,
            scaled_tau: s.tau * scale_factor,
            events: s.events,
            fixations: s.fixations,
            truncated: s.truncated,
        })
        .collect();

    let truncated = records.iter().filter(|r| r.truncated).count() as u64;
    let kept: Vec<f64> = records
        .iter()
        .filter(|r| !r.truncated)
        .map(|r| r.scaled_tau)
        .collect();
    let over_cap = truncated as f64 / config.replicates as f64 > config.truncation_cap;
    let cap_error = || HarnessError::TruncationCap {
        truncated,
        replicates: config.replicates,
        cap: config.truncation_cap,
    };
    if kept.is_empty() && over_cap {
        return Err(cap_error());
    }
    let distribution = EmpiricalDistribution::new(kept, truncated)?;
    let n_samples = distribution.samples().len() as u64;

    let summary = Summary {
        config: config.clone(),
        regime: regime.as_ref().ok().map(RegimeReport::from_regime),
        scale_factor,
        n_samples,
        n_truncated: truncated,
        truncation_fraction: truncated as f64 / config.replicates as f64,
        mean: distribution.mean(),
        quantiles: QUANTILE_LEVELS
            .iter()
            .map(|&level| QuantileEntry {
                level,
                value: distribution.quantile(level),
            })
            .collect(),
        comparison: config.comparison.map(|l| l.to_string()),
        ks: config.comparison.map(|l| ks_distance(&distribution, &l)),
        dkw_99: dkw_bound(n_samples, 0.01)?,
    };

    if let Some(path) = &config.output_path {
        write_outputs(path, &records, &summary)?;
    }
    if over_cap {
        return Err(cap_error());
    }
    Ok(ExperimentOutcome {
        records,
        distribution,
        summary,
    })
}

fn simulate_all(
    config: &ExperimentConfig,
    threads: Option<usize>,
) -> Result<Vec<TauSample>, HarnessError> {
    let one = |i: u64| {
        let mut rng = replicate_rng(config.base_seed, i);
        simulate_tau(
            config.n,
            config.mu,
            config.m as usize,
            config.budget,
            &mut rng,
        )
    };
    let samples = match threads {
        Some(1) => (0..config.replicates)
            .map(one)
            .collect::<Result<Vec<_>, _>>(),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| HarnessError::ThreadPool(e.to_string()))?;
            pool.install(|| {
                (0..config.replicates)
                    .into_par_iter()
                    .map(one)
                    .collect::<Result<Vec<_>, _>>()
            })
        }
        None => (0..config.replicates)
            .into_par_iter()
            .map(one)
            .collect::<Result<Vec<_>, _>>(),
    };
    Ok(samples?)
}
