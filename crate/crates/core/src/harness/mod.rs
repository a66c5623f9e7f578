//! Seeded Monte Carlo experiments over [`crate::model::simulate_tau`].
//!
//! Replicate `i` always draws from `replicate_rng(base_seed, i)` and results
//! are reduced in index order, so output does not depend on the thread count.

use thiserror::Error;

use crate::limits::LimitsError;
use crate::model::ModelError;

mod config;
mod output;
mod run;
mod stats;

pub use crate::rng::seed_for_replicate;
pub use config::{ExperimentConfig, Scale, DEFAULT_TRUNCATION_CAP};
pub use output::{format_csv, summary_path, write_csv, write_outputs, CSV_HEADER};
pub use run::{
    run_experiment, run_experiment_with, ExperimentOutcome, QuantileEntry, RegimeReport,
    ReplicateRecord, Summary, QUANTILE_LEVELS,
};
pub use stats::{dkw_bound, ecdf, ks_distance, EmpiricalDistribution};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Limits(#[from] LimitsError),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("{truncated} of {replicates} replicates truncated, above the cap of {cap}")]
    TruncationCap {
        truncated: u64,
        replicates: u64,
        cap: f64,
    },
    #[error("no untruncated samples")]
    EmptySample,
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
