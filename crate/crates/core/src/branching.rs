//! Critical birth-death branching processes used as independent oracles.
//!
//! Every individual gives birth at rate 1 and dies at rate 1. These
//! simulators share no code with [`crate::model`] beyond the RNG type.

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::limits::{p_recursion, special::factorial};
use crate::model::SimBudget;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BranchingError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Default event cap per [`simulate_q`] replicate.
pub const DEFAULT_Q_EVENTS: u64 = 10_000_000;

/// Per-type counts of a multitype linear birth-death process.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchingState {
    counts: Vec<u64>,
}

impl BranchingState {
    /// A single individual of the lowest type, with `levels` types tracked.
    pub fn single(levels: usize) -> Self {
        let mut counts = vec![0; levels.max(1)];
        counts[0] = 1;
        Self { counts }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn is_extinct(&self) -> bool {
        self.total() == 0
    }

    /// Index of the `pick`-th individual's type, `pick < total`.
    fn type_of(&self, mut pick: u64) -> usize {
        let mut i = 0;
        while pick >= self.counts[i] {
            pick -= self.counts[i];
            i += 1;
        }
        i
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QOutcome {
    TypeMBorn,
    Extinct,
    Truncated,
}

/// Whether the process started from one type-1 individual ever produces a
/// type-`m` individual.
///
/// Types `1..m` each branch at rates 1/1 and convert to the next type at rate
/// `mu`. Only the order of events matters, so the embedded jump chain is run
/// and no clock is kept; `budget.max_time` is ignored.
pub fn simulate_q<R: Rng + ?Sized>(
    m: u32,
    mu: f64,
    budget: SimBudget,
    rng: &mut R,
) -> Result<QOutcome, BranchingError> {
    if m < 2 {
        return Err(BranchingError::InvalidArgument(format!(
            "simulate_q needs m >= 2, got {m}"
        )));
    }
    if !(mu.is_finite() && mu >= 0.0) {
        return Err(BranchingError::InvalidArgument(format!(
            "mutation rate must be finite and non-negative, got {mu}"
        )));
    }
    // counts[i] holds type i + 1.
    let mut state = BranchingState::single(m as usize - 1);
    let mut total = 1u64;
    let p_mutate = mu / (2.0 + mu);
    let mut events = 0u64;
    while total > 0 {
        if events >= budget.max_events {
            return Ok(QOutcome::Truncated);
        }
        events += 1;
        let i = if state.counts.len() == 1 {
            0
        } else {
            state.type_of(rng.random_range(0..total))
        };
        let u: f64 = rng.random();
        if u < p_mutate {
            if i + 1 == state.counts.len() {
                return Ok(QOutcome::TypeMBorn);
            }
            state.counts[i] -= 1;
            state.counts[i + 1] += 1;
        } else if u < p_mutate + (1.0 - p_mutate) * 0.5 {
            state.counts[i] += 1;
            total += 1;
        } else {
            state.counts[i] -= 1;
            total -= 1;
        }
    }
    debug_assert!(state.is_extinct());
    Ok(QOutcome::Extinct)
}

/// Whether a critical birth-death process from one individual, whose members
/// each produce a type-2 individual at rate `r`, does so by `horizon`.
pub fn simulate_two_type_mutation<R: Rng + ?Sized>(r: f64, horizon: f64, rng: &mut R) -> bool {
    lineage_succeeds(r, horizon, rng)
}

// Critical birth-death lineage from one individual, each member hitting
// success at rate `rate`; true iff a success occurs within `window`.
fn lineage_succeeds<R: Rng + ?Sized>(rate: f64, window: f64, rng: &mut R) -> bool {
    if !(window > 0.0 && rate > 0.0) {
        return false;
    }
    let per_capita = 2.0 + rate;
    let p_success = rate / per_capita;
    let mut k = 1u64;
    let mut clock = 0.0;
    while k > 0 {
        let e: f64 = Exp1.sample(rng);
        clock += e / (k as f64 * per_capita);
        if clock > window {
            return false;
        }
        let u: f64 = rng.random();
        if u < p_success {
            return true;
        }
        if u < p_success + (1.0 - p_success) * 0.5 {
            k += 1;
        } else {
            k -= 1;
        }
    }
    false
}

/// Outcome of [`simulate_model5_detailed`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Model5Run {
    pub success: bool,
    /// Immigrants arrived by the horizon, counted even after a success.
    pub immigrants: u64,
}

/// Immigration intensity `N mu^k s^{k-1} / (k-1)!` with `k = m - j`.
pub fn model5_immigration_rate(n: u64, mu: f64, m: u32, j: u32, s: f64) -> f64 {
    let k = (m - j) as i32;
    n as f64 * mu.powi(k) * s.powi(k - 1) / factorial((k - 1) as u32)
}

/// Whether the two-type branching process with immigration reaches success by
/// `horizon`. See [`simulate_model5_detailed`].
pub fn simulate_model5<R: Rng + ?Sized>(
    n: u64,
    mu: f64,
    m: u32,
    j: u32,
    horizon: f64,
    rng: &mut R,
) -> Result<bool, BranchingError> {
    simulate_model5_detailed(n, mu, m, j, horizon, rng).map(|r| r.success)
}

/// Immigrants arrive as a Poisson process with intensity
/// [`model5_immigration_rate`]; each founds a critical birth-death lineage
/// whose members reach success at rate `mu p_j`.
///
/// Arrivals are drawn by thinning against the intensity at `horizon`, which
/// bounds it since the intensity is non-decreasing. Lineages are independent,
/// so they are run one after another.
pub fn simulate_model5_detailed<R: Rng + ?Sized>(
    n: u64,
    mu: f64,
    m: u32,
    j: u32,
    horizon: f64,
    rng: &mut R,
) -> Result<Model5Run, BranchingError> {
    if j < 1 || j >= m {
        return Err(BranchingError::InvalidArgument(format!(
            "need 1 <= j <= m - 1, got j = {j}, m = {m}"
        )));
    }
    if !(mu.is_finite() && mu >= 0.0 && horizon >= 0.0) {
        return Err(BranchingError::InvalidArgument(format!(
            "need finite mu >= 0 and horizon >= 0, got mu = {mu}, horizon = {horizon}"
        )));
    }
    let mut run = Model5Run {
        success: false,
        immigrants: 0,
    };
    if mu == 0.0 || horizon == 0.0 {
        return Ok(run);
    }
    let conversion =
        mu * p_recursion(mu, j).map_err(|e| BranchingError::InvalidArgument(e.to_string()))?;
    let envelope = model5_immigration_rate(n, mu, m, j, horizon);
    if envelope <= 0.0 {
        return Ok(run);
    }
    let constant = m - j == 1;
    let mut s = 0.0;
    loop {
        let e: f64 = Exp1.sample(rng);
        s += e / envelope;
        if s > horizon {
            return Ok(run);
        }
        if !constant {
            let accept = model5_immigration_rate(n, mu, m, j, s) / envelope;
            if rng.random::<f64>() >= accept {
                continue;
            }
        }
        run.immigrants += 1;
        if !run.success && lineage_succeeds(conversion, horizon - s, rng) {
            run.success = true;
        }
    }
}
