//! Exact continuous-time simulation of the Moran model with `m` mutation levels.
//!
//! Each individual dies at rate one and is replaced by the offspring of a
//! uniformly chosen parent, and independently mutates from type `j` to type
//! `j + 1` at rate `mu`. Individuals are exchangeable, so the state is the
//! vector of type counts rather than `N` labelled individuals.
//!
//! Replacements where parent and victim share a type change nothing and are
//! not part of the event space. The remaining replacement `parent j -> victim k`
//! fires at rate `X_j X_k / N`. A homogeneous population therefore only sees
//! mutations, at total rate `N mu`, and a long quiet stretch costs one
//! exponential draw.

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("state is absorbed: {0} individual(s) already carry the top type")]
    AbsorbedState(u64),
    #[error("simulation stalled at t = {clock}: total event rate is zero")]
    Stalled { clock: f64 },
}

/// Lumped state of the population: `counts[j]` is the number of type-`j`
/// individuals, `j = 0..=m`.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationState {
    counts: Vec<u64>,
    n: u64,
    clock: f64,
}

/// Population of `n` type-0 individuals at time zero.
pub fn new_population(n: u64, m: usize) -> Result<PopulationState, ModelError> {
    PopulationState::new(n, m)
}

impl PopulationState {
    pub fn new(n: u64, m: usize) -> Result<Self, ModelError> {
        if n < 2 {
            return Err(ModelError::InvalidArgument(format!(
                "population size must be at least 2, got {n}"
            )));
        }
        if m < 1 {
            return Err(ModelError::InvalidArgument(
                "number of mutation levels must be at least 1".into(),
            ));
        }
        let mut counts = vec![0; m + 1];
        counts[0] = n;
        Ok(Self {
            counts,
            n,
            clock: 0.0,
        })
    }

    /// State with explicit counts at time zero. The population size is the sum.
    pub fn from_counts(counts: Vec<u64>) -> Result<Self, ModelError> {
        if counts.len() < 2 {
            return Err(ModelError::InvalidArgument(
                "need at least two type levels".into(),
            ));
        }
        let n: u64 = counts.iter().sum();
        if n < 2 {
            return Err(ModelError::InvalidArgument(format!(
                "population size must be at least 2, got {n}"
            )));
        }
        Ok(Self {
            counts,
            n,
            clock: 0.0,
        })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Highest type level tracked.
    pub fn m(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn clock(&self) -> f64 {
        self.clock
    }

    pub fn is_absorbed(&self) -> bool {
        self.counts[self.m()] > 0
    }

    /// Lowest type present. Non-decreasing in time because no event creates a
    /// type below every type already present.
    pub fn lowest_type(&self) -> usize {
        self.counts.iter().position(|&c| c > 0).unwrap_or(0)
    }

    fn sum_of_squares(&self) -> u64 {
        self.counts.iter().map(|&c| c * c).sum()
    }

    fn apply(&mut self, transition: &Transition) {
        match transition.kind {
            EventKind::Replacement { parent, victim } => {
                self.counts[victim] -= 1;
                self.counts[parent] += 1;
            }
            EventKind::Mutation { from } => {
                self.counts[from] -= 1;
                self.counts[from + 1] += 1;
            }
        }
        self.clock += transition.dt;
        debug_assert_eq!(self.counts.iter().sum::<u64>(), self.n);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReplacementRate {
    pub parent: usize,
    pub victim: usize,
    pub rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MutationRate {
    pub from: usize,
    pub rate: f64,
}

/// Every effective transition out of a state with its rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateTable {
    pub replacements: Vec<ReplacementRate>,
    pub mutations: Vec<MutationRate>,
    pub total_rate: f64,
}

/// Rates of all effective transitions. Zero-rate entries are omitted.
pub fn effective_rates(state: &PopulationState, mu: f64) -> RateTable {
    let n = state.n as f64;
    let m = state.m();
    let mut replacements = Vec::new();
    for (parent, &cp) in state.counts.iter().enumerate() {
        for (victim, &cv) in state.counts.iter().enumerate() {
            if parent != victim && cp > 0 && cv > 0 {
                replacements.push(ReplacementRate {
                    parent,
                    victim,
                    rate: cp as f64 * cv as f64 / n,
                });
            }
        }
    }
    let mutations: Vec<MutationRate> = state.counts[..m]
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0 && mu > 0.0)
        .map(|(from, &c)| MutationRate {
            from,
            rate: mu * c as f64,
        })
        .collect();
    let total_rate = replacements.iter().map(|r| r.rate).sum::<f64>()
        + mutations.iter().map(|r| r.rate).sum::<f64>();
    RateTable {
        replacements,
        mutations,
        total_rate,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EventKind {
    /// A `victim`-type individual dies and is replaced by offspring of a
    /// `parent`-type individual.
    Replacement { parent: usize, victim: usize },
    /// A type-`from` individual becomes type `from + 1`.
    Mutation { from: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub kind: EventKind,
    pub dt: f64,
}

/// Draws the next transition without applying it. `None` when no event is
/// possible. Only types `first_mutable..m` mutate; the top level never does.
fn propose<R: Rng + ?Sized>(
    state: &PopulationState,
    mu: f64,
    first_mutable: usize,
    rng: &mut R,
) -> Option<Transition> {
    let n = state.n;
    let m = state.m();
    let mutable: u64 = state.counts[first_mutable..m].iter().sum();
    let mutation_rate = mu * mutable as f64;
    // Sum over parents of X_j (N - X_j); the replacement rate is this over N.
    let replacement_weight = n * n - state.sum_of_squares();
    let replacement_rate = replacement_weight as f64 / n as f64;
    let total = mutation_rate + replacement_rate;
    if total <= 0.0 {
        return None;
    }
    let e: f64 = Exp1.sample(rng);
    let dt = e / total;

    let kind = if replacement_weight == 0 || rng.random::<f64>() * total < mutation_rate {
        let mut pick = rng.random_range(0..mutable);
        let mut from = first_mutable;
        while pick >= state.counts[from] {
            pick -= state.counts[from];
            from += 1;
        }
        EventKind::Mutation { from }
    } else {
        let mut pick = rng.random_range(0..replacement_weight);
        let mut parent = 0;
        loop {
            let c = state.counts[parent];
            let w = c * (n - c);
            if pick < w {
                break;
            }
            pick -= w;
            parent += 1;
        }
        let mut pick = rng.random_range(0..n - state.counts[parent]);
        let mut victim = 0;
        loop {
            if victim != parent {
                let c = state.counts[victim];
                if pick < c {
                    break;
                }
                pick -= c;
            }
            victim += 1;
        }
        EventKind::Replacement { parent, victim }
    };
    Some(Transition { kind, dt })
}

/// Executes one effective transition in place.
///
/// Returns `Ok(None)` when the total rate is zero (only possible with
/// `mu == 0` in a homogeneous population); the caller decides whether that is
/// a stall.
pub fn step<R: Rng + ?Sized>(
    state: &mut PopulationState,
    mu: f64,
    rng: &mut R,
) -> Result<Option<Transition>, ModelError> {
    if state.is_absorbed() {
        return Err(ModelError::AbsorbedState(state.counts[state.m()]));
    }
    let transition = propose(state, mu, 0, rng);
    if let Some(t) = &transition {
        state.apply(t);
    }
    Ok(transition)
}

/// Caps on a single replicate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimBudget {
    pub max_events: u64,
    pub max_time: f64,
}

impl SimBudget {
    pub fn new(max_events: u64, max_time: f64) -> Result<Self, ModelError> {
        if max_events == 0 || max_time.is_nan() || max_time <= 0.0 {
            return Err(ModelError::InvalidArgument(format!(
                "budget caps must be positive (events {max_events}, time {max_time})"
            )));
        }
        Ok(Self {
            max_events,
            max_time,
        })
    }
}

impl Default for SimBudget {
    fn default() -> Self {
        Self {
            max_events: 10_000_000_000,
            max_time: f64::INFINITY,
        }
    }
}

/// Outcome of one replicate of [`simulate_tau`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauSample {
    /// First time a type-`m` individual exists. A lower bound when `truncated`.
    pub tau: f64,
    /// Effective transitions executed.
    pub events: u64,
    /// Number of levels `j >= 1` whose types `>= j` filled the population.
    pub fixations: u32,
    pub truncated: bool,
}

fn check_params(n: u64, mu: f64, m: usize) -> Result<(), ModelError> {
    if n < 2 || m < 1 {
        return Err(ModelError::InvalidArgument(format!(
            "need n >= 2 and m >= 1, got n = {n}, m = {m}"
        )));
    }
    if !(mu.is_finite() && mu >= 0.0) {
        return Err(ModelError::InvalidArgument(format!(
            "mutation rate must be finite and non-negative, got {mu}"
        )));
    }
    Ok(())
}

/// Simulates one population from all-type-0 until the first type-`m`
/// individual appears or the budget runs out.
pub fn simulate_tau<R: Rng + ?Sized>(
    n: u64,
    mu: f64,
    m: usize,
    budget: SimBudget,
    rng: &mut R,
) -> Result<TauSample, ModelError> {
    check_params(n, mu, m)?;
    let mut state = PopulationState::new(n, m)?;
    let mut events = 0u64;
    let mut truncated = false;
    while !state.is_absorbed() {
        if events >= budget.max_events {
            truncated = true;
            break;
        }
        let Some(t) = propose(&state, mu, 0, rng) else {
            return Err(ModelError::Stalled { clock: state.clock });
        };
        if state.clock + t.dt > budget.max_time {
            state.clock = budget.max_time;
            truncated = true;
            break;
        }
        state.apply(&t);
        events += 1;
    }
    Ok(TauSample {
        tau: state.clock,
        events,
        fixations: state.lowest_type() as u32,
        truncated,
    })
}

/// Fate of a single mutant lineage in [`simulate_single_mutant`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LineageOutcome {
    /// A type-`m` individual appeared.
    TopTypeBorn,
    /// Every individual of type `>= 1` was lost.
    Lost,
    Truncated,
}

/// One type-1 individual among `n - 1` type-0 individuals; type 0 never
/// mutates. Runs until type `m` appears, the mutant lineage dies out, or the
/// budget runs out.
pub fn simulate_single_mutant<R: Rng + ?Sized>(
    n: u64,
    mu: f64,
    m: usize,
    budget: SimBudget,
    rng: &mut R,
) -> Result<LineageOutcome, ModelError> {
    check_params(n, mu, m)?;
    let mut counts = vec![0; m + 1];
    counts[0] = n - 1;
    counts[1] = 1;
    let mut state = PopulationState::from_counts(counts)?;
    let mut events = 0u64;
    while !state.is_absorbed() {
        if state.counts[0] == n {
            return Ok(LineageOutcome::Lost);
        }
        if events >= budget.max_events {
            return Ok(LineageOutcome::Truncated);
        }
        let Some(t) = propose(&state, mu, 1, rng) else {
            return Err(ModelError::Stalled { clock: state.clock });
        };
        if state.clock + t.dt > budget.max_time {
            return Ok(LineageOutcome::Truncated);
        }
        state.apply(&t);
        events += 1;
    }
    Ok(LineageOutcome::TopTypeBorn)
}

/// Result of [`simulate_two_type_occupation`].
#[derive(Debug, Clone, PartialEq)]
pub struct OccupationRun {
    pub absorb_time: f64,
    /// `occupation[k]` is the total time spent with exactly `k` mutants,
    /// `k = 0..=n` (the end points stay zero).
    pub occupation: Vec<f64>,
    pub fixated: bool,
}

/// Pure replacement dynamics of one mutant among `n - 1` wild types, run until
/// the mutant is lost or fixed.
pub fn simulate_two_type_occupation<R: Rng + ?Sized>(
    n: u64,
    rng: &mut R,
) -> Result<OccupationRun, ModelError> {
    if n < 2 {
        return Err(ModelError::InvalidArgument(format!(
            "population size must be at least 2, got {n}"
        )));
    }
    let mut occupation = vec![0.0; n as usize + 1];
    let nf = n as f64;
    let mut x = 1u64;
    let mut clock = 0.0;
    while x > 0 && x < n {
        // Up and down moves each fire at rate x (n - x) / n.
        let rate = 2.0 * (x as f64) * ((n - x) as f64) / nf;
        let e: f64 = Exp1.sample(rng);
        let dt = e / rate;
        occupation[x as usize] += dt;
        clock += dt;
        if rng.random::<bool>() {
            x += 1;
        } else {
            x -= 1;
        }
    }
    Ok(OccupationRun {
        absorb_time: clock,
        occupation,
        fixated: x == n,
    })
}

/// Type counts of one replicate sampled at the `grid` times.
///
/// Unlike [`simulate_tau`] the run continues past the first type-`m`
/// individual. Type `m` lumps every type at or above `m` (mutation out of it is
/// disabled), so for `k <= m` the count of individuals of type `k` or higher is
/// the same as in the unbounded model.
pub fn observe_trajectory<R: Rng + ?Sized>(
    n: u64,
    mu: f64,
    m: usize,
    horizon: f64,
    grid: &[f64],
    rng: &mut R,
) -> Result<Vec<Vec<u64>>, ModelError> {
    check_params(n, mu, m)?;
    if horizon.is_nan() || horizon < 0.0 {
        return Err(ModelError::InvalidArgument(format!(
            "horizon must be non-negative, got {horizon}"
        )));
    }
    if grid.iter().any(|&t| !(0.0..=horizon).contains(&t)) || grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(ModelError::InvalidArgument(
            "grid must be sorted and inside [0, horizon]".into(),
        ));
    }
    let mut state = PopulationState::new(n, m)?;
    let mut rows = Vec::with_capacity(grid.len());
    let mut next = 0;
    while next < grid.len() {
        match propose(&state, mu, 0, rng) {
            Some(t) => {
                let jump_at = state.clock + t.dt;
                while next < grid.len() && grid[next] < jump_at {
                    rows.push(state.counts.clone());
                    next += 1;
                }
                state.apply(&t);
            }
            None => {
                rows.extend(std::iter::repeat_n(state.counts.clone(), grid.len() - next));
                next = grid.len();
            }
        }
    }
    Ok(rows)
}
