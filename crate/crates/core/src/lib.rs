//! Waiting times for an individual to accumulate `m` neutral mutations in a
//! Moran population of fixed size `N`.
//!
//! The crate has four layers:
//!
//! * [`model`] simulates the Moran model exactly on the lumped type-count
//!   state and reports the waiting time `tau_m` together with trajectory
//!   observables.
//! * [`limits`] evaluates the limiting laws of the rescaled waiting time,
//!   classifies `(N, mu, m)` into one of the `4m - 3` asymptotic regimes and
//!   reports small-time power laws.
//! * [`branching`] holds independent branching-process simulators used to
//!   cross-check the Moran simulator and the analytic limits.
//! * [`harness`] runs seeded Monte Carlo experiments, builds empirical
//!   distributions and goodness-of-fit statistics, and serializes results.

pub mod branching;
pub mod harness;
pub mod limits;
pub mod model;
pub mod rng;

pub use harness::{run_experiment, ExperimentConfig};
pub use limits::{classify_regime, limit_law, LimitLaw, Regime, RegimeKind};
pub use model::{simulate_tau, PopulationState, SimBudget, TauSample};
