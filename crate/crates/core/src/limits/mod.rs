//! Analytic side: regimes, limit laws, `lambda_j`, branching probabilities
//! and the numerical tools behind them. Everything here is a pure function.

use thiserror::Error;

mod law;
pub mod quadrature;
mod regime;
mod series;
pub mod special;

pub use law::{
    bigmu_border_survival, hypoexp_gamma_cdf, limit_law, small_t_asymptote, LimitLaw,
    PowerLawAsymptote,
};
pub use regime::{
    classify_regime, fast_boundary_exponent, regime_sequence, slow_boundary_exponent, Regime,
    RegimeKind, DEFAULT_BAND,
};
pub use series::{lambda_j, p_asymptotic, p_recursion};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LimitsError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(
        "exponent {exponent:.6} lies inside several border bands ({candidates:?}); narrow the band"
    )]
    Unclassifiable {
        exponent: f64,
        candidates: Vec<String>,
    },
    #[error("lambda series overflows for A = {a}, j = {j}")]
    SeriesOverflow { a: f64, j: u32 },
    #[error("no small-time power law for border regime {0}")]
    UnsupportedRegime(String),
}
