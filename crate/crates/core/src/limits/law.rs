//! Limiting laws of the rescaled waiting time and their small-time power laws.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::quadrature::{adaptive_simpson, ABS_TOL, MAX_DEPTH};
use super::regime::{Regime, RegimeKind};
use super::series::lambda_j;
use super::special::{factorial, gamma_cdf, gamma_pdf};
use super::LimitsError;

/// A limiting distribution on `[0, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law")]
pub enum LimitLaw {
    /// Sum of `shape` independent unit exponentials.
    Gamma {
        shape: u32,
    },
    Exponential {
        rate: f64,
    },
    /// `Gamma(shape, 1) + Exp(rate)`, independent.
    HypoexpGammaPlusExp {
        shape: u32,
        rate: f64,
    },
    /// CDF `1 - exp(-t^power / power!)`.
    PowerExp {
        power: u32,
    },
    /// Survival `exp(-(A^{1+p 2^{-j}} / p!) int_0^t (t-s)^p tanh(s) ds)`, `p = m - j - 1`.
    QuadratureLaw {
        #[serde(rename = "A")]
        a: f64,
        m: u32,
        j: u32,
    },
}

impl LimitLaw {
    pub fn cdf(&self, t: f64) -> f64 {
        if t <= 0.0 || t.is_nan() {
            return 0.0;
        }
        let v = match *self {
            LimitLaw::Gamma { shape } => gamma_cdf(shape, t),
            LimitLaw::Exponential { rate } => -(-rate * t).exp_m1(),
            LimitLaw::HypoexpGammaPlusExp { shape, rate } => hypoexp_gamma_cdf(shape, rate, t),
            LimitLaw::PowerExp { power } => -(-t.powi(power as i32) / factorial(power)).exp_m1(),
            LimitLaw::QuadratureLaw { a, m, j } => 1.0 - bigmu_border_survival(a, m, j, t),
        };
        v.clamp(0.0, 1.0)
    }

    pub fn survival(&self, t: f64) -> f64 {
        match *self {
            LimitLaw::QuadratureLaw { a, m, j } if t > 0.0 => bigmu_border_survival(a, m, j, t),
            _ => 1.0 - self.cdf(t),
        }
    }
}

impl fmt::Display for LimitLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitLaw::Gamma { shape } => write!(f, "gamma:{shape}"),
            LimitLaw::Exponential { rate } => write!(f, "exp:{rate}"),
            LimitLaw::HypoexpGammaPlusExp { shape, rate } => write!(f, "hypoexp:{shape}:{rate}"),
            LimitLaw::PowerExp { power } => write!(f, "powerexp:{power}"),
            LimitLaw::QuadratureLaw { a, m, j } => write!(f, "quad:{a}:{m}:{j}"),
        }
    }
}

impl FromStr for LimitLaw {
    type Err = LimitsError;

    /// Parses the [`Display`](fmt::Display) form: `gamma:K`, `exp:RATE`,
    /// `hypoexp:K:RATE`, `powerexp:K`, `quad:A:M:J`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LimitsError::InvalidArgument(format!("cannot parse limit law `{s}`"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        let int = |p: &str| p.parse::<u32>().map_err(|_| bad());
        let real = |p: &str| {
            p.parse::<f64>()
                .ok()
                .filter(|v| *v > 0.0 && v.is_finite())
                .ok_or_else(bad)
        };
        let law = match parts.as_slice() {
            ["gamma", k] => LimitLaw::Gamma { shape: int(k)? },
            ["exp", r] => LimitLaw::Exponential { rate: real(r)? },
            ["hypoexp", k, r] => LimitLaw::HypoexpGammaPlusExp {
                shape: int(k)?,
                rate: real(r)?,
            },
            ["powerexp", k] => LimitLaw::PowerExp { power: int(k)? },
            ["quad", a, m, j] => {
                let (m, j) = (int(m)?, int(j)?);
                if j < 1 || j >= m {
                    return Err(bad());
                }
                LimitLaw::QuadratureLaw { a: real(a)?, m, j }
            }
            _ => return Err(bad()),
        };
        match law {
            LimitLaw::Gamma { shape: 0 } | LimitLaw::PowerExp { power: 0 } => Err(bad()),
            law => Ok(law),
        }
    }
}

/// CDF of `S_k + Y`, `S_k ~ Gamma(k, 1)` and `Y ~ Exp(lambda)` independent.
///
/// Evaluated as `int_0^t f_k(u) (1 - e^{-lambda (t-u)}) du` by adaptive
/// quadrature; `k = 0` is the plain exponential.
pub fn hypoexp_gamma_cdf(k: u32, lambda: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if k == 0 {
        return -(-lambda * t).exp_m1();
    }
    let integrand = |u: f64| gamma_pdf(k, u) * -(-lambda * (t - u)).exp_m1();
    adaptive_simpson(integrand, 0.0, t, ABS_TOL, MAX_DEPTH).clamp(0.0, 1.0)
}

/// Survival function of the fast-side border law for `(A, m, j)` at `t`.
///
/// `1 <= j <= m - 1`. The kernel `(1 - e^{-2s}) / (1 + e^{-2s})` is `tanh(s)`.
pub fn bigmu_border_survival(a: f64, m: u32, j: u32, t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    debug_assert!(j >= 1 && j < m);
    let p = m - j - 1;
    let coef = a.powf(1.0 + p as f64 * 0.5f64.powi(j as i32)) / factorial(p);
    let integral = adaptive_simpson(
        |s| (t - s).powi(p as i32) * s.tanh(),
        0.0,
        t,
        ABS_TOL,
        MAX_DEPTH,
    );
    (-coef * integral).exp()
}

/// Limiting law of `timescale * tau_m` in `regime`.
pub fn limit_law(regime: &Regime) -> Result<LimitLaw, LimitsError> {
    let m = regime.m;
    Ok(match regime.kind {
        RegimeKind::SmallMuGamma { j } => LimitLaw::Gamma { shape: m - j },
        RegimeKind::SmallMuExp => LimitLaw::Exponential { rate: 1.0 },
        RegimeKind::Border { j, a } => {
            let rate = lambda_j(a, j)?;
            match m - j {
                0 => LimitLaw::Exponential { rate },
                shape => LimitLaw::HypoexpGammaPlusExp { shape, rate },
            }
        }
        RegimeKind::BigMuInterior { j } => LimitLaw::PowerExp { power: m - j },
        RegimeKind::BigMuTop => LimitLaw::PowerExp { power: m },
        RegimeKind::BigMuBorder { j, a } => LimitLaw::QuadratureLaw { a, m, j },
    })
}

/// Leading small-`t` behaviour `P(timescale * tau_m <= t) ~ coefficient * t^power`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawAsymptote {
    pub power: u32,
    pub coefficient: f64,
    pub timescale: f64,
}

/// Small-`t` power law of the limit law. Border regimes are not covered.
pub fn small_t_asymptote(regime: &Regime) -> Result<PowerLawAsymptote, LimitsError> {
    let m = regime.m;
    let power = match regime.kind {
        RegimeKind::SmallMuGamma { j } | RegimeKind::BigMuInterior { j } => m - j,
        RegimeKind::SmallMuExp => 1,
        RegimeKind::BigMuTop => m,
        kind @ (RegimeKind::Border { .. } | RegimeKind::BigMuBorder { .. }) => {
            return Err(LimitsError::UnsupportedRegime(kind.label()))
        }
    };
    Ok(PowerLawAsymptote {
        power,
        coefficient: 1.0 / factorial(power),
        timescale: regime.timescale,
    })
}
