//! Classification of `(N, mu, m)` into the asymptotic regimes of `tau_m`.
//!
//! Writing `mu = N^e`, the regimes are separated by `2m - 2` boundary
//! exponents. On the slow side, `-2^{j-1} / (2^{j-1} - 1)` for `j = 2..=m`
//! (fixation competes with `j` mutations without fixation). On the fast side,
//! `-1 / (1 + (m-j-1) 2^{-j})` for `j = m-1` down to `1`, ending at `-2/m`.
//! Each boundary is a regime of its own, with a constant `A = mu N^{-b}`, and
//! so is each open interval between them: `4m - 3` regimes in total.
//!
//! A finite `(N, mu)` is placed on a boundary when `|ln(mu / N^b)| <= band`.

use serde::{Deserialize, Serialize};

use super::LimitsError;

/// Default half-width of a border, in natural-log units of `mu / N^b`.
pub const DEFAULT_BAND: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum RegimeKind {
    /// `mu tau_m -> Gamma(m - j)`. `j = 1` is the `mu << N^{-2}` case.
    SmallMuGamma { j: u32 },
    /// `N mu^{2 - 2^{-(m-1)}} tau_m -> Exp(1)`.
    SmallMuExp,
    /// `mu ~ A N^{-2^{j-1}/(2^{j-1}-1)}`: `mu tau_m -> Gamma(m - j) + Exp(lambda_j)`.
    Border {
        j: u32,
        #[serde(rename = "A")]
        a: f64,
    },
    /// Deterministic type-`(m-j-1)` counts, power-exponential law of order `m - j`.
    BigMuInterior { j: u32 },
    /// `mu ~ A N^{-1/(1+(m-j-1)2^{-j})}`: integral law.
    BigMuBorder {
        j: u32,
        #[serde(rename = "A")]
        a: f64,
    },
    /// `mu >> N^{-2/m}`: `1 - exp(-t^m / m!)`.
    BigMuTop,
}

impl RegimeKind {
    pub fn name(&self) -> &'static str {
        match self {
            RegimeKind::SmallMuGamma { .. } => "SmallMuGamma",
            RegimeKind::SmallMuExp => "SmallMuExp",
            RegimeKind::Border { .. } => "Border",
            RegimeKind::BigMuInterior { .. } => "BigMuInterior",
            RegimeKind::BigMuBorder { .. } => "BigMuBorder",
            RegimeKind::BigMuTop => "BigMuTop",
        }
    }

    pub fn j(&self) -> Option<u32> {
        match *self {
            RegimeKind::SmallMuGamma { j }
            | RegimeKind::Border { j, .. }
            | RegimeKind::BigMuInterior { j }
            | RegimeKind::BigMuBorder { j, .. } => Some(j),
            RegimeKind::SmallMuExp | RegimeKind::BigMuTop => None,
        }
    }

    /// Border constant `A`, for the two border kinds.
    pub fn border_constant(&self) -> Option<f64> {
        match *self {
            RegimeKind::Border { a, .. } | RegimeKind::BigMuBorder { a, .. } => Some(a),
            _ => None,
        }
    }

    pub fn is_border(&self) -> bool {
        self.border_constant().is_some()
    }

    /// Identity of the regime without its constant, e.g. `"Border(3)"`.
    pub fn label(&self) -> String {
        match self.j() {
            Some(j) => format!("{}({j})", self.name()),
            None => self.name().to_string(),
        }
    }
}

/// A classified parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Regime {
    #[serde(flatten)]
    pub kind: RegimeKind,
    pub m: u32,
    pub n: f64,
    pub mu: f64,
    /// `ln(mu) / ln(N)`.
    pub exponent: f64,
    pub band: f64,
    /// Factor `c(N, mu)` such that `c tau_m` converges in law.
    pub timescale: f64,
}

#[derive(Debug, Clone, Copy)]
struct Boundary {
    exponent: f64,
    /// `true` for the slow-side borders, `false` for the fast-side ones.
    slow: bool,
    j: u32,
}

/// Slow-side boundary exponent `-2^{j-1} / (2^{j-1} - 1)`, `j >= 2`.
pub fn slow_boundary_exponent(j: u32) -> f64 {
    let p = 2f64.powi(j as i32 - 1);
    -p / (p - 1.0)
}

/// Fast-side boundary exponent `-1 / (1 + (m-j-1) 2^{-j})`, `1 <= j <= m-1`.
pub fn fast_boundary_exponent(m: u32, j: u32) -> f64 {
    -1.0 / (1.0 + (m - j - 1) as f64 * 0.5f64.powi(j as i32))
}

// Boundaries in increasing exponent order.
fn boundaries(m: u32) -> Vec<Boundary> {
    let mut out = Vec::with_capacity(2 * m as usize);
    for j in 2..=m {
        out.push(Boundary {
            exponent: slow_boundary_exponent(j),
            slow: true,
            j,
        });
    }
    for j in (1..m).rev() {
        out.push(Boundary {
            exponent: fast_boundary_exponent(m, j),
            slow: false,
            j,
        });
    }
    out
}

// Open intervals in the same order: interiors[i] lies just below boundaries[i].
fn interiors(m: u32) -> Vec<RegimeKind> {
    if m == 1 {
        return vec![RegimeKind::SmallMuExp];
    }
    let mut out = Vec::with_capacity(2 * m as usize);
    out.push(RegimeKind::SmallMuGamma { j: 1 });
    out.extend((2..m).map(|j| RegimeKind::SmallMuGamma { j }));
    out.push(RegimeKind::SmallMuExp);
    out.extend((1..m - 1).rev().map(|j| RegimeKind::BigMuInterior { j }));
    out.push(RegimeKind::BigMuTop);
    out
}

/// Ordered list of every regime for `m`, with borders at `A = 1`.
pub fn regime_sequence(m: u32) -> Vec<RegimeKind> {
    let bs = boundaries(m);
    let is = interiors(m);
    let mut out = Vec::with_capacity(bs.len() + is.len());
    for (i, interior) in is.iter().enumerate() {
        out.push(*interior);
        if let Some(b) = bs.get(i) {
            out.push(border_kind(b, 1.0));
        }
    }
    out
}

fn border_kind(b: &Boundary, a: f64) -> RegimeKind {
    if b.slow {
        RegimeKind::Border { j: b.j, a }
    } else {
        RegimeKind::BigMuBorder { j: b.j, a }
    }
}

fn ln_timescale(kind: &RegimeKind, m: u32, ln_n: f64, ln_mu: f64) -> f64 {
    let mf = m as f64;
    match *kind {
        RegimeKind::SmallMuGamma { .. } | RegimeKind::Border { .. } => ln_mu,
        RegimeKind::SmallMuExp => ln_n + (2.0 - 0.5f64.powi(m as i32 - 1)) * ln_mu,
        RegimeKind::BigMuInterior { j } => {
            let d = (m - j) as f64;
            ln_n / d + (1.0 + (1.0 - 0.5f64.powi(j as i32)) / d) * ln_mu
        }
        RegimeKind::BigMuBorder { j, .. } => (1.0 - 0.5f64.powi(j as i32)) * ln_mu,
        RegimeKind::BigMuTop => ln_n / mf + ln_mu,
    }
}

/// Places `(n, mu, m)` in its asymptotic regime.
///
/// `band` is the half-width, in natural-log units, within which `mu / N^b`
/// counts as a border constant for boundary exponent `b`. `m = 1` has a single
/// regime, `SmallMuExp` with timescale `N mu`, where the law is exact.
pub fn classify_regime(n: f64, mu: f64, m: u32, band: f64) -> Result<Regime, LimitsError> {
    if !(n >= 2.0 && n.is_finite()) {
        return Err(LimitsError::InvalidArgument(format!(
            "population size must be at least 2, got {n}"
        )));
    }
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(LimitsError::InvalidArgument(format!(
            "mutation rate must be positive, got {mu}"
        )));
    }
    if m < 1 {
        return Err(LimitsError::InvalidArgument("m must be at least 1".into()));
    }
    if !(band > 0.0 && band < 1.0) {
        return Err(LimitsError::InvalidArgument(format!(
            "band must lie in (0, 1), got {band}"
        )));
    }
    let (ln_n, ln_mu) = (n.ln(), mu.ln());
    let exponent = ln_mu / ln_n;
    let bs = boundaries(m);

    let hits: Vec<&Boundary> = bs
        .iter()
        .filter(|b| (ln_mu - b.exponent * ln_n).abs() <= band)
        .collect();
    let kind = match hits.as_slice() {
        [] => {
            let idx = bs.iter().take_while(|b| exponent > b.exponent).count();
            interiors(m)[idx]
        }
        [b] => border_kind(b, (ln_mu - b.exponent * ln_n).exp()),
        _ => {
            return Err(LimitsError::Unclassifiable {
                exponent,
                candidates: hits.iter().map(|b| border_kind(b, 1.0).label()).collect(),
            })
        }
    };
    Ok(Regime {
        kind,
        m,
        n,
        mu,
        exponent,
        band,
        timescale: ln_timescale(&kind, m, ln_n, ln_mu).exp(),
    })
}
