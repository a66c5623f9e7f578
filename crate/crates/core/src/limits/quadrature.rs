//! Adaptive Simpson quadrature.

/// Absolute tolerance used by every quadrature in [`crate::limits`].
pub const ABS_TOL: f64 = 1e-10;
/// Maximum bisection depth per initial panel.
pub const MAX_DEPTH: u32 = 40;

// The interval is first cut into this many panels so that a feature narrower
// than the whole range cannot hide between the first five samples.
const INITIAL_PANELS: usize = 16;

/// Integral of `f` over `[a, b]` to absolute tolerance `abs_tol`.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, abs_tol: f64, max_depth: u32) -> f64
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return 0.0;
    }
    let width = (b - a) / INITIAL_PANELS as f64;
    let eps = abs_tol / INITIAL_PANELS as f64;
    let mut total = 0.0;
    let mut lo = a;
    let mut f_lo = f(lo);
    for i in 1..=INITIAL_PANELS {
        let hi = if i == INITIAL_PANELS {
            b
        } else {
            a + width * i as f64
        };
        let mid = 0.5 * (lo + hi);
        let (f_mid, f_hi) = (f(mid), f(hi));
        let whole = (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi);
        total += refine(&f, lo, hi, f_lo, f_mid, f_hi, whole, eps, max_depth);
        lo = hi;
        f_lo = f_hi;
    }
    total
}

#[allow(clippy::too_many_arguments)]
fn refine<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64
where
    F: Fn(f64) -> f64,
{
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    refine(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)
        + refine(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let v = adaptive_simpson(|x| x * x * x - 2.0 * x, 0.0, 3.0, ABS_TOL, MAX_DEPTH);
        assert!((v - (81.0 / 4.0 - 9.0)).abs() < 1e-12);
    }

    #[test]
    fn smooth_integrands() {
        let v = adaptive_simpson(f64::sin, 0.0, std::f64::consts::PI, ABS_TOL, MAX_DEPTH);
        assert!((v - 2.0).abs() < 1e-10);
        let v = adaptive_simpson(|x| (-x).exp(), 0.0, 40.0, ABS_TOL, MAX_DEPTH);
        assert!((v - (1.0 - (-40.0f64).exp())).abs() < 1e-10);
        let v = adaptive_simpson(f64::tanh, 0.0, 3.0, ABS_TOL, MAX_DEPTH);
        assert!((v - 3.0f64.cosh().ln()).abs() < 1e-10);
    }

    #[test]
    fn empty_and_reversed_intervals() {
        assert_eq!(adaptive_simpson(|x| x, 1.0, 1.0, ABS_TOL, MAX_DEPTH), 0.0);
        let v = adaptive_simpson(|x| x, 1.0, 0.0, ABS_TOL, MAX_DEPTH);
        assert!((v + 0.5).abs() < 1e-14);
    }

    #[test]
    fn narrow_step_is_resolved() {
        // Step of width ~1e-4 at the right end of a long interval.
        let v = adaptive_simpson(
            |x| 1.0 - (-1e4 * (10.0 - x)).exp(),
            0.0,
            10.0,
            ABS_TOL,
            MAX_DEPTH,
        );
        assert!((v - (10.0 - 1e-4 * (1.0 - (-1e5f64).exp()))).abs() < 1e-9);
    }
}
