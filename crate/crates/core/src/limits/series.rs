//! The borderline exponential rate `lambda_j` and the branching success
//! probabilities `p_j`.

use super::LimitsError;

const REL_TRUNCATION: f64 = 1e-15;

/// Rate of the extra exponential in the borderline law at `mu ~ A N^{-b_j}`.
///
/// With `B = A^{2(1 - 2^{-(j-1)})}` this is
/// `sum_{k>=1} B^k / ((k-1)!)^2` over `sum_{k>=1} B^k / (k! (k-1)!)`.
/// Both series are summed with term recurrences (dividing out the common
/// leading `B`) until the next term drops below `1e-15` of its running sum.
pub fn lambda_j(a: f64, j: u32) -> Result<f64, LimitsError> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(LimitsError::InvalidArgument(format!(
            "border constant must be positive and finite, got {a}"
        )));
    }
    if j < 2 {
        return Err(LimitsError::InvalidArgument(format!(
            "lambda_j needs j >= 2, got {j}"
        )));
    }
    let b = a.powf(2.0 * (1.0 - 0.5f64.powi(j as i32 - 1)));
    // num_k = B^(k-1) / ((k-1)!)^2, den_k = B^(k-1) / (k! (k-1)!).
    let (mut num_term, mut den_term) = (1.0f64, 1.0f64);
    let (mut num, mut den) = (1.0f64, 1.0f64);
    let mut k = 1.0f64;
    loop {
        num_term *= b / (k * k);
        den_term *= b / ((k + 1.0) * k);
        if !(num_term.is_finite() && den_term.is_finite()) {
            return Err(LimitsError::SeriesOverflow { a, j });
        }
        let num_done = num_term < REL_TRUNCATION * num;
        let den_done = den_term < REL_TRUNCATION * den;
        num += num_term;
        den += den_term;
        if !(num.is_finite() && den.is_finite()) {
            return Err(LimitsError::SeriesOverflow { a, j });
        }
        if num_done && den_done {
            break;
        }
        k += 1.0;
    }
    Ok(num / den)
}

/// Probability that a critical birth-death process started from one type-1
/// individual, with type `i -> i + 1` mutation at rate `mu`, ever produces a
/// type-`j` individual.
///
/// Iterates the positive root of `p_j^2 + mu p_j - mu p_{j-1} = 0` from
/// `p_1 = 1`, in the rationalized form `2 mu p / (mu + sqrt(mu^2 + 4 mu p))`
/// which avoids cancellation.
pub fn p_recursion(mu: f64, j: u32) -> Result<f64, LimitsError> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(LimitsError::InvalidArgument(format!(
            "mutation rate must be positive and finite, got {mu}"
        )));
    }
    if j < 1 {
        return Err(LimitsError::InvalidArgument("p_j needs j >= 1".into()));
    }
    let mut p = 1.0;
    for _ in 1..j {
        p = 2.0 * mu * p / (mu + (mu * mu + 4.0 * mu * p).sqrt());
    }
    Ok(p)
}

/// Small-`mu` asymptote `mu^{1 - 2^{-(j-1)}}` of [`p_recursion`].
pub fn p_asymptotic(mu: f64, j: u32) -> f64 {
    mu.powf(1.0 - 0.5f64.powi(j as i32 - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Modified Bessel I_n by the trapezoid rule on (1/pi) int_0^pi e^{x cos t} cos(nt) dt.
    // The integrand is smooth and periodic, so the rule converges geometrically.
    fn bessel_i(order: u32, x: f64) -> f64 {
        let steps = 4000;
        let h = std::f64::consts::PI / steps as f64;
        let g = |t: f64| (x * t.cos()).exp() * (order as f64 * t).cos();
        let mut s = 0.5 * (g(0.0) + g(std::f64::consts::PI));
        for i in 1..steps {
            s += g(i as f64 * h);
        }
        s * h / std::f64::consts::PI
    }

    fn bessel_ratio(a: f64, j: u32) -> f64 {
        let b = a.powf(2.0 * (1.0 - 0.5f64.powi(j as i32 - 1)));
        let r = b.sqrt();
        r * bessel_i(0, 2.0 * r) / bessel_i(1, 2.0 * r)
    }

    #[test]
    fn lambda_at_unit_constant() {
        let l2 = lambda_j(1.0, 2).unwrap();
        assert!((l2 - 1.433_127_426_722_311_7).abs() < 1e-13);
        // B = 1 for every j when A = 1.
        assert_eq!(lambda_j(1.0, 5).unwrap(), l2);
    }

    #[test]
    fn lambda_small_constant_tends_to_one() {
        let l = lambda_j(1e-6, 2).unwrap();
        assert!((l - 1.0).abs() < 1e-3);
        assert!(l >= 1.0 - 1e-12);
    }

    #[test]
    fn lambda_matches_bessel_ratio() {
        for &a in &[0.1, 0.5, 1.0, 2.0, 5.0] {
            for j in 2..=4 {
                let got = lambda_j(a, j).unwrap();
                let want = bessel_ratio(a, j);
                assert!(
                    ((got - want) / want).abs() < 1e-10,
                    "A={a} j={j}: {got} vs {want}"
                );
                assert!(got > 1.0);
            }
        }
    }

    #[test]
    fn lambda_rejects_bad_input_and_overflow() {
        assert!(lambda_j(0.0, 2).is_err());
        assert!(lambda_j(1.0, 1).is_err());
        assert!(matches!(
            lambda_j(1e6, 2),
            Err(LimitsError::SeriesOverflow { .. })
        ));
        // Large but representable.
        assert!(lambda_j(1e4, 2).is_ok());
    }

    #[test]
    fn p_recursion_values() {
        assert_eq!(p_recursion(0.3, 1).unwrap(), 1.0);
        assert_eq!(p_recursion(1e-9, 1).unwrap(), 1.0);
        let p2 = p_recursion(1e-3, 2).unwrap();
        assert!((p2 - 0.031_126_729_201_736_94).abs() < 1e-15);
        let p3 = p_recursion(1e-4, 3).unwrap();
        assert!((p3 / 1e-3 - 1.0).abs() < 0.15);
        assert!(p_recursion(0.0, 2).is_err());
    }

    #[test]
    fn p_recursion_solves_quadratic() {
        for &mu in &[1e-8, 1e-5, 1e-3, 0.1, 1.0, 10.0] {
            let mut prev = 1.0;
            for j in 2..=8 {
                let p = p_recursion(mu, j).unwrap();
                let residual = p * p + mu * p - mu * prev;
                assert!(residual.abs() <= 1e-12 * mu * prev, "mu={mu} j={j}");
                assert!(p > 0.0 && p <= 1.0);
                prev = p;
            }
        }
    }
}
