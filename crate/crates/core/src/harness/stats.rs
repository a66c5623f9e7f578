use super::HarnessError;
use crate::limits::LimitLaw;

/// Scaled waiting times of the untruncated replicates, sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    samples: Vec<f64>,
    truncated_count: u64,
}

impl EmpiricalDistribution {
    /// Sorts `samples`. Fails if there is none, since the ECDF is then undefined.
    pub fn new(mut samples: Vec<f64>, truncated_count: u64) -> Result<Self, HarnessError> {
        if samples.is_empty() {
            return Err(HarnessError::EmptySample);
        }
        if samples.iter().any(|x| x.is_nan()) {
            return Err(HarnessError::InvalidConfig("NaN sample".into()));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self {
            samples,
            truncated_count,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// All replicates, truncated included.
    pub fn count(&self) -> u64 {
        self.samples.len() as u64 + self.truncated_count
    }

    pub fn truncated_count(&self) -> u64 {
        self.truncated_count
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    /// Sample quantile by linear interpolation between order statistics
    /// (Hyndman-Fan type 7).
    pub fn quantile(&self, p: f64) -> f64 {
        let p = p.clamp(0.0, 1.0);
        let h = (self.samples.len() - 1) as f64 * p;
        let lo = h.floor() as usize;
        let hi = h.ceil() as usize;
        self.samples[lo] + (h - lo as f64) * (self.samples[hi] - self.samples[lo])
    }
}

/// Right-continuous ECDF of the untruncated samples.
pub fn ecdf(dist: &EmpiricalDistribution, t: f64) -> f64 {
    let below = dist.samples.partition_point(|&x| x <= t);
    below as f64 / dist.samples.len() as f64
}

/// `sup_t |ECDF(t) - F(t)|` for a continuous `F`, attained at a sample point
/// from the left or the right.
pub fn ks_distance(dist: &EmpiricalDistribution, law: &LimitLaw) -> f64 {
    let n = dist.samples.len() as f64;
    dist.samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = law.cdf(x);
            ((i + 1) as f64 / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

/// Dvoretzky-Kiefer-Wolfowitz half-width `sqrt(ln(2 / alpha) / (2 count))`.
pub fn dkw_bound(count: u64, alpha: f64) -> Result<f64, HarnessError> {
    if count == 0 || !(alpha > 0.0 && alpha < 1.0) {
        return Err(HarnessError::InvalidConfig(format!(
            "dkw_bound needs count >= 1 and 0 < alpha < 1, got {count}, {alpha}"
        )));
    }
    Ok(((2.0 / alpha).ln() / (2.0 * count as f64)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(v: &[f64]) -> EmpiricalDistribution {
        EmpiricalDistribution::new(v.to_vec(), 0).unwrap()
    }

    #[test]
    fn ecdf_examples() {
        let d = dist(&[3.0, 1.0, 2.0]);
        assert_eq!(d.samples(), &[1.0, 2.0, 3.0]);
        assert_eq!(ecdf(&d, 0.5), 0.0);
        assert_eq!(ecdf(&d, 2.0), 2.0 / 3.0);
        assert_eq!(ecdf(&d, 10.0), 1.0);
        let t = EmpiricalDistribution::new(vec![1.0], 4).unwrap();
        assert_eq!(t.count(), 5);
        assert_eq!(ecdf(&t, 1.0), 1.0);
        assert!(EmpiricalDistribution::new(vec![], 3).is_err());
    }

    #[test]
    fn dkw_examples() {
        assert!((dkw_bound(10_000, 0.01).unwrap() - 0.016_276_236_307_187_292).abs() < 1e-15);
        assert!((dkw_bound(1, 0.5).unwrap() - 0.832_554_611_157_697_7).abs() < 1e-15);
        assert!(dkw_bound(0, 0.5).is_err());
        assert!(dkw_bound(1, 1.0).is_err());
        let mut prev = f64::INFINITY;
        for c in [1, 2, 10, 100, 1000] {
            let e = dkw_bound(c, 0.05).unwrap();
            assert!(e < prev);
            prev = e;
        }
    }

    #[test]
    fn ks_of_quantile_points_shrinks() {
        let law = LimitLaw::Exponential { rate: 1.0 };
        let mut prev = 1.0;
        for n in [10usize, 100, 1000, 10_000] {
            let pts: Vec<f64> = (1..=n)
                .map(|i| -(1.0 - i as f64 / (n + 1) as f64).ln())
                .collect();
            let d = ks_distance(&dist(&pts), &law);
            assert!(d <= 1.0 / n as f64 + 1e-12);
            assert!(d < prev);
            prev = d;
        }
    }

    #[test]
    fn ks_detects_point_mass() {
        let law = LimitLaw::Exponential { rate: 1.0 };
        let d = ks_distance(&dist(&[std::f64::consts::LN_2; 50]), &law);
        assert!(d >= 0.5 - 1e-12);
    }

    #[test]
    fn type7_quantiles() {
        let d = dist(&[4.0, 1.0, 3.0, 2.0]);
        assert_eq!(d.quantile(0.0), 1.0);
        assert_eq!(d.quantile(1.0), 4.0);
        assert_eq!(d.quantile(0.5), 2.5);
        assert!((d.quantile(0.25) - 1.75).abs() < 1e-15);
        assert_eq!(d.mean(), 2.5);
    }
}
