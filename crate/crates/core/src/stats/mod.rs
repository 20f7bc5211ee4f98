//! Statistical kernels used by the accurate detector and the batch reporter.
//!
//! Every function here is pure and works on borrowed slices of per-interval
//! packet counts, so the detectors can test windows without copying them.

mod ks;
mod levene;
mod ttest;

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::StatsError;

pub use ks::{kolmogorov_sf, ks_normality_test};
pub use levene::{levene_test, LeveneCenter};
pub use ttest::{pooled_t, pooled_variance, student_t_critical, welch_t};

/// Outcome of a hypothesis test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    pub statistic: f64,
    /// Absent when the decision is a pure critical-value comparison.
    pub p_value: Option<f64>,
    pub reject_null: bool,
    pub alpha: f64,
}

pub(crate) fn check_alpha(alpha: f64) -> Result<(), StatsError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(StatsError::Domain(format!("alpha {alpha} outside (0, 1)")))
    }
}

/// Arithmetic mean.
pub fn sample_mean(values: &[f64]) -> Result<f64, StatsError> {
    if values.is_empty() {
        return Err(StatsError::EmptySample);
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// Bias-corrected variance (divisor N - 1).
pub fn sample_variance(values: &[f64]) -> Result<f64, StatsError> {
    if values.len() < 2 {
        return Err(StatsError::InsufficientSample { need: 2, got: values.len() });
    }
    let mean = sample_mean(values)?;
    let ss: f64 = values.iter().map(|x| (x - mean) * (x - mean)).sum();
    Ok(ss / (values.len() - 1) as f64)
}

/// Sample standard deviation with divisor N - 1.
pub fn sample_std(values: &[f64]) -> Result<f64, StatsError> {
    sample_variance(values).map(f64::sqrt)
}

fn standard_normal() -> Normal {
    Normal::standard()
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    standard_normal().cdf(z)
}

/// Inverse of the standard normal CDF.
pub fn normal_quantile(p: f64) -> Result<f64, StatsError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(StatsError::Domain(format!("probability {p} outside (0, 1)")));
    }
    Ok(standard_normal().inverse_cdf(p))
}

/// One-sided `100(1 - alpha)%` upper confidence bound on the population mean,
/// `mean + z_alpha * s / sqrt(n)`. This is the MPAR threshold of the accurate
/// detector.
pub fn upper_confidence_bound(values: &[f64], alpha: f64) -> Result<f64, StatsError> {
    check_alpha(alpha)?;
    let mean = sample_mean(values)?;
    let std = sample_std(values)?;
    let z = normal_quantile(1.0 - alpha)?;
    Ok(mean + z * std / (values.len() as f64).sqrt())
}

/// Min, mean and normal-approximation 95% CI half-width (`1.96 s / sqrt(n)`).
pub fn summarize(values: &[f64]) -> Option<(f64, f64, f64, f64)> {
    let mean = sample_mean(values).ok()?;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let half = match sample_std(values) {
        Ok(s) => 1.96 * s / (values.len() as f64).sqrt(),
        Err(_) => 0.0,
    };
    Some((min, mean, max, half))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn mean_examples() {
        assert_eq!(sample_mean(&[1.0, 2.0, 3.0]).unwrap(), 2.0);
        assert_eq!(sample_mean(&[5.0; 4]).unwrap(), 5.0);
        assert_eq!(sample_mean(&[]), Err(StatsError::EmptySample));
    }

    #[test]
    fn std_examples() {
        assert_eq!(sample_std(&[5.0, 5.0, 5.0]).unwrap(), 0.0);
        assert_relative_eq!(sample_std(&[1.0, 3.0]).unwrap(), 2f64.sqrt(), epsilon = 1e-15);
        // sum of squared deviations about 5 is 32, divided by 7
        assert_relative_eq!(
            sample_std(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]).unwrap(),
            (32.0f64 / 7.0).sqrt(),
            epsilon = 1e-15
        );
        assert!(matches!(sample_std(&[1.0]), Err(StatsError::InsufficientSample { .. })));
    }

    #[test]
    fn quantile_examples() {
        assert_eq!(normal_quantile(0.5).unwrap(), 0.0);
        assert!((normal_quantile(0.975).unwrap() - 1.959964).abs() < 1e-6);
        assert!((normal_quantile(0.025).unwrap() + 1.959964).abs() < 1e-6);
        assert!(normal_quantile(0.0).is_err());
        assert!(normal_quantile(1.0).is_err());
        assert!(normal_quantile(f64::NAN).is_err());
    }

    #[test]
    fn ucb_examples() {
        assert_eq!(upper_confidence_bound(&[10.0; 4], 0.025).unwrap(), 10.0);

        // 25 values with mean 100 and std exactly 10: +-a pattern with a
        // chosen so that 24 a^2 / 24 = 100 -> twelve at 100+a, twelve at 100-a,
        // one at 100 gives ss = 24 a^2, var = ss / 24 = a^2.
        let mut s = vec![110.0; 12];
        s.extend(vec![90.0; 12]);
        s.push(100.0);
        assert_relative_eq!(sample_std(&s).unwrap(), 10.0, epsilon = 1e-12);
        let tx = upper_confidence_bound(&s, 0.025).unwrap();
        assert!((tx - 103.919928).abs() < 1e-5, "{tx}");
        assert_relative_eq!(upper_confidence_bound(&s, 0.5).unwrap(), 100.0, epsilon = 1e-12);
        assert!(upper_confidence_bound(&[1.0], 0.025).is_err());
    }

    #[test]
    fn summarize_constant_has_zero_halfwidth() {
        let (min, mean, max, half) = summarize(&[3.0, 3.0, 3.0]).unwrap();
        assert_eq!((min, mean, max, half), (3.0, 3.0, 3.0, 0.0));
        assert!(summarize(&[]).is_none());
    }
}
