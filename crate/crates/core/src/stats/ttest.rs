use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::StatsError;

use super::{check_alpha, sample_mean, sample_variance, TestResult};

fn need_two(values: &[f64]) -> Result<(), StatsError> {
    if values.len() < 2 {
        Err(StatsError::InsufficientSample { need: 2, got: values.len() })
    } else {
        Ok(())
    }
}

/// Welch's unequal-variance t statistic.
pub fn welch_t(s1: &[f64], s2: &[f64]) -> Result<f64, StatsError> {
    need_two(s1)?;
    need_two(s2)?;
    let (m1, m2) = (sample_mean(s1)?, sample_mean(s2)?);
    let (v1, v2) = (sample_variance(s1)?, sample_variance(s2)?);
    let se2 = v1 / s1.len() as f64 + v2 / s2.len() as f64;
    if se2 <= 0.0 {
        return Err(StatsError::ZeroPooledSpread);
    }
    Ok((m1 - m2) / se2.sqrt())
}

/// Weighted (pooled) variance of two groups, divisor `N1 + N2 - 2`.
pub fn pooled_variance(s1: &[f64], s2: &[f64]) -> Result<f64, StatsError> {
    if s1.len() + s2.len() < 3 || s1.is_empty() || s2.is_empty() {
        return Err(StatsError::InsufficientDof);
    }
    // A singleton group contributes no spread but still counts toward N.
    let ss = |s: &[f64]| -> Result<f64, StatsError> {
        if s.len() < 2 {
            return Ok(0.0);
        }
        Ok(sample_variance(s)? * (s.len() - 1) as f64)
    };
    Ok((ss(s1)? + ss(s2)?) / (s1.len() + s2.len() - 2) as f64)
}

/// Two-sided Student-t critical value at `alpha` with `dof` degrees of freedom.
pub fn student_t_critical(alpha: f64, dof: f64) -> Result<f64, StatsError> {
    check_alpha(alpha)?;
    let dist = StudentsT::new(0.0, 1.0, dof).map_err(|e| StatsError::Domain(e.to_string()))?;
    Ok(dist.inverse_cdf(1.0 - alpha / 2.0))
}

/// Pooled-variance two-sample t-test. Rejects when `|t|` exceeds the
/// two-sided critical value with `N1 + N2 - 2` degrees of freedom.
pub fn pooled_t(s1: &[f64], s2: &[f64], alpha: f64) -> Result<TestResult, StatsError> {
    check_alpha(alpha)?;
    let pooled = pooled_variance(s1, s2)?;
    if pooled <= 0.0 {
        return Err(StatsError::ZeroPooledSpread);
    }
    let (n1, n2) = (s1.len() as f64, s2.len() as f64);
    let t = (sample_mean(s1)? - sample_mean(s2)?) / (pooled / n1 + pooled / n2).sqrt();
    let dof = n1 + n2 - 2.0;
    let critical = student_t_critical(alpha, dof)?;
    let dist = StudentsT::new(0.0, 1.0, dof).map_err(|e| StatsError::Domain(e.to_string()))?;
    let p = (2.0 * dist.sf(t.abs())).clamp(0.0, 1.0);
    Ok(TestResult { statistic: t, p_value: Some(p), reject_null: t.abs() > critical, alpha })
}
