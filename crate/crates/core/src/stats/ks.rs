use crate::error::StatsError;

use super::{check_alpha, normal_cdf, sample_mean, sample_std, TestResult};

const MIN_KS_SAMPLE: usize = 5;

/// Survival function of the asymptotic Kolmogorov distribution,
/// `P(K > lambda)`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        // Jacobi-theta form converges fast for small arguments.
        let pi2_8 = std::f64::consts::PI * std::f64::consts::PI / (8.0 * lambda * lambda);
        let mut cdf = 0.0;
        for k in 1..=20 {
            let m = (2 * k - 1) as f64;
            cdf += (-m * m * pi2_8).exp();
        }
        cdf *= (2.0 * std::f64::consts::PI).sqrt() / lambda;
        (1.0 - cdf).clamp(0.0, 1.0)
    } else {
        let mut sf = 0.0;
        let mut sign = 1.0;
        for k in 1..=100 {
            let k = k as f64;
            let term = (-2.0 * k * k * lambda * lambda).exp();
            sf += sign * term;
            if term < 1e-18 {
                break;
            }
            sign = -sign;
        }
        (2.0 * sf).clamp(0.0, 1.0)
    }
}

/// One-sample K-S test of normality with location and scale estimated from
/// the sample. The statistic is the supremum distance between the ECDF of
/// the standardized values and the standard normal CDF; the p-value comes
/// from the asymptotic Kolmogorov distribution at `sqrt(n) * D`.
pub fn ks_normality_test(values: &[f64], alpha: f64) -> Result<TestResult, StatsError> {
    check_alpha(alpha)?;
    if values.len() < MIN_KS_SAMPLE {
        return Err(StatsError::InsufficientSample { need: MIN_KS_SAMPLE, got: values.len() });
    }
    let mean = sample_mean(values)?;
    let std = sample_std(values)?;
    if std <= 0.0 || !std.is_finite() {
        return Err(StatsError::DegenerateSample);
    }
    let mut z: Vec<f64> = values.iter().map(|x| (x - mean) / std).collect();
    z.sort_by(|a, b| a.total_cmp(b));

    let n = z.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < z.len() {
        // Tied values form one ECDF step; compare both one-sided limits.
        let mut j = i;
        while j < z.len() && z[j] == z[i] {
            j += 1;
        }
        let cdf = normal_cdf(z[i]);
        let below = i as f64 / n;
        let above = j as f64 / n;
        d = d.max((cdf - below).abs()).max((above - cdf).abs());
        i = j;
    }

    let p = kolmogorov_sf(n.sqrt() * d);
    Ok(TestResult { statistic: d, p_value: Some(p), reject_null: p < alpha, alpha })
}
