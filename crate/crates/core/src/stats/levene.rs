use statrs::distribution::{ContinuousCDF, FisherSnedecor};

use crate::error::StatsError;

use super::{check_alpha, sample_mean, TestResult};

/// Group center used for the absolute deviations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LeveneCenter {
    /// Classical Levene.
    #[default]
    Mean,
    /// Brown-Forsythe variant.
    Median,
}

impl std::str::FromStr for LeveneCenter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mean" => Ok(LeveneCenter::Mean),
            "median" => Ok(LeveneCenter::Median),
            other => Err(format!("unknown levene center `{other}`")),
        }
    }
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let mid = v.len() / 2;
    if v.len().is_multiple_of(2) {
        (v[mid - 1] + v[mid]) / 2.0
    } else {
        v[mid]
    }
}

fn abs_deviations(values: &[f64], center: LeveneCenter) -> Result<Vec<f64>, StatsError> {
    let c = match center {
        LeveneCenter::Mean => sample_mean(values)?,
        LeveneCenter::Median => median(values),
    };
    Ok(values.iter().map(|x| (x - c).abs()).collect())
}

/// Two-group Levene test for equal variances.
///
/// `W` is the one-way ANOVA F statistic over absolute deviations from each
/// group's center; under the null it follows `F(1, N - 2)`. The null is
/// rejected when `p < alpha`.
pub fn levene_test(
    s1: &[f64],
    s2: &[f64],
    alpha: f64,
    center: LeveneCenter,
) -> Result<TestResult, StatsError> {
    check_alpha(alpha)?;
    for s in [s1, s2] {
        if s.len() < 3 {
            return Err(StatsError::InsufficientSample { need: 3, got: s.len() });
        }
    }
    let z1 = abs_deviations(s1, center)?;
    let z2 = abs_deviations(s2, center)?;
    let (m1, m2) = (sample_mean(&z1)?, sample_mean(&z2)?);
    let (n1, n2) = (z1.len() as f64, z2.len() as f64);
    let n = n1 + n2;
    let grand = (m1 * n1 + m2 * n2) / n;

    let between = n1 * (m1 - grand).powi(2) + n2 * (m2 - grand).powi(2);
    let within: f64 = z1.iter().map(|z| (z - m1).powi(2)).sum::<f64>()
        + z2.iter().map(|z| (z - m2).powi(2)).sum::<f64>();

    let dof = n - 2.0;
    let w = if within > 0.0 {
        dof * between / within
    } else if between > 0.0 {
        f64::INFINITY
    } else {
        return Err(StatsError::DegenerateGroups);
    };

    let p = if w.is_infinite() {
        0.0
    } else {
        let f = FisherSnedecor::new(1.0, dof).map_err(|e| StatsError::Domain(e.to_string()))?;
        f.sf(w).clamp(0.0, 1.0)
    };
    Ok(TestResult { statistic: w, p_value: Some(p), reject_null: p < alpha, alpha })
}
