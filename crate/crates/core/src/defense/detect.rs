use crate::config::DetectorKind;
use crate::error::DefenseError;
use crate::interface::InterfaceState;
use crate::stats::{
    levene_test, ks_normality_test, pooled_t, sample_mean, sample_std, upper_confidence_bound,
    LeveneCenter, TestResult,
};

/// Significance level of the normality gate on the baseline.
pub const NORMALITY_ALPHA: f64 = 0.05;

/// Everything the accurate detector computed for one decision.
#[derive(Debug, Clone, PartialEq)]
pub struct StatisticalEvidence {
    pub baseline_mean: f64,
    pub baseline_std: f64,
    /// MPAR threshold `T_x`.
    pub mpar: f64,
    pub current_mean: f64,
    pub normality: TestResult,
    /// Absent when both samples have zero spread.
    pub t_test: Option<TestResult>,
    /// Absent when the groups are degenerate.
    pub levene: Option<TestResult>,
    pub exceeds_mpar: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionReport {
    pub detected: bool,
    pub t_hat: Option<u64>,
    pub method: DetectorKind,
    pub statistics: Option<StatisticalEvidence>,
}

impl DetectionReport {
    fn fired(slot: u64, method: DetectorKind) -> Self {
        DetectionReport { detected: true, t_hat: Some(slot), method, statistics: None }
    }
}

/// Fires once the end-of-slot occupancy has reached L1.
pub fn detect_buffer_full(state: &InterfaceState) -> Option<DetectionReport> {
    let slot = state.current_slot()?;
    (state.occupancy() >= state.l1()).then(|| DetectionReport::fired(slot, DetectorKind::BufferFull))
}

/// `lambda_short > (1 + r) * lambda_long`.
pub fn detect_jump(lambda_short: f64, lambda_long: f64, r: f64) -> bool {
    lambda_short > (1.0 + r) * lambda_long
}

/// Accurate detector: the baseline must look normal; the attack is declared
/// when the current mean exceeds the MPAR bound of the baseline and either
/// the pooled t-test or Levene's test rejects at `alpha`.
pub fn detect_statistical(
    baseline: &[f64],
    current: &[f64],
    alpha: f64,
    mpar_alpha: f64,
    center: LeveneCenter,
) -> Result<DetectionReport, DefenseError> {
    for s in [baseline, current] {
        if s.len() < 5 {
            return Err(crate::error::StatsError::InsufficientSample { need: 5, got: s.len() }.into());
        }
    }
    let normality = ks_normality_test(baseline, NORMALITY_ALPHA)?;
    if normality.reject_null {
        return Err(DefenseError::BaselineNotNormal { p_value: normality.p_value.unwrap_or(0.0) });
    }
    let baseline_mean = sample_mean(baseline)?;
    let baseline_std = sample_std(baseline)?;
    let mpar = upper_confidence_bound(baseline, mpar_alpha)?;
    let current_mean = sample_mean(current)?;
    let t_test = pooled_t(current, baseline, alpha).ok();
    let levene = levene_test(baseline, current, alpha, center).ok();
    let exceeds_mpar = current_mean > mpar;
    let rejects = t_test.is_some_and(|t| t.reject_null) || levene.is_some_and(|l| l.reject_null);
    let detected = exceeds_mpar && rejects;
    Ok(DetectionReport {
        detected,
        t_hat: None,
        method: DetectorKind::Statistical,
        statistics: Some(StatisticalEvidence {
            baseline_mean,
            baseline_std,
            mpar,
            current_mean,
            normality,
            t_test,
            levene,
            exceeds_mpar,
        }),
    })
}

/// Runs [`detect_statistical`] on the windows of `state`: the baseline is the
/// long window as it stood `c` slots ago, the current sample is the short
/// window.
pub fn detect_statistical_at(
    state: &InterfaceState,
    c: usize,
    alpha: f64,
    mpar_alpha: f64,
    center: LeveneCenter,
) -> Result<DetectionReport, DefenseError> {
    let windows = state.windows();
    let baseline = windows.slice_at_lag(c, windows.w_l())?;
    let current = windows.slice_at_lag(0, windows.w_s())?;
    let mut report = detect_statistical(&baseline, &current, alpha, mpar_alpha, center)?;
    if report.detected {
        report.t_hat = state.current_slot();
    }
    Ok(report)
}
