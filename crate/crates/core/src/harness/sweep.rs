use rayon::prelude::*;

use crate::config::ScenarioConfig;
use crate::error::{ConfigError, Result};

use super::run::{run_simulation, RunOutcome};

pub struct SweepRow {
    pub w_s: usize,
    pub outcome: RunOutcome,
    /// Set when the window outlasts the attack.
    pub warning: Option<String>,
}

/// One run per short-window length, with the measurement horizon tied to it.
pub fn sweep_window(cfg: &ScenarioConfig, ws_values: &[usize]) -> Result<Vec<SweepRow>> {
    if let Some(bad) = ws_values.iter().find(|&&w| w == 0) {
        return Err(ConfigError::Invalid(format!("window size {bad} must be >= 1")).into());
    }
    ws_values
        .par_iter()
        .map(|&w_s| {
            let point = cfg.clone().with_short_window(w_s);
            let warning = (w_s as u64 > cfg.attack_len)
                .then(|| format!("window exceeds attack duration ({w_s} > {})", cfg.attack_len));
            Ok(SweepRow { w_s, outcome: run_simulation(&point)?, warning })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_equals_run() {
        let cfg = ScenarioConfig { seed: 12, ..ScenarioConfig::simulation_two() };
        let rows = sweep_window(&cfg, &[10]).unwrap();
        let direct = run_simulation(&cfg).unwrap();
        assert_eq!(rows[0].outcome.metrics, direct.metrics);
        assert!(rows[0].warning.is_none());
    }

    #[test]
    fn guards() {
        let cfg = ScenarioConfig { attack_len: 5, ..ScenarioConfig::simulation_two() };
        let rows = sweep_window(&cfg, &[8]).unwrap();
        assert!(rows[0].warning.as_deref().unwrap().contains("exceeds attack duration"));
        assert!(sweep_window(&cfg, &[0]).is_err());
    }
}
