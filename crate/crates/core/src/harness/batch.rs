use std::collections::HashSet;

use rayon::prelude::*;

use crate::config::ScenarioConfig;
use crate::error::{Error, Result};
use crate::stats::summarize;

use super::run::{run_simulation, RunMetrics, RunOutcome};

/// Metric names, in CSV column order.
pub const METRIC_NAMES: [&str; 7] = [
    "correctly_identified_attackers",
    "filtered_legal_clients",
    "dropped_packets",
    "max_buffer_level",
    "max_buffer_slot",
    "restore_time_after_tstar",
    "detection_time_after_tstar",
];

impl RunMetrics {
    /// Values in [`METRIC_NAMES`] order; `None` where the run has no value.
    pub fn values(&self) -> [Option<f64>; 7] {
        [
            Some(self.correctly_identified_attackers as f64),
            Some(self.filtered_legal_clients as f64),
            Some(self.dropped_packets as f64),
            Some(self.max_buffer_level as f64),
            Some(self.max_buffer_slot as f64),
            self.restore_time_after_tstar.map(|v| v as f64),
            self.detection_time_after_tstar.map(|v| v as f64),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricSummary {
    pub name: &'static str,
    /// Runs that produced a value.
    pub count: usize,
    pub min: f64,
    pub mean: f64,
    pub max: f64,
    pub ci95_halfwidth: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchSummary {
    pub n_runs: usize,
    pub metrics: Vec<MetricSummary>,
}

impl BatchSummary {
    pub fn from_metrics<'a>(runs: impl IntoIterator<Item = &'a RunMetrics>) -> Self {
        let runs: Vec<&RunMetrics> = runs.into_iter().collect();
        let metrics = METRIC_NAMES
            .iter()
            .enumerate()
            .filter_map(|(i, &name)| {
                let vals: Vec<f64> = runs.iter().filter_map(|m| m.values()[i]).collect();
                let (min, mean, max, ci95_halfwidth) = summarize(&vals)?;
                Some(MetricSummary { name, count: vals.len(), min, mean, max, ci95_halfwidth })
            })
            .collect();
        BatchSummary { n_runs: runs.len(), metrics }
    }

    pub fn get(&self, name: &str) -> Option<&MetricSummary> {
        self.metrics.iter().find(|m| m.name == name)
    }
}

pub struct Batch {
    pub runs: Vec<RunOutcome>,
    pub summary: BatchSummary,
}

/// Runs seeds `base_seed .. base_seed + n_runs` in parallel.
pub fn run_batch(cfg: &ScenarioConfig, n_runs: usize, base_seed: u64) -> Result<Batch> {
    if n_runs < 2 {
        return Err(Error::TooFewRuns(n_runs));
    }
    let seeds: Vec<u64> = (0..n_runs as u64).map(|i| base_seed.wrapping_add(i)).collect();
    run_batch_with_seeds(cfg, &seeds)
}

/// Runs one simulation per seed; seeds must be distinct.
pub fn run_batch_with_seeds(cfg: &ScenarioConfig, seeds: &[u64]) -> Result<Batch> {
    if seeds.len() < 2 {
        return Err(Error::TooFewRuns(seeds.len()));
    }
    let distinct: HashSet<u64> = seeds.iter().copied().collect();
    if distinct.len() != seeds.len() {
        return Err(Error::DuplicateSeeds);
    }
    cfg.validate()?;
    let runs = seeds
        .par_iter()
        .map(|&seed| run_simulation(&ScenarioConfig { seed, ..cfg.clone() }))
        .collect::<Result<Vec<_>>>()?;
    let summary = BatchSummary::from_metrics(runs.iter().map(|r| &r.metrics));
    Ok(Batch { runs, summary })
}
