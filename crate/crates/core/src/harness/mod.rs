//! Scenario runner, scoring, batches, window sweeps and CSV reports.

mod batch;
pub mod report;
mod run;
mod sweep;

pub use batch::{run_batch, run_batch_with_seeds, Batch, BatchSummary, MetricSummary, METRIC_NAMES};
pub use run::{earliest_firing, run_simulation, settle_slot, RunMetrics, RunOutcome};
pub use sweep::{sweep_window, SweepRow};
