//! Detection, identification, disruption and restoration.

mod detect;
mod events;
mod identify;
mod pipeline;
mod restore;

pub use detect::{
    detect_buffer_full, detect_jump, detect_statistical, detect_statistical_at, DetectionReport,
    StatisticalEvidence, NORMALITY_ALPHA,
};
pub use events::{Event, EventKind, EventLog};
pub use identify::{
    estimate_attack_rate, identify_exclude_prior, identify_ranked_subset, rank_sources,
    IdentificationResult,
};
pub use pipeline::{DefensePipeline, DetectorFirings, Trigger};
pub use restore::{
    compute_timeout, next_escalation, verify_restoration, RestorationMonitor, RestorationOutcome,
    RestorationStep,
};

use crate::interface::InterfaceState;

/// Filters the suspects and purges their queued packets.
pub fn disrupt(result: &IdentificationResult, state: &mut InterfaceState) -> u64 {
    state.purge_and_filter(&result.suspects)
}
