use std::collections::{BTreeSet, HashSet};

use crate::config::IdentificationMethod;
use crate::interface::SourceRates;
use crate::traffic::SourceId;

/// Aggregate attack-rate estimate: measured total minus the last trusted
/// long-window level, floored at zero.
pub fn estimate_attack_rate(lambda_r_total: f64, lambda_long_lagged: f64) -> f64 {
    (lambda_r_total - lambda_long_lagged).max(0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentificationResult {
    pub suspects: BTreeSet<SourceId>,
    pub lambda_a_bar: f64,
    pub method: IdentificationMethod,
    /// The budget admitted every candidate, so it never constrained the set.
    pub unconstrained: bool,
}

/// Candidates ordered by descending rate, ties by ascending id.
pub fn rank_sources(rates: &SourceRates) -> Vec<(SourceId, f64)> {
    let mut ranked: Vec<(SourceId, f64)> = rates.iter().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    ranked
}

fn ranked_prefix(rates: &SourceRates, lambda_a_bar: f64, method: IdentificationMethod) -> IdentificationResult {
    let ranked = rank_sources(rates);
    let mut suspects = BTreeSet::new();
    let mut cumulative = 0.0;
    for &(id, rate) in &ranked {
        if cumulative + rate > lambda_a_bar {
            break;
        }
        cumulative += rate;
        suspects.insert(id);
    }
    let unconstrained = !ranked.is_empty() && suspects.len() == ranked.len();
    IdentificationResult { suspects, lambda_a_bar, method, unconstrained }
}

/// Largest highest-rate prefix whose summed rate stays within `lambda_a_bar`.
pub fn identify_ranked_subset(rates: &SourceRates, lambda_a_bar: f64) -> IdentificationResult {
    ranked_prefix(rates, lambda_a_bar, IdentificationMethod::RankedSubset)
}

/// Drops sources already active before the attack, then applies the
/// ranked-subset rule to the rest.
pub fn identify_exclude_prior(
    rates: &SourceRates,
    prior_active: &HashSet<SourceId>,
    lambda_a_bar: f64,
) -> IdentificationResult {
    let mut candidates = rates.clone();
    candidates.retain(|id| !prior_active.contains(&id));
    ranked_prefix(&candidates, lambda_a_bar, IdentificationMethod::ExcludePrior)
}
