//! Slot-driven pipeline: detect, measure, identify, disrupt, verify.

use std::collections::BTreeSet;

use crate::config::{DetectorKind, IdentificationMethod, ScenarioConfig, StatGate};
use crate::error::DefenseError;
use crate::interface::{InterfaceState, SlotSummary};
use crate::traffic::SourceId;

use super::detect::{detect_jump, detect_statistical_at};
use super::events::{Event, EventKind, EventLog};
use super::identify::{
    estimate_attack_rate, identify_exclude_prior, identify_ranked_subset, IdentificationResult,
};
use super::restore::{compute_timeout, next_escalation, RestorationMonitor, RestorationOutcome, RestorationStep};

/// First slot at which each detector's condition held, whether or not it was
/// allowed to trigger the pipeline.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DetectorFirings {
    pub buffer_full: Option<u64>,
    pub jump: Option<u64>,
    pub statistical: Option<u64>,
}

impl DetectorFirings {
    pub fn get(&self, kind: DetectorKind) -> Option<u64> {
        match kind {
            DetectorKind::BufferFull => self.buffer_full,
            DetectorKind::Jump => self.jump,
            DetectorKind::Statistical => self.statistical,
        }
    }

    fn slot_mut(&mut self, kind: DetectorKind) -> &mut Option<u64> {
        match kind {
            DetectorKind::BufferFull => &mut self.buffer_full,
            DetectorKind::Jump => &mut self.jump,
            DetectorKind::Statistical => &mut self.statistical,
        }
    }
}

#[derive(Debug, Clone)]
enum Phase {
    Monitoring,
    Measuring { t_hat: u64, lagged: f64 },
    Restoring { monitor: RestorationMonitor },
}

/// One pipeline activation.
#[derive(Debug, Clone, PartialEq)]
pub struct Trigger {
    pub t_hat: u64,
    pub method: DetectorKind,
    pub lambda_long_lagged: f64,
}

pub struct DefensePipeline {
    cfg: ScenarioConfig,
    phase: Phase,
    firings: DetectorFirings,
    triggers: Vec<Trigger>,
    identifications: Vec<IdentificationResult>,
    identified: BTreeSet<SourceId>,
    escalated: Vec<SourceId>,
    restorations: Vec<RestorationOutcome>,
    log: EventLog,
}

impl DefensePipeline {
    pub fn new(cfg: &ScenarioConfig) -> Self {
        DefensePipeline {
            cfg: cfg.clone(),
            phase: Phase::Monitoring,
            firings: DetectorFirings::default(),
            triggers: Vec::new(),
            identifications: Vec::new(),
            identified: BTreeSet::new(),
            escalated: Vec::new(),
            restorations: Vec::new(),
            log: EventLog::default(),
        }
    }

    pub fn firings(&self) -> DetectorFirings {
        self.firings
    }

    pub fn triggers(&self) -> &[Trigger] {
        &self.triggers
    }

    pub fn identifications(&self) -> &[IdentificationResult] {
        &self.identifications
    }

    /// Union of all suspect sets.
    pub fn identified(&self) -> &BTreeSet<SourceId> {
        &self.identified
    }

    pub fn escalated(&self) -> &[SourceId] {
        &self.escalated
    }

    pub fn restorations(&self) -> &[RestorationOutcome] {
        &self.restorations
    }

    pub fn log(&self) -> &EventLog {
        &self.log
    }

    pub fn into_log(self) -> EventLog {
        self.log
    }

    pub fn is_monitoring(&self) -> bool {
        matches!(self.phase, Phase::Monitoring)
    }

    /// Runs after the interface has processed `summary.slot`.
    pub fn observe(&mut self, state: &mut InterfaceState, summary: &SlotSummary) {
        let slot = summary.slot;
        let fired = self.evaluate_detectors(state, summary);

        match std::mem::replace(&mut self.phase, Phase::Monitoring) {
            Phase::Monitoring => {
                let trigger = DetectorKind::ALL
                    .into_iter()
                    .find(|k| fired.contains(k) && self.cfg.detectors.contains(*k));
                if let Some(method) = trigger {
                    let (lagged, lag) = lagged_long(state, self.cfg.c);
                    self.log.push(
                        Event::new(slot, EventKind::AttackDetected)
                            .with("method", method.name())
                            .with("lambda_long_lagged", fmt_f(lagged))
                            .with("lag", lag),
                    );
                    self.triggers.push(Trigger { t_hat: slot, method, lambda_long_lagged: lagged });
                    self.phase = Phase::Measuring { t_hat: slot, lagged };
                    self.maybe_identify(state, slot);
                }
            }
            Phase::Measuring { t_hat, lagged } => {
                self.phase = Phase::Measuring { t_hat, lagged };
                self.maybe_identify(state, slot);
            }
            Phase::Restoring { monitor } => {
                self.phase = Phase::Restoring { monitor };
                self.check_restoration(state, slot);
            }
        }
    }

    fn evaluate_detectors(&mut self, state: &InterfaceState, summary: &SlotSummary) -> Vec<DetectorKind> {
        let slot = summary.slot;
        let mut fired = Vec::new();
        if summary.occupancy >= state.l1() {
            fired.push(DetectorKind::BufferFull);
        }
        if let (Some(short), Some(long)) = (summary.lambda_short, summary.lambda_long) {
            if detect_jump(short, long, self.cfg.r) {
                fired.push(DetectorKind::Jump);
            }
        }
        let gate_open = match self.cfg.stat_gate {
            StatGate::Approximate => !fired.is_empty(),
            StatGate::Mpar => true,
        };
        let wanted = self.firings.statistical.is_none() || self.is_monitoring();
        if gate_open && wanted && state.windows().len() >= self.cfg.c + self.cfg.w_l {
            match detect_statistical_at(state, self.cfg.c, self.cfg.alpha, self.cfg.mpar_alpha, self.cfg.levene_center) {
                Ok(report) if report.detected => fired.push(DetectorKind::Statistical),
                Ok(_) => {}
                Err(DefenseError::BaselineNotNormal { p_value }) => self.log.push(
                    Event::new(slot, EventKind::NormalityGateFailed).with("p_value", fmt_f(p_value)),
                ),
                Err(_) => {}
            }
        }
        for &kind in &fired {
            let first = self.firings.slot_mut(kind);
            if first.is_none() {
                *first = Some(slot);
                self.log.push(Event::new(slot, EventKind::DetectorFired).with("method", kind.name()));
            }
        }
        fired
    }

    fn maybe_identify(&mut self, state: &mut InterfaceState, slot: u64) {
        let Phase::Measuring { t_hat, lagged } = self.phase else { return };
        if slot + 1 < t_hat + self.cfg.delta_hat as u64 {
            return;
        }
        let mut rates = state.per_source_rates(t_hat, slot + 1).unwrap_or_default();
        rates.retain(|id| !state.is_filtered(id));
        let lambda_r = rates.total();
        let lambda_a_bar = estimate_attack_rate(lambda_r, lagged);
        let result = match self.cfg.identification {
            IdentificationMethod::RankedSubset => identify_ranked_subset(&rates, lambda_a_bar),
            IdentificationMethod::ExcludePrior => {
                let prior = state.ledger().seen_before(t_hat.saturating_sub(self.cfg.c as u64));
                identify_exclude_prior(&rates, &prior, lambda_a_bar)
            }
        };
        self.log.push(
            Event::new(slot, EventKind::Identification)
                .with("method", result.method.name())
                .with("t_hat", t_hat)
                .with("active", rates.len())
                .with("lambda_r", fmt_f(lambda_r))
                .with("lambda_long_lagged", fmt_f(lagged))
                .with("lambda_a_bar", fmt_f(lambda_a_bar))
                .with("floored", lambda_r < lagged)
                .with("unconstrained", result.unconstrained)
                .with("suspects", result.suspects.len()),
        );
        for id in &result.suspects {
            self.log.push(Event::new(slot, EventKind::Filter).with("id", id).with("reason", "identification"));
        }
        let purged = state.purge_and_filter(&result.suspects);
        self.log.push(Event::new(slot, EventKind::Purge).with("purged", purged).with("occupancy", state.occupancy()));
        self.identified.extend(result.suspects.iter().copied());
        self.identifications.push(result);

        match compute_timeout(state.l2(), state.mu() as f64, lagged, self.cfg.d) {
            Ok(t_out) => {
                self.log.push(Event::new(slot, EventKind::Timeout).with("t_out", t_out));
                self.phase = Phase::Restoring { monitor: RestorationMonitor::new(slot, t_out) };
                self.check_restoration(state, slot);
            }
            Err(e) => {
                self.log.push(Event::new(slot, EventKind::TimeoutUnavailable).with("reason", e));
                self.phase = Phase::Monitoring;
            }
        }
    }

    fn check_restoration(&mut self, state: &mut InterfaceState, slot: u64) {
        let Phase::Restoring { monitor } = &mut self.phase else { return };
        loop {
            match monitor.observe(slot, state.occupancy(), state.l1()) {
                RestorationStep::Waiting => return,
                RestorationStep::Restored => {
                    let outcome = monitor.outcome(true);
                    self.log.push(
                        Event::new(slot, EventKind::Restored)
                            .with("t_out_used", outcome.t_out_used)
                            .with("escalations", outcome.extra_filtered.len()),
                    );
                    self.restorations.push(outcome);
                    self.phase = Phase::Monitoring;
                    return;
                }
                RestorationStep::Escalate => {
                    let horizon = self.cfg.delta_hat as u64;
                    let oldest = state.ledger().span().map_or(0, |(o, _)| o);
                    let from = (slot + 1).saturating_sub(horizon).max(oldest);
                    let rates = state.per_source_rates(from, slot + 1).unwrap_or_default();
                    match next_escalation(&rates, |id| state.is_filtered(id)) {
                        Some(id) => {
                            let purged = state.purge_and_filter(&[id]);
                            monitor.escalated(slot, id);
                            self.escalated.push(id);
                            self.log.push(
                                Event::new(slot, EventKind::Escalate)
                                    .with("id", id)
                                    .with("rate", fmt_f(rates.get(id)))
                                    .with("purged", purged),
                            );
                            self.log.push(
                                Event::new(slot, EventKind::Filter).with("id", id).with("reason", "escalation"),
                            );
                            // loop once more: the purge may already have restored L1
                        }
                        None => {
                            let outcome = monitor.outcome(false);
                            self.log.push(
                                Event::new(slot, EventKind::RestorationFailed)
                                    .with("occupancy", state.occupancy())
                                    .with("escalations", outcome.extra_filtered.len()),
                            );
                            self.restorations.push(outcome);
                            self.phase = Phase::Monitoring;
                            return;
                        }
                    }
                    if state.occupancy() > state.l1() {
                        return;
                    }
                }
            }
        }
    }
}

/// Long-window average `c` slots back; early in a run, the oldest full long
/// window (or the whole history) stands in.
fn lagged_long(state: &InterfaceState, c: usize) -> (f64, usize) {
    let w = state.windows();
    if let Ok(v) = w.lambda_long_at_lag(c) {
        return (v, c);
    }
    if w.len() >= w.w_l() {
        let lag = w.len() - w.w_l();
        return (w.lambda_long_at_lag(lag).unwrap_or(0.0), lag);
    }
    let all = w.slice_at_lag(0, w.len()).unwrap_or_default();
    let mean = if all.is_empty() { 0.0 } else { all.iter().sum::<f64>() / all.len() as f64 };
    (mean, 0)
}

fn fmt_f(x: f64) -> String {
    format!("{x:.6}")
}
