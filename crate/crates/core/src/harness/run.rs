use std::collections::BTreeSet;

use crate::config::{DetectorKind, ScenarioConfig};
use crate::defense::{DefensePipeline, DetectorFirings, EventLog, RestorationOutcome, Trigger};
use crate::error::Result;
use crate::interface::InterfaceState;
use crate::traffic::{build_scenario, Scenario, SourceId, SourceKind, TrafficGenerator};

/// The observables of one seeded run.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RunMetrics {
    pub correctly_identified_attackers: u64,
    pub filtered_legal_clients: u64,
    pub dropped_packets: u64,
    /// Peak in-slot occupancy (right after admission).
    pub max_buffer_level: u64,
    pub max_buffer_slot: u64,
    /// Slots after `t*` until occupancy settles at or below L1.
    pub restore_time_after_tstar: Option<u64>,
    /// Pipeline trigger slot minus `t*`; negative for a false alarm.
    pub detection_time_after_tstar: Option<i64>,
}

/// Metrics plus the evidence behind them.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub metrics: RunMetrics,
    pub seed: u64,
    pub t_star: u64,
    pub has_attack: bool,
    pub firings: DetectorFirings,
    pub triggers: Vec<Trigger>,
    pub identified: BTreeSet<SourceId>,
    pub escalated: Vec<SourceId>,
    pub restorations: Vec<RestorationOutcome>,
    /// Legal clients caught by identification alone.
    pub legal_filtered_by_identification: u64,
    /// Attackers filtered by identification or escalation.
    pub attackers_filtered: u64,
    /// End-of-slot occupancy, one entry per slot.
    pub occupancy: Vec<u64>,
    /// Slots from `t*` until the in-slot peak first reached L1 / L.
    pub l1_fill_after_tstar: Option<u64>,
    pub full_fill_after_tstar: Option<u64>,
    pub log: EventLog,
}

impl RunOutcome {
    pub fn detected(&self) -> bool {
        !self.triggers.is_empty()
    }

    /// A trigger before the attack started, or in a run with no attack.
    pub fn false_alarm(&self) -> bool {
        match self.triggers.first() {
            Some(t) => !self.has_attack || t.t_hat < self.t_star,
            None => false,
        }
    }
}

/// Executes the whole slot loop for one configuration and scores it against
/// the scenario's ground truth.
pub fn run_simulation(cfg: &ScenarioConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let scenario = build_scenario(cfg);
    let mut traffic = TrafficGenerator::new(&scenario, cfg.seed)?;
    let mut state = InterfaceState::from_config(cfg);
    let mut pipeline = DefensePipeline::new(cfg);

    let total = scenario.total_slots as usize;
    let mut occupancy = Vec::with_capacity(total);
    let mut peaks = Vec::with_capacity(total);
    for _ in 0..total {
        let arrivals = traffic.next_slot();
        let summary = state.step(&arrivals);
        pipeline.observe(&mut state, &summary);
        peaks.push(summary.peak_occupancy);
        occupancy.push(state.occupancy());
    }

    Ok(score(cfg, &scenario, &state, pipeline, occupancy, &peaks))
}

fn score(
    cfg: &ScenarioConfig,
    scenario: &Scenario,
    state: &InterfaceState,
    pipeline: DefensePipeline,
    occupancy: Vec<u64>,
    peaks: &[u64],
) -> RunOutcome {
    let kind = |id: &SourceId| scenario.kind_of(*id);
    let identified = pipeline.identified().clone();
    let escalated = pipeline.escalated().to_vec();

    let correctly_identified_attackers =
        identified.iter().filter(|id| kind(id) == Some(SourceKind::Attacker)).count() as u64;
    let legal_by_identification =
        identified.iter().filter(|id| kind(id) == Some(SourceKind::Legal)).count() as u64;
    let legal_by_escalation = escalated
        .iter()
        .filter(|id| !identified.contains(id) && kind(id) == Some(SourceKind::Legal))
        .count() as u64;
    let attackers_filtered = state
        .filter_set()
        .iter()
        .filter(|id| kind(id) == Some(SourceKind::Attacker))
        .count() as u64;

    let (max_slot, max_level) = peaks
        .iter()
        .enumerate()
        .fold((0usize, 0u64), |best, (i, &v)| if v > best.1 { (i, v) } else { best });

    let t_star = scenario.t_star;
    let has_attack = scenario.has_attack();
    let first_trigger = pipeline.triggers().first().map(|t| t.t_hat);
    let detection_time_after_tstar = first_trigger.map(|t| t as i64 - t_star as i64);

    let restore_time_after_tstar = if has_attack {
        let from = first_trigger.map_or(t_star, |t| t.max(t_star));
        settle_slot(&occupancy, from as usize, cfg.l1, cfg.w_s).map(|s| s as u64 - t_star)
    } else {
        None
    };

    let first_reaching = |level: u64| {
        peaks
            .iter()
            .enumerate()
            .skip(t_star as usize)
            .find(|(_, &v)| v >= level)
            .map(|(i, _)| i as u64 - t_star)
    };
    let (l1_fill_after_tstar, full_fill_after_tstar) = if has_attack {
        (first_reaching(cfg.l1), first_reaching(cfg.capacity()))
    } else {
        (None, None)
    };

    RunOutcome {
        metrics: RunMetrics {
            correctly_identified_attackers,
            filtered_legal_clients: legal_by_identification + legal_by_escalation,
            dropped_packets: state.buffer().dropped_total(),
            max_buffer_level: max_level,
            max_buffer_slot: max_slot as u64,
            restore_time_after_tstar,
            detection_time_after_tstar,
        },
        seed: cfg.seed,
        t_star,
        has_attack,
        firings: pipeline.firings(),
        triggers: pipeline.triggers().to_vec(),
        identified,
        escalated,
        restorations: pipeline.restorations().to_vec(),
        legal_filtered_by_identification: legal_by_identification,
        attackers_filtered,
        occupancy,
        l1_fill_after_tstar,
        full_fill_after_tstar,
        log: pipeline.into_log(),
    }
}

/// First slot `s >= from` whose occupancy and that of the next `hold - 1`
/// slots all stay at or below `l1`.
pub fn settle_slot(occupancy: &[u64], from: usize, l1: u64, hold: usize) -> Option<usize> {
    let hold = hold.max(1);
    let mut run = 0;
    for (i, &occ) in occupancy.iter().enumerate().skip(from) {
        if occ <= l1 {
            run += 1;
            if run == hold {
                return Some(i + 1 - hold);
            }
        } else {
            run = 0;
        }
    }
    None
}

/// Earliest first-firing among the given detectors.
pub fn earliest_firing(firings: &DetectorFirings, kinds: &[DetectorKind]) -> Option<u64> {
    kinds.iter().filter_map(|k| firings.get(*k)).min()
}
