use crate::error::DefenseError;
use crate::interface::{InterfaceState, SourceRates};
use crate::traffic::SourceId;

/// Conservative drain-time bound `d * L2 / (mu - lambda)`, rounded up.
pub fn compute_timeout(l2: u64, mu: f64, lambda_long_lagged: f64, d: f64) -> Result<u64, DefenseError> {
    if mu <= lambda_long_lagged {
        return Err(DefenseError::ServiceRateInsufficient { mu, lambda: lambda_long_lagged });
    }
    Ok((d * l2 as f64 / (mu - lambda_long_lagged)).ceil() as u64)
}

/// Highest-rate source not yet filtered, ties by ascending id.
pub fn next_escalation(rates: &SourceRates, is_filtered: impl Fn(SourceId) -> bool) -> Option<SourceId> {
    rates
        .iter()
        .filter(|(id, _)| !is_filtered(*id))
        .min_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)))
        .map(|(id, _)| id)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestorationOutcome {
    pub restored: bool,
    /// Slots waited in total.
    pub t_out_used: u64,
    pub extra_filtered: Vec<SourceId>,
}

/// What the monitor wants done after observing a slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RestorationStep {
    Restored,
    Waiting,
    /// The timeout elapsed with occupancy still above L1.
    Escalate,
}

/// Slot-driven restoration check: occupancy must come back to L1 within
/// `t_out`; every expiry calls for one more source to be filtered and
/// re-arms the timeout.
#[derive(Debug, Clone)]
pub struct RestorationMonitor {
    t_out: u64,
    started: u64,
    deadline: u64,
    escalated: Vec<SourceId>,
    last_slot: u64,
}

impl RestorationMonitor {
    pub fn new(start_slot: u64, t_out: u64) -> Self {
        RestorationMonitor {
            t_out,
            started: start_slot,
            deadline: start_slot + t_out,
            escalated: Vec::new(),
            last_slot: start_slot,
        }
    }

    pub fn t_out(&self) -> u64 {
        self.t_out
    }

    pub fn observe(&mut self, slot: u64, occupancy: u64, l1: u64) -> RestorationStep {
        self.last_slot = slot;
        if occupancy <= l1 {
            RestorationStep::Restored
        } else if slot >= self.deadline {
            RestorationStep::Escalate
        } else {
            RestorationStep::Waiting
        }
    }

    /// Records a filtered source and restarts the timeout from `slot`.
    pub fn escalated(&mut self, slot: u64, id: SourceId) {
        self.escalated.push(id);
        self.deadline = slot + self.t_out;
    }

    pub fn outcome(&self, restored: bool) -> RestorationOutcome {
        RestorationOutcome {
            restored,
            t_out_used: self.last_slot - self.started,
            extra_filtered: self.escalated.clone(),
        }
    }
}

/// Drives a [`RestorationMonitor`] against `state`. `advance` runs one more
/// slot of traffic through the interface and returns `false` once no slots
/// remain. Escalation picks from `rates`.
pub fn verify_restoration(
    state: &mut InterfaceState,
    t_out: u64,
    rates: &SourceRates,
    mut advance: impl FnMut(&mut InterfaceState) -> bool,
) -> Result<RestorationOutcome, DefenseError> {
    let start = state.current_slot().unwrap_or(0);
    let mut monitor = RestorationMonitor::new(start, t_out);
    let mut slot = start;
    loop {
        match monitor.observe(slot, state.occupancy(), state.l1()) {
            RestorationStep::Restored => return Ok(monitor.outcome(true)),
            RestorationStep::Waiting => {}
            RestorationStep::Escalate => match next_escalation(rates, |id| state.is_filtered(id)) {
                Some(id) => {
                    state.purge_and_filter(&[id]);
                    monitor.escalated(slot, id);
                    if state.occupancy() <= state.l1() {
                        return Ok(monitor.outcome(true));
                    }
                }
                None => {
                    return Err(DefenseError::RestorationFailed {
                        occupancy: state.occupancy(),
                        l1: state.l1(),
                    })
                }
            },
        }
        if !advance(state) {
            return Ok(monitor.outcome(false));
        }
        slot = state.current_slot().unwrap_or(slot + 1);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::traffic::SlotArrivals;

    #[test]
    fn timeout_examples() {
        assert_eq!(compute_timeout(3000, 1500.0, 1000.0, 1.0).unwrap(), 6);
        assert_eq!(compute_timeout(0, 1500.0, 1000.0, 1.0).unwrap(), 0);
        assert_eq!(compute_timeout(160, 8.0, 5.0, 1.0).unwrap(), 54);
        assert!(compute_timeout(10, 5.0, 5.0, 1.0).is_err());
        assert!(compute_timeout(10, 5.0, 7.0, 1.0).is_err());
    }

    #[test]
    fn escalation_order() {
        let rates: SourceRates =
            [(SourceId(4), 1.0), (SourceId(2), 3.0), (SourceId(7), 3.0)].into_iter().collect();
        assert_eq!(next_escalation(&rates, |_| false), Some(SourceId(2)));
        assert_eq!(next_escalation(&rates, |id| id == SourceId(2)), Some(SourceId(7)));
        assert_eq!(next_escalation(&rates, |_| true), None);
    }

    #[test]
    fn already_restored() {
        let mut s = InterfaceState::new(40, 100, 8, 2, 4, 10);
        s.admit_slot(&SlotArrivals::new(0, vec![(SourceId(1), 10)]));
        let out = verify_restoration(&mut s, 5, &SourceRates::default(), |_| true).unwrap();
        assert_eq!(out, RestorationOutcome { restored: true, t_out_used: 0, extra_filtered: vec![] });
    }

    #[test]
    fn escalates_the_heavy_source() {
        // source 1 floods at 20/slot against mu = 8, source 2 is light
        let mut s = InterfaceState::new(10, 100, 8, 2, 4, 10);
        let mut slot = 0;
        let flood = |slot| SlotArrivals::new(slot, vec![(SourceId(1), 20), (SourceId(2), 2)]);
        s.step(&flood(slot));
        let rates: SourceRates = [(SourceId(1), 20.0), (SourceId(2), 2.0)].into_iter().collect();
        let out = verify_restoration(&mut s, 3, &rates, |st| {
            slot += 1;
            st.step(&flood(slot));
            slot < 50
        })
        .unwrap();
        assert!(out.restored);
        assert_eq!(out.extra_filtered, vec![SourceId(1)]);
        assert!(s.occupancy() <= s.l1());
    }

    #[test]
    fn runs_out_of_sources() {
        let mut s = InterfaceState::new(1, 100, 0, 2, 4, 10);
        s.admit_slot(&SlotArrivals::new(0, vec![(SourceId(1), 10)]));
        let rates: SourceRates = [(SourceId(1), 10.0)].into_iter().collect();
        // nothing is ever serviced, and the one source is already queued
        let err = verify_restoration(&mut s, 0, &SourceRates::default(), |_| true).unwrap_err();
        assert!(matches!(err, DefenseError::RestorationFailed { .. }));
        let out = verify_restoration(&mut s, 0, &rates, |_| true).unwrap();
        assert!(out.restored);
    }
}
