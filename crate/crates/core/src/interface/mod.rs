//! Server-side interface module: buffer, sliding windows, per-source
//! accounting and the installed filter set.
//!
//! Each slot runs in a fixed order: [`InterfaceState::admit_slot`], then
//! [`InterfaceState::service_slot`], then [`InterfaceState::update_windows`].
//! [`InterfaceState::step`] does all three.

mod buffer;
mod ledger;
mod windows;

use std::collections::HashSet;

pub use buffer::{Buffer, QueuedPacket};
pub use ledger::{SourceLedger, SourceRates};
pub use windows::WindowState;

use crate::config::ScenarioConfig;
use crate::error::DefenseError;
use crate::traffic::{SlotArrivals, SourceId};

/// Result of admitting one slot's arrivals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AdmitOutcome {
    pub enqueued: u64,
    pub dropped: u64,
    /// Discarded by the filter rule before reaching the buffer.
    pub filtered: u64,
}

/// Everything that happened to the interface during one slot.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SlotSummary {
    pub slot: u64,
    pub admit: AdmitOutcome,
    /// Occupancy right after admission, the in-slot peak.
    pub peak_occupancy: u64,
    pub processed: u64,
    /// Occupancy at the end of the slot.
    pub occupancy: u64,
    pub lambda_short: Option<f64>,
    pub lambda_long: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct InterfaceState {
    buffer: Buffer,
    windows: WindowState,
    ledger: SourceLedger,
    filter: HashSet<SourceId>,
    mu: u64,
    last_slot: Option<u64>,
}

impl InterfaceState {
    pub fn new(l1: u64, l2: u64, mu: u64, w_s: usize, w_l: usize, retain: usize) -> Self {
        InterfaceState {
            buffer: Buffer::new(l1, l2),
            windows: WindowState::new(w_s, w_l, retain),
            ledger: SourceLedger::new(retain),
            filter: HashSet::new(),
            mu,
            last_slot: None,
        }
    }

    /// Retains enough history for the lagged long window plus one
    /// measurement horizon.
    pub fn from_config(cfg: &ScenarioConfig) -> Self {
        let retain = cfg.c + cfg.w_l + cfg.w_s.max(cfg.delta_hat) + 1;
        Self::new(cfg.l1, cfg.l2, cfg.mu, cfg.w_s, cfg.w_l, retain)
    }

    pub fn buffer(&self) -> &Buffer {
        &self.buffer
    }

    pub fn windows(&self) -> &WindowState {
        &self.windows
    }

    pub fn ledger(&self) -> &SourceLedger {
        &self.ledger
    }

    pub fn filter_set(&self) -> &HashSet<SourceId> {
        &self.filter
    }

    pub fn is_filtered(&self, id: SourceId) -> bool {
        self.filter.contains(&id)
    }

    pub fn occupancy(&self) -> u64 {
        self.buffer.occupancy()
    }

    pub fn l1(&self) -> u64 {
        self.buffer.l1()
    }

    pub fn l2(&self) -> u64 {
        self.buffer.l2()
    }

    pub fn mu(&self) -> u64 {
        self.mu
    }

    /// Slot most recently admitted.
    pub fn current_slot(&self) -> Option<u64> {
        self.last_slot
    }

    /// Filters, then tail-drops whatever does not fit. Sources are admitted
    /// in id order. Every arrival is recorded in the ledger.
    pub fn admit_slot(&mut self, arrivals: &SlotArrivals) -> AdmitOutcome {
        let mut out = AdmitOutcome::default();
        for &(id, n) in &arrivals.per_source {
            if self.filter.contains(&id) {
                out.filtered += u64::from(n);
                continue;
            }
            let dropped = self.buffer.push(id, n, arrivals.slot);
            out.dropped += dropped;
            out.enqueued += u64::from(n) - dropped;
        }
        self.ledger.record(arrivals.slot, &arrivals.per_source);
        self.last_slot = Some(arrivals.slot);
        out
    }

    /// Serves up to `mu` packets.
    pub fn service_slot(&mut self) -> u64 {
        self.buffer.service(self.mu, |_| {})
    }

    /// Like [`service_slot`](Self::service_slot), reporting each packet.
    pub fn service_slot_with(&mut self, on_packet: impl FnMut(QueuedPacket)) -> u64 {
        self.buffer.service(self.mu, on_packet)
    }

    pub fn update_windows(&mut self, total: u64) -> (Option<f64>, Option<f64>) {
        self.windows.push(total)
    }

    /// Admit, service, then advance the windows with the offered
    /// (post-filter) traffic.
    pub fn step(&mut self, arrivals: &SlotArrivals) -> SlotSummary {
        let admit = self.admit_slot(arrivals);
        let peak_occupancy = self.occupancy();
        let processed = self.service_slot();
        let (lambda_short, lambda_long) = self.update_windows(arrivals.total - admit.filtered);
        SlotSummary {
            slot: arrivals.slot,
            admit,
            peak_occupancy,
            processed,
            occupancy: self.occupancy(),
            lambda_short,
            lambda_long,
        }
    }

    pub fn lambda_long_at_lag(&self, lag: usize) -> Result<f64, DefenseError> {
        self.windows.lambda_long_at_lag(lag)
    }

    pub fn per_source_rates(&self, from_slot: u64, to_slot: u64) -> Result<SourceRates, DefenseError> {
        self.ledger.per_source_rates(from_slot, to_slot)
    }

    /// Installs filter rules for `ids` and deletes their queued packets.
    pub fn purge_and_filter<'a>(&mut self, ids: impl IntoIterator<Item = &'a SourceId>) -> u64 {
        let ids: HashSet<SourceId> = ids.into_iter().copied().collect();
        let purged = self.buffer.purge(&ids);
        self.filter.extend(ids);
        purged
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrivals(slot: u64, v: &[(u32, u32)]) -> SlotArrivals {
        SlotArrivals::new(slot, v.iter().map(|&(id, n)| (SourceId(id), n)).collect())
    }

    #[test]
    fn admit_into_empty_buffer() {
        let mut s = InterfaceState::new(40, 3000, 1500, 2, 4, 20);
        let out = s.admit_slot(&arrivals(0, &[(1, 60), (2, 40)]));
        assert_eq!(out, AdmitOutcome { enqueued: 100, dropped: 0, filtered: 0 });
    }

    #[test]
    fn admit_into_full_buffer() {
        let mut s = InterfaceState::new(40, 3000, 1500, 2, 4, 20);
        s.admit_slot(&arrivals(0, &[(1, 3040)]));
        let out = s.admit_slot(&arrivals(1, &[(2, 5), (3, 1)]));
        assert_eq!(out, AdmitOutcome { enqueued: 0, dropped: 6, filtered: 0 });
        assert_eq!(s.buffer().dropped_total(), 6);
    }

    #[test]
    fn filtered_sources_never_enqueue() {
        let mut s = InterfaceState::new(40, 100, 10, 2, 4, 20);
        s.purge_and_filter(&[SourceId(2)]);
        let out = s.admit_slot(&arrivals(0, &[(1, 3), (2, 4), (3, 5)]));
        assert_eq!(out, AdmitOutcome { enqueued: 8, dropped: 0, filtered: 4 });
        assert!(s.buffer().packets().all(|p| p.source != SourceId(2)));
    }

    #[test]
    fn service_examples() {
        let mut s = InterfaceState::new(40, 3000, 1500, 2, 4, 20);
        assert_eq!(s.service_slot(), 0);
        s.admit_slot(&arrivals(0, &[(1, 2000)]));
        assert_eq!(s.service_slot(), 1500);
        assert_eq!(s.occupancy(), 500);
    }

    #[test]
    fn purge_examples() {
        let mut s = InterfaceState::new(40, 100, 10, 2, 4, 20);
        s.admit_slot(&arrivals(0, &[(1, 30), (2, 5)]));
        assert_eq!(s.purge_and_filter(&[]), 0);
        assert_eq!(s.occupancy(), 35);
        assert_eq!(s.purge_and_filter(&[SourceId(1)]), 30);
        assert_eq!(s.purge_and_filter(&[SourceId(1)]), 0);
        assert_eq!(s.occupancy(), 5);
        assert_eq!(s.filter_set().len(), 1);
    }

    #[test]
    fn step_order_and_window_input() {
        let mut s = InterfaceState::new(5, 5, 3, 1, 2, 10);
        s.purge_and_filter(&[SourceId(9)]);
        let sum = s.step(&arrivals(0, &[(1, 8), (9, 100)]));
        assert_eq!(sum.peak_occupancy, 8);
        assert_eq!(sum.processed, 3);
        assert_eq!(sum.occupancy, 5);
        assert_eq!(sum.lambda_short, Some(8.0));
        assert_eq!(sum.admit.filtered, 100);
    }
}
