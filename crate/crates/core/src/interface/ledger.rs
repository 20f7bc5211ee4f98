use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use crate::error::DefenseError;
use crate::traffic::SourceId;

/// Mean packets per slot for each source that sent anything in the measured
/// interval. Sources absent from the map were silent (rate 0).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SourceRates {
    rates: BTreeMap<SourceId, f64>,
}

impl SourceRates {
    pub fn get(&self, id: SourceId) -> f64 {
        self.rates.get(&id).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (SourceId, f64)> + '_ {
        self.rates.iter().map(|(id, r)| (*id, *r))
    }

    pub fn ids(&self) -> impl Iterator<Item = SourceId> + '_ {
        self.rates.keys().copied()
    }

    pub fn total(&self) -> f64 {
        self.rates.values().sum()
    }

    pub fn retain(&mut self, mut keep: impl FnMut(SourceId) -> bool) {
        self.rates.retain(|id, _| keep(*id));
    }
}

impl FromIterator<(SourceId, f64)> for SourceRates {
    fn from_iter<I: IntoIterator<Item = (SourceId, f64)>>(iter: I) -> Self {
        SourceRates { rates: iter.into_iter().collect() }
    }
}

/// Per-source arrival accounting, keyed by source address.
#[derive(Debug, Clone)]
pub struct SourceLedger {
    retain: usize,
    /// Newest last: `(slot, arrivals sorted by id)`.
    records: VecDeque<(u64, Vec<(SourceId, u32)>)>,
    cumulative: HashMap<SourceId, u64>,
    first_seen: HashMap<SourceId, u64>,
}

impl SourceLedger {
    pub fn new(retain: usize) -> Self {
        SourceLedger {
            retain: retain.max(1),
            records: VecDeque::new(),
            cumulative: HashMap::new(),
            first_seen: HashMap::new(),
        }
    }

    /// Records every packet a source attempted to send in `slot`.
    pub fn record(&mut self, slot: u64, per_source: &[(SourceId, u32)]) {
        for &(id, n) in per_source {
            *self.cumulative.entry(id).or_insert(0) += u64::from(n);
            self.first_seen.entry(id).or_insert(slot);
        }
        self.records.push_back((slot, per_source.to_vec()));
        while self.records.len() > self.retain {
            self.records.pop_front();
        }
    }

    pub fn cumulative(&self, id: SourceId) -> u64 {
        self.cumulative.get(&id).copied().unwrap_or(0)
    }

    pub fn first_seen(&self, id: SourceId) -> Option<u64> {
        self.first_seen.get(&id).copied()
    }

    /// Oldest and newest retained slot.
    pub fn span(&self) -> Option<(u64, u64)> {
        Some((self.records.front()?.0, self.records.back()?.0))
    }

    /// Mean packets per slot per source over `[from_slot, to_slot)`.
    pub fn per_source_rates(&self, from_slot: u64, to_slot: u64) -> Result<SourceRates, DefenseError> {
        let invalid = DefenseError::InvalidRange { from: from_slot, to: to_slot };
        let (oldest, newest) = self.span().ok_or(invalid.clone())?;
        if from_slot >= to_slot || from_slot < oldest || to_slot > newest + 1 {
            return Err(invalid);
        }
        let mut counts: BTreeMap<SourceId, u64> = BTreeMap::new();
        for (slot, arrivals) in &self.records {
            if (from_slot..to_slot).contains(slot) {
                for &(id, n) in arrivals {
                    *counts.entry(id).or_insert(0) += u64::from(n);
                }
            }
        }
        let len = (to_slot - from_slot) as f64;
        Ok(counts.into_iter().map(|(id, n)| (id, n as f64 / len)).collect())
    }

    /// Sources that sent at least one packet before `slot`.
    pub fn seen_before(&self, slot: u64) -> HashSet<SourceId> {
        self.first_seen.iter().filter(|(_, &s)| s < slot).map(|(id, _)| *id).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ledger_with(slots: &[&[(u32, u32)]]) -> SourceLedger {
        let mut l = SourceLedger::new(100);
        for (t, arr) in slots.iter().enumerate() {
            let v: Vec<_> = arr.iter().map(|&(id, n)| (SourceId(id), n)).collect();
            l.record(t as u64, &v);
        }
        l
    }

    #[test]
    fn silent_source_has_zero_rate() {
        let l = ledger_with(&[&[(1, 2)], &[(1, 4)], &[(2, 1)]]);
        let r = l.per_source_rates(0, 2).unwrap();
        assert_eq!(r.get(SourceId(1)), 3.0);
        assert_eq!(r.get(SourceId(2)), 0.0);
        assert_eq!(r.len(), 1);
    }

    #[test]
    fn rates_partition_the_aggregate() {
        let l = ledger_with(&[&[(1, 2), (2, 5)], &[(3, 1)], &[(1, 1), (2, 2), (3, 3)]]);
        let r = l.per_source_rates(0, 3).unwrap();
        assert!((r.total() - 14.0 / 3.0).abs() < 1e-12);
        assert_eq!(l.cumulative(SourceId(2)), 7);
        assert_eq!(l.first_seen(SourceId(3)), Some(1));
        assert_eq!(l.seen_before(1), [SourceId(1), SourceId(2)].into());
    }

    #[test]
    fn invalid_ranges() {
        let l = ledger_with(&[&[(1, 1)], &[(1, 1)]]);
        assert!(l.per_source_rates(1, 1).is_err());
        assert!(l.per_source_rates(1, 0).is_err());
        assert!(l.per_source_rates(0, 3).is_err());
        assert!(SourceLedger::new(4).per_source_rates(0, 1).is_err());
    }

    #[test]
    fn retention_drops_old_records() {
        let mut l = SourceLedger::new(2);
        for t in 0..5 {
            l.record(t, &[(SourceId(9), 1)]);
        }
        assert_eq!(l.span(), Some((3, 4)));
        assert!(l.per_source_rates(2, 4).is_err());
        assert_eq!(l.cumulative(SourceId(9)), 5);
    }
}
