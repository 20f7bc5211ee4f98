use std::collections::{HashSet, VecDeque};

use crate::traffic::SourceId;

/// A queued unit-size query, tagged with its origin and admission slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueuedPacket {
    pub source: SourceId,
    pub admitted: u64,
}

/// Two-tier FIFO buffer: L1 for normal operation, L2 as measurement headroom.
#[derive(Debug, Clone)]
pub struct Buffer {
    queue: VecDeque<QueuedPacket>,
    l1: u64,
    l2: u64,
    dropped_total: u64,
}

impl Buffer {
    pub fn new(l1: u64, l2: u64) -> Self {
        Buffer { queue: VecDeque::new(), l1, l2, dropped_total: 0 }
    }

    pub fn l1(&self) -> u64 {
        self.l1
    }

    pub fn l2(&self) -> u64 {
        self.l2
    }

    pub fn capacity(&self) -> u64 {
        self.l1 + self.l2
    }

    pub fn occupancy(&self) -> u64 {
        self.queue.len() as u64
    }

    pub fn dropped_total(&self) -> u64 {
        self.dropped_total
    }

    pub fn free(&self) -> u64 {
        self.capacity() - self.occupancy()
    }

    /// Enqueues up to `count` packets from `source`; returns how many were
    /// dropped at the tail.
    pub fn push(&mut self, source: SourceId, count: u32, slot: u64) -> u64 {
        let accepted = u64::from(count).min(self.free());
        for _ in 0..accepted {
            self.queue.push_back(QueuedPacket { source, admitted: slot });
        }
        let dropped = u64::from(count) - accepted;
        self.dropped_total += dropped;
        dropped
    }

    /// Dequeues up to `mu` packets in FIFO order.
    pub fn service(&mut self, mu: u64, mut on_packet: impl FnMut(QueuedPacket)) -> u64 {
        let n = mu.min(self.occupancy());
        for p in self.queue.drain(..n as usize) {
            on_packet(p);
        }
        n
    }

    /// Removes every queued packet from one of `ids`.
    pub fn purge(&mut self, ids: &HashSet<SourceId>) -> u64 {
        if ids.is_empty() {
            return 0;
        }
        let before = self.queue.len();
        self.queue.retain(|p| !ids.contains(&p.source));
        (before - self.queue.len()) as u64
    }

    pub fn packets(&self) -> impl Iterator<Item = &QueuedPacket> {
        self.queue.iter()
    }
}
