//! Legal and attacking traffic sources and per-slot Poisson arrivals.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::config::ScenarioConfig;
use crate::error::StatsError;

/// Opaque source identifier, standing in for a network address.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SourceId(pub u32);

impl std::fmt::Display for SourceId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SourceKind {
    Legal,
    Attacker,
}

/// One traffic origin, active on slots `[active_from, active_until)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Source {
    pub id: SourceId,
    pub kind: SourceKind,
    /// Mean packets per slot.
    pub rate: f64,
    pub active_from: u64,
    pub active_until: u64,
}

impl Source {
    pub fn is_active(&self, slot: u64) -> bool {
        self.active_from <= slot && slot < self.active_until
    }
}

/// Packet counts that arrived during one slot. `per_source` is sorted by id
/// and lists only sources that sent at least one packet.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SlotArrivals {
    pub slot: u64,
    pub per_source: Vec<(SourceId, u32)>,
    pub total: u64,
}

impl SlotArrivals {
    pub fn new(slot: u64, mut per_source: Vec<(SourceId, u32)>) -> Self {
        per_source.retain(|(_, n)| *n > 0);
        per_source.sort_by_key(|(id, _)| *id);
        let total = per_source.iter().map(|(_, n)| u64::from(*n)).sum();
        SlotArrivals { slot, per_source, total }
    }

    pub fn empty(slot: u64) -> Self {
        SlotArrivals { slot, per_source: Vec::new(), total: 0 }
    }
}

/// Poisson sampler that also accepts a zero rate.
#[derive(Debug, Clone, Copy)]
pub enum PoissonSampler {
    Zero,
    Positive(Poisson<f64>),
}

impl PoissonSampler {
    pub fn new(rate: f64) -> Result<Self, StatsError> {
        if rate == 0.0 {
            return Ok(PoissonSampler::Zero);
        }
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(StatsError::Domain(format!("poisson rate {rate} must be >= 0")));
        }
        Poisson::new(rate)
            .map(PoissonSampler::Positive)
            .map_err(|e| StatsError::Domain(e.to_string()))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        match self {
            PoissonSampler::Zero => 0,
            PoissonSampler::Positive(p) => p.sample(rng) as u32,
        }
    }
}

/// One Poisson(`rate`) draw.
pub fn poisson_draw<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> Result<u32, StatsError> {
    Ok(PoissonSampler::new(rate)?.sample(rng))
}

/// Independent Poisson counts for every source active at `slot`.
pub fn generate_slot<R: Rng + ?Sized>(
    sources: &[Source],
    slot: u64,
    rng: &mut R,
) -> Result<SlotArrivals, StatsError> {
    let mut per_source = Vec::new();
    for s in sources.iter().filter(|s| s.is_active(slot)) {
        let n = poisson_draw(s.rate, rng)?;
        if n > 0 {
            per_source.push((s.id, n));
        }
    }
    Ok(SlotArrivals::new(slot, per_source))
}

/// Sources plus the ground-truth attack timeline of one run.
#[derive(Debug, Clone)]
pub struct Scenario {
    /// Sorted by id.
    pub sources: Vec<Source>,
    /// True attack start.
    pub t_star: u64,
    pub attack_len: u64,
    pub total_slots: u64,
}

impl Scenario {
    pub fn has_attack(&self) -> bool {
        self.attack_len > 0 && self.sources.iter().any(|s| s.kind == SourceKind::Attacker)
    }

    pub fn kind_of(&self, id: SourceId) -> Option<SourceKind> {
        self.sources.binary_search_by_key(&id, |s| s.id).ok().map(|i| self.sources[i].kind)
    }

    pub fn attacker_ids(&self) -> impl Iterator<Item = SourceId> + '_ {
        self.sources.iter().filter(|s| s.kind == SourceKind::Attacker).map(|s| s.id)
    }
}

const ID_STREAM: u64 = 1;
const ARRIVAL_STREAM: u64 = 0;

/// Builds the source population. Ids are a seeded shuffle of `0..N+A`, so id
/// order carries no information about a source's kind.
pub fn build_scenario(cfg: &ScenarioConfig) -> Scenario {
    let total_slots = cfg.total_slots();
    let t_star = cfg.normal_lead;
    let attack_end = t_star + cfg.attack_len;
    let population = cfg.n_legal + cfg.n_attackers;

    let mut ids: Vec<u32> = (0..population).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(ID_STREAM);
    ids.shuffle(&mut rng);

    let mut sources: Vec<Source> = ids
        .into_iter()
        .enumerate()
        .map(|(i, id)| {
            if (i as u32) < cfg.n_legal {
                Source {
                    id: SourceId(id),
                    kind: SourceKind::Legal,
                    rate: cfg.lambda_n,
                    active_from: 0,
                    active_until: total_slots,
                }
            } else {
                Source {
                    id: SourceId(id),
                    kind: SourceKind::Attacker,
                    rate: cfg.lambda_a,
                    active_from: t_star,
                    active_until: attack_end,
                }
            }
        })
        .collect();
    sources.sort_by_key(|s| s.id);

    Scenario { sources, t_star, attack_len: cfg.attack_len, total_slots }
}

/// Seeded slot-by-slot arrival stream for one scenario.
pub struct TrafficGenerator {
    sources: Vec<Source>,
    samplers: Vec<PoissonSampler>,
    rng: ChaCha8Rng,
    next_slot: u64,
}

impl TrafficGenerator {
    pub fn new(scenario: &Scenario, seed: u64) -> Result<Self, StatsError> {
        let samplers = scenario
            .sources
            .iter()
            .map(|s| PoissonSampler::new(s.rate))
            .collect::<Result<_, _>>()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(ARRIVAL_STREAM);
        Ok(TrafficGenerator { sources: scenario.sources.clone(), samplers, rng, next_slot: 0 })
    }

    pub fn next_slot(&mut self) -> SlotArrivals {
        let slot = self.next_slot;
        self.next_slot += 1;
        let mut per_source = Vec::new();
        for (s, sampler) in self.sources.iter().zip(&self.samplers) {
            if s.is_active(slot) {
                let n = sampler.sample(&mut self.rng);
                if n > 0 {
                    per_source.push((s.id, n));
                }
            }
        }
        let total = per_source.iter().map(|(_, n)| u64::from(*n)).sum();
        SlotArrivals { slot, per_source, total }
    }
}

impl Iterator for TrafficGenerator {
    type Item = SlotArrivals;

    fn next(&mut self) -> Option<SlotArrivals> {
        Some(self.next_slot())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn zero_rate_is_always_zero() {
        let mut r = rng(3);
        assert!((0..1000).all(|_| poisson_draw(0.0, &mut r).unwrap() == 0));
        assert!(poisson_draw(-1.0, &mut r).is_err());
        assert!(poisson_draw(f64::NAN, &mut r).is_err());
    }

    #[test]
    fn small_rate_mean() {
        // sd of the mean is sqrt(0.1 / 1e6) = 3.2e-4; the band is 3 sd wide.
        let mut r = rng(11);
        let sampler = PoissonSampler::new(0.1).unwrap();
        let n = 1_000_000;
        let sum: u64 = (0..n).map(|_| u64::from(sampler.sample(&mut r))).sum();
        let mean = sum as f64 / n as f64;
        assert!((0.099..=0.101).contains(&mean), "{mean}");
    }

    #[test]
    fn draws_are_deterministic() {
        let a: Vec<u32> = {
            let mut r = rng(5);
            (0..100).map(|_| poisson_draw(3.5, &mut r).unwrap()).collect()
        };
        let b: Vec<u32> = {
            let mut r = rng(5);
            (0..100).map(|_| poisson_draw(3.5, &mut r).unwrap()).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn no_active_sources_means_no_arrivals() {
        let cfg = ScenarioConfig::simulation_two();
        let sc = build_scenario(&ScenarioConfig { n_legal: 0, ..cfg });
        // attackers only, queried before the attack
        let arr = generate_slot(&sc.sources, 10, &mut rng(1)).unwrap();
        assert_eq!(arr.total, 0);
        assert!(arr.per_source.is_empty());
    }

    #[test]
    fn simulation_one_slot_totals() {
        let sc = build_scenario(&ScenarioConfig::simulation_one());
        let mut r = rng(2);
        // Expected 1000 (sd ~32) in normal slots, 3000 (sd ~45) under attack.
        let normal: u64 = (0..20).map(|_| generate_slot(&sc.sources, 10, &mut r).unwrap().total).sum();
        let attack: u64 =
            (0..20).map(|_| generate_slot(&sc.sources, 150, &mut r).unwrap().total).sum();
        assert!((normal as f64 / 20.0 - 1000.0).abs() < 40.0);
        assert!((attack as f64 / 20.0 - 3000.0).abs() < 50.0);
    }

    #[test]
    fn scenario_timeline() {
        let cfg = ScenarioConfig::simulation_one();
        let sc = build_scenario(&cfg);
        assert_eq!(sc.sources.len(), 15_000);
        assert_eq!(sc.t_star, 100);
        assert_eq!(sc.total_slots, 300);
        let attackers: Vec<&Source> =
            sc.sources.iter().filter(|s| s.kind == SourceKind::Attacker).collect();
        assert_eq!(attackers.len(), 5000);
        assert!(attackers.iter().all(|s| !s.is_active(99) && s.is_active(100) && s.is_active(199) && !s.is_active(200)));
        assert!(sc.sources.windows(2).all(|w| w[0].id < w[1].id));
        assert!(sc.has_attack());

        let quiet = build_scenario(&ScenarioConfig { attack_len: 0, ..ScenarioConfig::simulation_two() });
        assert!(!quiet.has_attack());
        assert!(quiet
            .sources
            .iter()
            .filter(|s| s.kind == SourceKind::Attacker)
            .all(|s| (0..quiet.total_slots).all(|t| !s.is_active(t))));
    }

    #[test]
    fn generator_matches_generate_slot_semantics() {
        let cfg = ScenarioConfig::simulation_two();
        let sc = build_scenario(&cfg);
        let mut g = TrafficGenerator::new(&sc, 9).unwrap();
        for slot in 0..300 {
            let a = g.next_slot();
            assert_eq!(a.slot, slot);
            assert_eq!(a.total, a.per_source.iter().map(|(_, n)| u64::from(*n)).sum::<u64>());
            for (id, _) in &a.per_source {
                let s = &sc.sources[sc.sources.binary_search_by_key(id, |s| s.id).unwrap()];
                assert!(s.is_active(slot));
            }
        }
    }
}
