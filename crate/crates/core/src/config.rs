//! Scenario parameters and the flat `key = value` config format.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{ConfigError, Error};
use crate::stats::LeveneCenter;

/// The three attack detectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DetectorKind {
    /// Occupancy reached L1.
    BufferFull,
    /// Short-window average jumped above `(1 + r)` times the long one.
    Jump,
    /// MPAR exceedance confirmed by t / Levene tests.
    Statistical,
}

impl DetectorKind {
    pub const ALL: [DetectorKind; 3] =
        [DetectorKind::BufferFull, DetectorKind::Jump, DetectorKind::Statistical];

    pub fn name(self) -> &'static str {
        match self {
            DetectorKind::BufferFull => "buffer",
            DetectorKind::Jump => "jump",
            DetectorKind::Statistical => "stat",
        }
    }
}

impl FromStr for DetectorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "buffer" | "buffer_full" => Ok(DetectorKind::BufferFull),
            "jump" => Ok(DetectorKind::Jump),
            "stat" | "statistical" => Ok(DetectorKind::Statistical),
            other => Err(format!("unknown detector `{other}`")),
        }
    }
}

/// Which detectors may trigger the pipeline. All three always observe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetectorSet {
    pub buffer_full: bool,
    pub jump: bool,
    pub statistical: bool,
}

impl DetectorSet {
    pub const ALL: DetectorSet = DetectorSet { buffer_full: true, jump: true, statistical: true };

    pub fn none() -> Self {
        DetectorSet { buffer_full: false, jump: false, statistical: false }
    }

    pub fn contains(&self, kind: DetectorKind) -> bool {
        match kind {
            DetectorKind::BufferFull => self.buffer_full,
            DetectorKind::Jump => self.jump,
            DetectorKind::Statistical => self.statistical,
        }
    }

    pub fn insert(&mut self, kind: DetectorKind) {
        match kind {
            DetectorKind::BufferFull => self.buffer_full = true,
            DetectorKind::Jump => self.jump = true,
            DetectorKind::Statistical => self.statistical = true,
        }
    }

    pub fn is_empty(&self) -> bool {
        !(self.buffer_full || self.jump || self.statistical)
    }
}

impl Default for DetectorSet {
    fn default() -> Self {
        DetectorSet::ALL
    }
}

impl FromStr for DetectorSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut set = DetectorSet::none();
        for part in s.split(',').filter(|p| !p.trim().is_empty()) {
            set.insert(part.parse()?);
        }
        if set.is_empty() {
            return Err("empty detector list".into());
        }
        Ok(set)
    }
}

impl std::fmt::Display for DetectorSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names: Vec<&str> =
            DetectorKind::ALL.iter().filter(|k| self.contains(**k)).map(|k| k.name()).collect();
        f.write_str(&names.join(","))
    }
}

/// Source identification method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IdentificationMethod {
    /// Highest-rate prefix fitting the attack-rate budget.
    #[default]
    RankedSubset,
    /// Same, after dropping sources already seen before `t_hat - c`.
    ExcludePrior,
}

impl IdentificationMethod {
    pub fn name(self) -> &'static str {
        match self {
            IdentificationMethod::RankedSubset => "ranked_subset",
            IdentificationMethod::ExcludePrior => "exclude_prior",
        }
    }
}

impl FromStr for IdentificationMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ranked_subset" | "ranked" => Ok(IdentificationMethod::RankedSubset),
            "exclude_prior" => Ok(IdentificationMethod::ExcludePrior),
            other => Err(format!("unknown identification method `{other}`")),
        }
    }
}

/// When the statistical detector runs its tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StatGate {
    /// Only on slots where an approximate detector's condition holds.
    #[default]
    Approximate,
    /// On every slot whose short-window mean exceeds the MPAR threshold.
    Mpar,
}

impl StatGate {
    pub fn name(self) -> &'static str {
        match self {
            StatGate::Approximate => "approximate",
            StatGate::Mpar => "mpar",
        }
    }
}

impl FromStr for StatGate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "approximate" => Ok(StatGate::Approximate),
            "mpar" => Ok(StatGate::Mpar),
            other => Err(format!("unknown stat gate `{other}`")),
        }
    }
}

/// Full parameterization of one run. Rates are per slot; a slot is one second.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub n_legal: u32,
    pub n_attackers: u32,
    pub lambda_n: f64,
    pub lambda_a: f64,
    /// Packets serviced per slot.
    pub mu: u64,
    pub l1: u64,
    pub l2: u64,
    pub w_s: usize,
    pub w_l: usize,
    /// Jump tolerance.
    pub r: f64,
    /// Lookback, in slots, for the last trusted long-window average.
    pub c: usize,
    /// Per-source measurement horizon after detection.
    pub delta_hat: usize,
    /// Timeout safety factor.
    pub d: f64,
    pub alpha: f64,
    /// Confidence level parameter of the MPAR bound.
    pub mpar_alpha: f64,
    pub normal_lead: u64,
    pub attack_len: u64,
    pub normal_tail: u64,
    pub seed: u64,
    pub detectors: DetectorSet,
    pub identification: IdentificationMethod,
    pub levene_center: LeveneCenter,
    pub stat_gate: StatGate,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig::simulation_one()
    }
}

impl ScenarioConfig {
    /// Large system: 10000 legal clients, 5000 attackers.
    pub fn simulation_one() -> Self {
        ScenarioConfig {
            n_legal: 10_000,
            n_attackers: 5_000,
            lambda_n: 0.1,
            lambda_a: 0.4,
            mu: 1500,
            l1: 40,
            l2: 30_000,
            w_s: 10,
            w_l: 45,
            r: 0.6,
            c: 45,
            delta_hat: 10,
            d: 1.0,
            alpha: 0.05,
            mpar_alpha: 0.025,
            normal_lead: 100,
            attack_len: 100,
            normal_tail: 100,
            seed: 1,
            detectors: DetectorSet::ALL,
            identification: IdentificationMethod::RankedSubset,
            levene_center: LeveneCenter::Mean,
            stat_gate: StatGate::Approximate,
        }
    }

    /// Medium system: 50 legal clients, 50 attackers.
    pub fn simulation_two() -> Self {
        ScenarioConfig {
            n_legal: 50,
            n_attackers: 50,
            lambda_n: 0.1,
            lambda_a: 0.2,
            mu: 8,
            l1: 40,
            l2: 160,
            identification: IdentificationMethod::ExcludePrior,
            ..ScenarioConfig::simulation_one()
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "sim1" | "simulation1" => Some(Self::simulation_one()),
            "sim2" | "simulation2" => Some(Self::simulation_two()),
            _ => None,
        }
    }

    /// Total buffer `L = L1 + L2`.
    pub fn capacity(&self) -> u64 {
        self.l1 + self.l2
    }

    pub fn total_slots(&self) -> u64 {
        self.normal_lead + self.attack_len + self.normal_tail
    }

    /// `Q = lambda_a / lambda_n`, when defined.
    pub fn attack_ratio(&self) -> Option<f64> {
        (self.lambda_n > 0.0).then(|| self.lambda_a / self.lambda_n)
    }

    /// Sets the short window and keeps the measurement horizon equal to it.
    pub fn with_short_window(mut self, w_s: usize) -> Self {
        self.w_s = w_s;
        self.delta_hat = w_s;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |msg: String| Err(ConfigError::Invalid(msg));
        if !(self.lambda_n >= 0.0 && self.lambda_n.is_finite()) {
            return bad(format!("lambda_n must be >= 0, got {}", self.lambda_n));
        }
        if !(self.lambda_a >= 0.0 && self.lambda_a.is_finite()) {
            return bad(format!("lambda_a must be >= 0, got {}", self.lambda_a));
        }
        if self.mu == 0 {
            return bad("mu must be > 0".into());
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if !(self.mpar_alpha > 0.0 && self.mpar_alpha < 1.0) {
            return bad(format!("mpar_alpha must lie in (0, 1), got {}", self.mpar_alpha));
        }
        if !(self.r > 0.0 && self.r.is_finite()) {
            return bad(format!("r must be > 0, got {}", self.r));
        }
        if !(self.d > 0.0 && self.d.is_finite()) {
            return bad(format!("d must be > 0, got {}", self.d));
        }
        for (name, v) in [("w_s", self.w_s), ("w_l", self.w_l), ("c", self.c), ("delta_hat", self.delta_hat)] {
            if v == 0 {
                return bad(format!("{name} must be >= 1"));
            }
        }
        if self.total_slots() == 0 {
            return bad("run has no slots".into());
        }
        if self.detectors.is_empty() {
            return bad("no detectors enabled".into());
        }
        Ok(())
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, Error> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Ok(Self::parse_str(&text)?)
    }

    /// Parses a config file. Keys not present keep the `sim1` preset defaults,
    /// except that an explicit `preset = sim2` line (which must come first)
    /// switches the base. `delta_hat` follows `w_s` unless set explicitly.
    pub fn parse_str(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = ScenarioConfig::default();
        let mut delta_hat_set = false;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| ConfigError::Syntax { line: line_no, text: raw.to_string() })?;
            if key == "delta_hat" {
                delta_hat_set = true;
            }
            cfg.set(key, value).map_err(|e| match e {
                SetError::UnknownKey => ConfigError::UnknownKey { line: line_no, key: key.into() },
                SetError::BadValue => ConfigError::BadValue {
                    line: line_no,
                    key: key.into(),
                    value: value.into(),
                },
            })?;
        }
        if !delta_hat_set {
            cfg.delta_hat = cfg.w_s;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Assigns one field by its config key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), SetError> {
        fn p<T: FromStr>(v: &str) -> Result<T, SetError> {
            v.parse().map_err(|_| SetError::BadValue)
        }
        match key {
            "preset" => *self = ScenarioConfig::preset(value).ok_or(SetError::BadValue)?,
            "n_legal" => self.n_legal = p(value)?,
            "n_attackers" => self.n_attackers = p(value)?,
            "lambda_n" => self.lambda_n = p(value)?,
            "lambda_a" => self.lambda_a = p(value)?,
            "mu" => self.mu = p(value)?,
            "l1" => self.l1 = p(value)?,
            "l2" => self.l2 = p(value)?,
            "w_s" => self.w_s = p(value)?,
            "w_l" => self.w_l = p(value)?,
            "r" => self.r = p(value)?,
            "c" => self.c = p(value)?,
            "delta_hat" => self.delta_hat = p(value)?,
            "d" => self.d = p(value)?,
            "alpha" => self.alpha = p(value)?,
            "mpar_alpha" => self.mpar_alpha = p(value)?,
            "normal_lead" => self.normal_lead = p(value)?,
            "attack_len" => self.attack_len = p(value)?,
            "normal_tail" => self.normal_tail = p(value)?,
            "seed" => self.seed = p(value)?,
            "detectors" => self.detectors = p(value)?,
            "identification" => self.identification = p(value)?,
            "levene_center" => self.levene_center = p(value)?,
            "stat_gate" => self.stat_gate = p(value)?,
            _ => return Err(SetError::UnknownKey),
        }
        Ok(())
    }

    /// Renders the config in the same `key = value` format `parse_str` reads.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        let center = match self.levene_center {
            LeveneCenter::Mean => "mean",
            LeveneCenter::Median => "median",
        };
        let pairs: [(&str, String); 23] = [
            ("n_legal", self.n_legal.to_string()),
            ("n_attackers", self.n_attackers.to_string()),
            ("lambda_n", format!("{:?}", self.lambda_n)),
            ("lambda_a", format!("{:?}", self.lambda_a)),
            ("mu", self.mu.to_string()),
            ("l1", self.l1.to_string()),
            ("l2", self.l2.to_string()),
            ("w_s", self.w_s.to_string()),
            ("w_l", self.w_l.to_string()),
            ("r", format!("{:?}", self.r)),
            ("c", self.c.to_string()),
            ("delta_hat", self.delta_hat.to_string()),
            ("d", format!("{:?}", self.d)),
            ("alpha", format!("{:?}", self.alpha)),
            ("mpar_alpha", format!("{:?}", self.mpar_alpha)),
            ("normal_lead", self.normal_lead.to_string()),
            ("attack_len", self.attack_len.to_string()),
            ("normal_tail", self.normal_tail.to_string()),
            ("seed", self.seed.to_string()),
            ("detectors", self.detectors.to_string()),
            ("identification", self.identification.name().to_string()),
            ("levene_center", center.to_string()),
            ("stat_gate", self.stat_gate.name().to_string()),
        ];
        for (k, v) in pairs {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetError {
    UnknownKey,
    BadValue,
}
