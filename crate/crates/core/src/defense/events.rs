//! Line-oriented event log: `slot<TAB>kind<TAB>key=value<TAB>...`.

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    /// First time a detector's condition held.
    DetectorFired,
    /// An enabled detector triggered the pipeline.
    AttackDetected,
    NormalityGateFailed,
    Identification,
    Filter,
    Purge,
    Timeout,
    TimeoutUnavailable,
    Escalate,
    Restored,
    RestorationFailed,
}

impl EventKind {
    const ALL: [EventKind; 11] = [
        EventKind::DetectorFired,
        EventKind::AttackDetected,
        EventKind::NormalityGateFailed,
        EventKind::Identification,
        EventKind::Filter,
        EventKind::Purge,
        EventKind::Timeout,
        EventKind::TimeoutUnavailable,
        EventKind::Escalate,
        EventKind::Restored,
        EventKind::RestorationFailed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::DetectorFired => "detector_fired",
            EventKind::AttackDetected => "attack_detected",
            EventKind::NormalityGateFailed => "normality_gate_failed",
            EventKind::Identification => "identification",
            EventKind::Filter => "filter",
            EventKind::Purge => "purge",
            EventKind::Timeout => "timeout",
            EventKind::TimeoutUnavailable => "timeout_unavailable",
            EventKind::Escalate => "escalate",
            EventKind::Restored => "restored",
            EventKind::RestorationFailed => "restoration_failed",
        }
    }
}

impl FromStr for EventKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EventKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown event kind `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub slot: u64,
    pub kind: EventKind,
    pub fields: Vec<(String, String)>,
}

impl Event {
    pub fn new(slot: u64, kind: EventKind) -> Self {
        Event { slot, kind, fields: Vec::new() }
    }

    pub fn with(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}", self.slot, self.kind.as_str())?;
        for (k, v) in &self.fields {
            write!(f, "\t{k}={v}")?;
        }
        Ok(())
    }
}

impl FromStr for Event {
    type Err = String;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let mut parts = line.split('\t');
        let slot = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| format!("bad slot in {line:?}"))?;
        let kind = parts.next().ok_or_else(|| format!("missing kind in {line:?}"))?.parse()?;
        let fields = parts
            .map(|p| {
                p.split_once('=')
                    .map(|(k, v)| (k.to_string(), v.to_string()))
                    .ok_or_else(|| format!("bad field {p:?}"))
            })
            .collect::<Result<_, _>>()?;
        Ok(Event { slot, kind, fields })
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EventLog {
    events: Vec<Event>,
}

impl EventLog {
    pub fn push(&mut self, event: Event) {
        self.events.push(event);
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn of_kind(&self, kind: EventKind) -> impl Iterator<Item = &Event> {
        self.events.iter().filter(move |e| e.kind == kind)
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let events = text.lines().filter(|l| !l.is_empty()).map(str::parse).collect::<Result<_, _>>()?;
        Ok(EventLog { events })
    }
}
