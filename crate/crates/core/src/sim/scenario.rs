//! Scenario files: the world to load, behavior configuration, deduction
//! rules, timestamped events and the expectations checked after the run.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::compose::CompositeSpec;
use crate::id::EntityId;
use crate::kb::KnowledgeBase;
use crate::literal::{Decimal, Literal};
use crate::text::SourceSpan;

use super::rules::DeductionRule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EscalationMode {
    /// Emergency services only when no caregiver answers.
    Fallback,
    /// Emergency services alerted together with the caregiver.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AssistanceConfig {
    pub cancel_window_ms: i64,
    pub caregiver_ack_window_ms: i64,
    pub escalation_mode: EscalationMode,
}

impl Default for AssistanceConfig {
    fn default() -> Self {
        Self {
            cancel_window_ms: 30_000,
            caregiver_ack_window_ms: 60_000,
            escalation_mode: EscalationMode::Fallback,
        }
    }
}

impl AssistanceConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.cancel_window_ms <= 0 || self.caregiver_ack_window_ms <= 0 {
            return Err("windows must be positive".into());
        }
        Ok(())
    }
}

fn literal_from_json<'de, D: Deserializer<'de>>(d: D) -> Result<Literal, D::Error> {
    use serde::de::Error;
    match serde_json::Value::deserialize(d)? {
        serde_json::Value::Bool(b) => Ok(Literal::Boolean(b)),
        serde_json::Value::Number(n) => match n.as_i64() {
            Some(i) if !n.to_string().contains('.') => Ok(Literal::Integer(i)),
            _ => {
                let f = n.as_f64().ok_or_else(|| D::Error::custom("number out of range"))?;
                Decimal::from_f64(f).map(Literal::Decimal).map_err(D::Error::custom)
            }
        },
        serde_json::Value::String(s) => Literal::string(s).map_err(D::Error::custom),
        other => Err(D::Error::custom(format!("unsupported literal {other}"))),
    }
}

/// Literals as plain JSON values.
pub(crate) fn literal_to_json<S: Serializer>(lit: &Literal, s: S) -> Result<S::Ok, S::Error> {
    match lit {
        Literal::Boolean(b) => s.serialize_bool(*b),
        Literal::Integer(i) => s.serialize_i64(*i),
        Literal::Decimal(d) => s.serialize_f64(d.value()),
        Literal::String(v) => s.serialize_str(v),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", deny_unknown_fields)]
pub enum EventKind {
    SensorReading {
        device: EntityId,
        capability: EntityId,
        #[serde(deserialize_with = "literal_from_json", serialize_with = "literal_to_json")]
        value: Literal,
    },
    DeviceFailure {
        device: EntityId,
    },
    DeviceRecovery {
        device: EntityId,
    },
    ButtonPress {
        device: EntityId,
        user: EntityId,
    },
    CaregiverAck {
        user: EntityId,
    },
    AgendaEntry {
        user: EntityId,
        label: String,
        t_start: i64,
        t_end: i64,
    },
    Message {
        from: EntityId,
        to: EntityId,
        kind: String,
        #[serde(default)]
        payload: String,
    },
}

impl EventKind {
    pub fn name(&self) -> &'static str {
        match self {
            EventKind::SensorReading { .. } => "SensorReading",
            EventKind::DeviceFailure { .. } => "DeviceFailure",
            EventKind::DeviceRecovery { .. } => "DeviceRecovery",
            EventKind::ButtonPress { .. } => "ButtonPress",
            EventKind::CaregiverAck { .. } => "CaregiverAck",
            EventKind::AgendaEntry { .. } => "AgendaEntry",
            EventKind::Message { .. } => "Message",
        }
    }

    fn referenced(&self) -> Vec<&EntityId> {
        match self {
            EventKind::SensorReading { device, capability, .. } => vec![device, capability],
            EventKind::DeviceFailure { device } | EventKind::DeviceRecovery { device } => vec![device],
            EventKind::ButtonPress { device, user } => vec![device, user],
            EventKind::CaregiverAck { user } | EventKind::AgendaEntry { user, .. } => vec![user],
            EventKind::Message { from, to, .. } => vec![from, to],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioEvent {
    pub t: i64,
    #[serde(flatten)]
    pub kind: EventKind,
}

/// One check on the finished trace. Exactly one of `present` / `absent`
/// is set; `t`, `count` and `emitter` narrow what is counted.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub present: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub absent: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub emitter: Option<EntityId>,
}

impl Expectation {
    pub fn present(kind: &str) -> Self {
        Self {
            present: Some(kind.into()),
            ..Default::default()
        }
    }

    pub fn absent(kind: &str) -> Self {
        Self {
            absent: Some(kind.into()),
            ..Default::default()
        }
    }

    pub fn at(mut self, t: i64) -> Self {
        self.t = Some(t);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: Option<String>,
    /// Path of the world `.amb`, relative to the scenario file.
    pub world: String,
    #[serde(default)]
    pub config: AssistanceConfig,
    #[serde(default)]
    pub rules: Vec<DeductionRule>,
    pub events: Vec<ScenarioEvent>,
    #[serde(default)]
    pub expect: Vec<Expectation>,
    /// Virtual composites kept assembled while the world changes.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub composites: Vec<CompositeSpec>,
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{span}: {message}")]
    Json { span: SourceSpan, message: String },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        serde_json::from_str(text).map_err(|e| ScenarioError::Json {
            span: SourceSpan {
                line: e.line(),
                column: e.column(),
            },
            message: e.to_string(),
        })
    }

    /// Reads a scenario and resolves its world path.
    pub fn from_file(path: &Path) -> Result<(Self, PathBuf), ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let scenario = Self::from_json(&text)?;
        let world = path.parent().unwrap_or(Path::new(".")).join(&scenario.world);
        Ok((scenario, world))
    }

    /// Checks what parsing cannot: time bounds, rule sanity, expectation
    /// shape and that every referenced entity exists in `kb`.
    pub fn validate(&self, kb: &KnowledgeBase) -> Result<(), ScenarioError> {
        let invalid = |path: String, message: String| ScenarioError::Invalid { path, message };
        self.config
            .validate()
            .map_err(|m| invalid("config".into(), m))?;
        for (i, rule) in self.rules.iter().enumerate() {
            rule.validate().map_err(|m| invalid(format!("rules[{i}]"), m))?;
        }
        for (i, ev) in self.events.iter().enumerate() {
            let path = format!("events[{i}]");
            if ev.t < 0 {
                return Err(invalid(path, "negative time".into()));
            }
            if let EventKind::AgendaEntry { t_start, t_end, .. } = &ev.kind {
                if t_start > t_end {
                    return Err(invalid(path, "t_start after t_end".into()));
                }
            }
            if let Some(missing) = ev.kind.referenced().into_iter().find(|id| kb.kind_of(id).is_none()) {
                return Err(invalid(path, format!("{missing} does not exist in the world")));
            }
        }
        for (i, exp) in self.expect.iter().enumerate() {
            if exp.present.is_some() == exp.absent.is_some() {
                return Err(invalid(
                    format!("expect[{i}]"),
                    "exactly one of `present` and `absent` is required".into(),
                ));
            }
        }
        Ok(())
    }
}
