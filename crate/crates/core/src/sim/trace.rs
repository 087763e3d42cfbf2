//! Trace records and their JSON-lines form.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Serialize, Serializer};

use crate::id::EntityId;
use crate::literal::Literal;

use super::scenario::{literal_to_json, AssistanceConfig};

struct JsonLiteral<'a>(&'a Literal);

impl Serialize for JsonLiteral<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        literal_to_json(self.0, s)
    }
}

fn payload_json<S: Serializer>(payload: &BTreeMap<String, Literal>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_map(payload.iter().map(|(k, v)| (k, JsonLiteral(v))))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRecord {
    pub t: i64,
    pub emitter: EntityId,
    pub kind: String,
    #[serde(serialize_with = "payload_json")]
    pub payload: BTreeMap<String, Literal>,
}

impl TraceRecord {
    pub fn get(&self, key: &str) -> Option<&Literal> {
        self.payload.get(key)
    }

    /// String payload field.
    pub fn text(&self, key: &str) -> Option<&str> {
        self.get(key).and_then(Literal::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceHeader {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub scenario: Option<String>,
    pub config: AssistanceConfig,
}

impl TraceHeader {
    pub fn new(seed: u64, scenario: Option<String>, config: AssistanceConfig) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            scenario,
            config,
        }
    }
}

/// Header line followed by one line per record, each LF-terminated.
pub fn to_jsonl(header: &TraceHeader, records: &[TraceRecord]) -> String {
    #[derive(Serialize)]
    struct Head<'a> {
        header: &'a TraceHeader,
    }
    let mut out = serde_json::to_string(&Head { header }).expect("header serializes");
    out.push('\n');
    for r in records {
        let line = serde_json::to_string(r).expect("trace record serializes");
        let _ = writeln!(out, "{line}");
    }
    out
}

/// Builder for payload maps.
#[derive(Debug, Default)]
pub(crate) struct Payload(BTreeMap<String, Literal>);

impl Payload {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn id(mut self, key: &str, id: &EntityId) -> Self {
        self.0.insert(key.into(), Literal::String(id.to_string()));
        self
    }

    pub fn text(mut self, key: &str, v: impl Into<String>) -> Self {
        let v: String = v.into();
        self.0.insert(key.into(), Literal::String(v.replace(['\n', '\r'], " ")));
        self
    }

    pub fn int(mut self, key: &str, v: i64) -> Self {
        self.0.insert(key.into(), Literal::Integer(v));
        self
    }

    pub fn lit(mut self, key: &str, v: Literal) -> Self {
        self.0.insert(key.into(), v);
        self
    }

    pub fn flag(mut self, key: &str, v: bool) -> Self {
        self.0.insert(key.into(), Literal::Boolean(v));
        self
    }

    pub fn build(self) -> BTreeMap<String, Literal> {
        self.0
    }
}
