//! Prefixed entity identifiers (`prefix:local`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdError {
    #[error("identifier `{0}` is not of the form prefix:local")]
    MissingSeparator(String),
    #[error("identifier `{0}` has an empty component")]
    EmptyComponent(String),
    #[error("identifier `{0}` contains a character outside printable ASCII or an extra ':'")]
    BadCharacter(String),
}

/// A class, property or individual name.
///
/// Ordering is byte-lexicographic on the rendered `prefix:local` form; every
/// sorted output in the crate relies on it.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EntityId {
    rendered: String,
    split: usize,
}

fn valid_component(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_graphic() && b != b':' && b != b'"')
}

impl EntityId {
    pub fn new(prefix: &str, local: &str) -> Result<Self, IdError> {
        let rendered = format!("{prefix}:{local}");
        if prefix.is_empty() || local.is_empty() {
            return Err(IdError::EmptyComponent(rendered));
        }
        if !valid_component(prefix) || !valid_component(local) {
            return Err(IdError::BadCharacter(rendered));
        }
        Ok(Self {
            split: prefix.len(),
            rendered,
        })
    }

    pub fn prefix(&self) -> &str {
        &self.rendered[..self.split]
    }

    pub fn local(&self) -> &str {
        &self.rendered[self.split + 1..]
    }

    pub fn as_str(&self) -> &str {
        &self.rendered
    }

    /// Same prefix, different local name.
    pub fn sibling(&self, local: &str) -> Result<Self, IdError> {
        Self::new(self.prefix(), local)
    }
}

impl FromStr for EntityId {
    type Err = IdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (prefix, local) = s
            .split_once(':')
            .ok_or_else(|| IdError::MissingSeparator(s.to_string()))?;
        Self::new(prefix, local)
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.rendered)
    }
}

impl fmt::Debug for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EntityId({})", self.rendered)
    }
}

impl Serialize for EntityId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.rendered)
    }
}

impl<'de> Deserialize<'de> for EntityId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
