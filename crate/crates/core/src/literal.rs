//! Typed data values attached to individuals through data properties.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiteralError {
    #[error("`{0}` is not a valid literal")]
    Malformed(String),
    #[error("string literal contains a line break")]
    LineBreak,
    #[error("unknown datatype `{0}`")]
    UnknownDatatype(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Datatype {
    String,
    Integer,
    Decimal,
    Boolean,
}

impl Datatype {
    pub fn keyword(self) -> &'static str {
        match self {
            Datatype::String => "string",
            Datatype::Integer => "integer",
            Datatype::Decimal => "decimal",
            Datatype::Boolean => "boolean",
        }
    }
}

impl FromStr for Datatype {
    type Err = LiteralError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "string" => Ok(Datatype::String),
            "integer" => Ok(Datatype::Integer),
            "decimal" => Ok(Datatype::Decimal),
            "boolean" => Ok(Datatype::Boolean),
            other => Err(LiteralError::UnknownDatatype(other.to_string())),
        }
    }
}

impl fmt::Display for Datatype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// A decimal number kept in its lexical form (`-?digits.digits`).
///
/// Equality is lexical so that `1.50` and `1.5` stay distinct axioms;
/// use [`Decimal::value`] for numeric comparison.
#[derive(Debug, Clone)]
pub struct Decimal {
    lexical: String,
    value: f64,
}

impl Decimal {
    pub fn parse(s: &str) -> Result<Self, LiteralError> {
        let digits = s.strip_prefix('-').unwrap_or(s);
        let (int, frac) = digits
            .split_once('.')
            .ok_or_else(|| LiteralError::Malformed(s.to_string()))?;
        let all_digits = |p: &str| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit());
        if !all_digits(int) || !all_digits(frac) {
            return Err(LiteralError::Malformed(s.to_string()));
        }
        let value = s
            .parse::<f64>()
            .map_err(|_| LiteralError::Malformed(s.to_string()))?;
        Ok(Self {
            lexical: s.to_string(),
            value,
        })
    }

    /// Shortest decimal rendering of a finite float, always with a fraction part.
    pub fn from_f64(v: f64) -> Result<Self, LiteralError> {
        if !v.is_finite() {
            return Err(LiteralError::Malformed(v.to_string()));
        }
        let mut s = format!("{v:?}");
        if s.contains('e') || s.contains('E') {
            s = format!("{v}");
        }
        if !s.contains('.') {
            s.push_str(".0");
        }
        Self::parse(&s)
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn value(&self) -> f64 {
        self.value
    }
}

impl PartialEq for Decimal {
    fn eq(&self, other: &Self) -> bool {
        self.lexical == other.lexical
    }
}

impl Eq for Decimal {}

impl std::hash::Hash for Decimal {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.lexical.hash(state);
    }
}

impl Ord for Decimal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then_with(|| self.lexical.cmp(&other.lexical))
    }
}

impl PartialOrd for Decimal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Literal {
    Boolean(bool),
    Integer(i64),
    Decimal(Decimal),
    String(String),
}

impl Literal {
    pub fn string(s: impl Into<String>) -> Result<Self, LiteralError> {
        let s = s.into();
        if s.contains(['\n', '\r']) {
            return Err(LiteralError::LineBreak);
        }
        Ok(Literal::String(s))
    }

    pub fn decimal(s: &str) -> Result<Self, LiteralError> {
        Decimal::parse(s).map(Literal::Decimal)
    }

    pub fn datatype(&self) -> Datatype {
        match self {
            Literal::Boolean(_) => Datatype::Boolean,
            Literal::Integer(_) => Datatype::Integer,
            Literal::Decimal(_) => Datatype::Decimal,
            Literal::String(_) => Datatype::String,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Literal::String(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match self {
            Literal::Integer(i) => Some(*i),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Literal::Boolean(b) => Some(*b),
            _ => None,
        }
    }

    /// Numeric view of integer and decimal literals.
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Literal::Integer(i) => Some(*i as f64),
            Literal::Decimal(d) => Some(d.value()),
            _ => None,
        }
    }

    /// Checks invariants that the constructors enforce but direct variant
    /// construction can bypass.
    pub fn validate(&self) -> Result<(), LiteralError> {
        match self {
            Literal::String(s) if s.contains(['\n', '\r']) => Err(LiteralError::LineBreak),
            _ => Ok(()),
        }
    }

    /// Parses one literal token in the ontology text syntax.
    pub fn parse_token(token: &str) -> Result<Self, LiteralError> {
        let malformed = || LiteralError::Malformed(token.to_string());
        match token {
            "true" => return Ok(Literal::Boolean(true)),
            "false" => return Ok(Literal::Boolean(false)),
            _ => {}
        }
        if let Some(body) = token.strip_prefix('"') {
            let body = body.strip_suffix('"').ok_or_else(malformed)?;
            let mut out = String::with_capacity(body.len());
            let mut chars = body.chars();
            while let Some(c) = chars.next() {
                match c {
                    '\\' => match chars.next() {
                        Some(e @ ('"' | '\\')) => out.push(e),
                        _ => return Err(malformed()),
                    },
                    '"' => return Err(malformed()),
                    c => out.push(c),
                }
            }
            return Literal::string(out);
        }
        if token.contains('.') {
            return Literal::decimal(token);
        }
        let digits = token.strip_prefix('-').unwrap_or(token);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        let value: i64 = token.parse().map_err(|_| malformed())?;
        // only canonical integer spellings are accepted, so the lexical form survives
        if value.to_string() != token {
            return Err(malformed());
        }
        Ok(Literal::Integer(value))
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Boolean(b) => write!(f, "{b}"),
            Literal::Integer(i) => write!(f, "{i}"),
            Literal::Decimal(d) => f.write_str(d.lexical()),
            Literal::String(s) => {
                f.write_str("\"")?;
                for c in s.chars() {
                    if c == '"' || c == '\\' {
                        f.write_str("\\")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str("\"")
            }
        }
    }
}
