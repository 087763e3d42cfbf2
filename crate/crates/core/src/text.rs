//! Line-oriented text format for ontology documents (`.amb`).
//!
//! ```text
//! prefix sc: http://ambient.local/smartcity#
//! class sc:Sensor
//! subclass sc:Sensor sc:Device
//! objprop sc:hasComponent domain sc:Hardware range sc:Hardware
//! dataprop sc:latitude domain sc:Location range decimal
//! ind sc:watch1 : sc:Sensor
//! rel sc:tv1 sc:hasComponent sc:screen1
//! val sc:point1 sc:latitude -21.1151
//! ```
//!
//! One statement per line. Blank lines and lines whose first non-blank
//! character is `#` are ignored. Tokens may be separated by any run of
//! spaces or tabs; canonical output uses single spaces, sorts prefixes by
//! name and statements by (kind rank, rendered text), and ends every line
//! with LF.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::id::EntityId;
use crate::kb::{Axiom, KbError, KnowledgeBase};
use crate::literal::{Datatype, Literal};

/// 1-based position of a token in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown keyword `{0}`")]
    UnknownKeyword(String),
    #[error("undeclared prefix `{0}`")]
    UndeclaredPrefix(String),
    #[error("duplicate statement")]
    DuplicateStatement,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {kind}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub kind: ParseErrorKind,
}

/// Every error found in a document plus the statements that did parse.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{} parse error(s), first at {}", errors.len(), errors[0])]
pub struct ParseErrors {
    pub errors: Vec<ParseError>,
    pub partial: Document,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("prefix `{0}` is not declared")]
    UndeclaredPrefix(String),
    #[error("prefix `{name}` already bound to {existing}")]
    PrefixConflict { name: String, existing: String },
    #[error("invalid prefix declaration `{0}`")]
    InvalidPrefix(String),
    #[error("duplicate statement `{0}`")]
    Duplicate(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("`{statement}`: {error}")]
pub struct LoadError {
    pub statement: String,
    pub error: KbError,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stats {
    pub axiom_count: usize,
    pub byte_size: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Document {
    prefixes: BTreeMap<String, String>,
    statements: Vec<Axiom>,
    seen: BTreeSet<Axiom>,
}

fn is_absolute_namespace(ns: &str) -> bool {
    let Some((scheme, rest)) = ns.split_once(':') else {
        return false;
    };
    let mut chars = scheme.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
        && !rest.is_empty()
        && ns.chars().all(|c| !c.is_whitespace())
}

impl Document {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare_prefix(&mut self, name: &str, namespace: &str) -> Result<(), DocumentError> {
        if EntityId::new(name, "x").is_err() || !is_absolute_namespace(namespace) {
            return Err(DocumentError::InvalidPrefix(format!("{name}: {namespace}")));
        }
        match self.prefixes.get(name) {
            Some(existing) if existing == namespace => {
                Err(DocumentError::Duplicate(format!("prefix {name}: {namespace}")))
            }
            Some(existing) => Err(DocumentError::PrefixConflict {
                name: name.to_string(),
                existing: existing.clone(),
            }),
            None => {
                self.prefixes
                    .insert(name.to_string(), namespace.to_string());
                Ok(())
            }
        }
    }

    pub fn push(&mut self, ax: Axiom) -> Result<(), DocumentError> {
        for id in ax.entities() {
            if !self.prefixes.contains_key(id.prefix()) {
                return Err(DocumentError::UndeclaredPrefix(id.prefix().to_string()));
            }
        }
        if self.seen.contains(&ax) {
            return Err(DocumentError::Duplicate(ax.to_string()));
        }
        self.seen.insert(ax.clone());
        self.statements.push(ax);
        Ok(())
    }

    pub fn prefixes(&self) -> &BTreeMap<String, String> {
        &self.prefixes
    }

    pub fn statements(&self) -> &[Axiom] {
        &self.statements
    }

    pub fn len(&self) -> usize {
        self.statements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.statements.is_empty()
    }

    pub fn contains(&self, ax: &Axiom) -> bool {
        self.seen.contains(ax)
    }

    /// Axiom set view, independent of statement order.
    pub fn axiom_set(&self) -> &BTreeSet<Axiom> {
        &self.seen
    }

    /// Unions another document into this one. Statements already present are
    /// skipped; prefixes must agree.
    pub fn merge(&mut self, other: &Document) -> Result<(), DocumentError> {
        for (name, ns) in &other.prefixes {
            match self.prefixes.get(name) {
                Some(existing) if existing != ns => {
                    return Err(DocumentError::PrefixConflict {
                        name: name.clone(),
                        existing: existing.clone(),
                    })
                }
                Some(_) => {}
                None => {
                    self.prefixes.insert(name.clone(), ns.clone());
                }
            }
        }
        for ax in &other.statements {
            if !self.seen.contains(ax) {
                self.push(ax.clone())?;
            }
        }
        Ok(())
    }

    /// Keeps only the statements matching `keep`.
    pub fn retain(&mut self, mut keep: impl FnMut(&Axiom) -> bool) {
        self.statements.retain(|ax| keep(ax));
        self.seen = self.statements.iter().cloned().collect();
    }

    /// Builds a document holding every axiom of `kb` under the given prefixes.
    pub fn from_kb(
        prefixes: &BTreeMap<String, String>,
        kb: &KnowledgeBase,
    ) -> Result<Self, DocumentError> {
        let mut doc = Document::new();
        for (name, ns) in prefixes {
            doc.declare_prefix(name, ns)?;
        }
        for ax in kb.axioms() {
            doc.push(ax.clone())?;
        }
        Ok(doc)
    }

    /// Inserts the statements into `kb` in kind-rank order, which is always
    /// a valid dependency order. Every failing statement is reported.
    pub fn load_into(&self, kb: &mut KnowledgeBase) -> Result<(), Vec<LoadError>> {
        let mut ordered: Vec<&Axiom> = self.statements.iter().collect();
        ordered.sort_by_key(|ax| ax.kind());
        let errors: Vec<LoadError> = ordered
            .into_iter()
            .filter_map(|ax| {
                kb.add_axiom(ax.clone()).err().map(|error| LoadError {
                    statement: ax.to_string(),
                    error,
                })
            })
            .collect();
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }

    pub fn to_kb(&self) -> Result<KnowledgeBase, Vec<LoadError>> {
        let mut kb = KnowledgeBase::new();
        self.load_into(&mut kb)?;
        Ok(kb)
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Result<Vec<Token<'_>>, (usize, String)> {
    let mut tokens = Vec::new();
    let mut chars = line.char_indices().peekable();
    let column_of = |byte: usize| line[..byte].chars().count() + 1;
    while let Some(&(start, c)) = chars.peek() {
        if c == ' ' || c == '\t' {
            chars.next();
            continue;
        }
        let mut end = line.len();
        if c == '"' {
            chars.next();
            let mut closed = false;
            while let Some((i, c)) = chars.next() {
                match c {
                    '\\' => {
                        chars.next();
                    }
                    '"' => {
                        end = i + 1;
                        closed = true;
                        break;
                    }
                    _ => {}
                }
            }
            if !closed {
                return Err((column_of(start), "unterminated string literal".into()));
            }
            if let Some(&(i, c)) = chars.peek() {
                if c != ' ' && c != '\t' {
                    return Err((column_of(i), "expected whitespace after string literal".into()));
                }
            }
        } else {
            while let Some(&(i, c)) = chars.peek() {
                if c == ' ' || c == '\t' {
                    end = i;
                    break;
                }
                chars.next();
            }
        }
        tokens.push(Token {
            text: &line[start..end],
            column: column_of(start),
        });
    }
    Ok(tokens)
}

const KEYWORDS: [&str; 8] = [
    "prefix", "class", "objprop", "dataprop", "subclass", "ind", "rel", "val",
];

struct LineParser<'a, 'p> {
    line: usize,
    tokens: Vec<Token<'a>>,
    prefixes: &'p BTreeMap<String, String>,
}

impl LineParser<'_, '_> {
    fn err(&self, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError {
            span: SourceSpan {
                line: self.line,
                column,
            },
            kind,
        }
    }

    fn syntax(&self, column: usize, msg: impl Into<String>) -> ParseError {
        self.err(column, ParseErrorKind::Syntax(msg.into()))
    }

    fn arity(&self, expected: usize, shape: &str) -> Result<(), ParseError> {
        let got = self.tokens.len() - 1;
        if got == expected {
            return Ok(());
        }
        let column = if got > expected {
            self.tokens[expected + 1].column
        } else {
            self.tokens[0].column
        };
        Err(self.syntax(
            column,
            format!("expected `{shape}` ({expected} argument(s)), found {got}"),
        ))
    }

    fn keyword(&self, idx: usize, kw: &str) -> Result<(), ParseError> {
        let tok = &self.tokens[idx];
        if tok.text == kw {
            Ok(())
        } else {
            Err(self.syntax(tok.column, format!("expected `{kw}`, found `{}`", tok.text)))
        }
    }

    fn id(&self, idx: usize) -> Result<EntityId, ParseError> {
        let tok = &self.tokens[idx];
        let id: EntityId = tok
            .text
            .parse()
            .map_err(|e| self.syntax(tok.column, format!("{e}")))?;
        if !self.prefixes.contains_key(id.prefix()) {
            return Err(self.err(
                tok.column,
                ParseErrorKind::UndeclaredPrefix(id.prefix().to_string()),
            ));
        }
        Ok(id)
    }

    fn statement(&self) -> Result<Axiom, ParseError> {
        let kw = &self.tokens[0];
        match kw.text {
            "class" => {
                self.arity(1, "class <id>")?;
                Ok(Axiom::ClassDecl(self.id(1)?))
            }
            "objprop" => {
                self.arity(5, "objprop <id> domain <id> range <id>")?;
                let prop = self.id(1)?;
                self.keyword(2, "domain")?;
                let domain = self.id(3)?;
                self.keyword(4, "range")?;
                Ok(Axiom::ObjPropDecl {
                    prop,
                    domain,
                    range: self.id(5)?,
                })
            }
            "dataprop" => {
                self.arity(5, "dataprop <id> domain <id> range <datatype>")?;
                let prop = self.id(1)?;
                self.keyword(2, "domain")?;
                let domain = self.id(3)?;
                self.keyword(4, "range")?;
                let range: Datatype = self.tokens[5]
                    .text
                    .parse()
                    .map_err(|e| self.syntax(self.tokens[5].column, format!("{e}")))?;
                Ok(Axiom::DataPropDecl {
                    prop,
                    domain,
                    range,
                })
            }
            "subclass" => {
                self.arity(2, "subclass <id> <id>")?;
                Ok(Axiom::SubClassOf {
                    sub: self.id(1)?,
                    sup: self.id(2)?,
                })
            }
            "ind" => {
                self.arity(3, "ind <id> : <id>")?;
                let individual = self.id(1)?;
                self.keyword(2, ":")?;
                Ok(Axiom::ClassAssertion {
                    individual,
                    class: self.id(3)?,
                })
            }
            "rel" => {
                self.arity(3, "rel <id> <id> <id>")?;
                Ok(Axiom::ObjPropAssertion {
                    subject: self.id(1)?,
                    prop: self.id(2)?,
                    object: self.id(3)?,
                })
            }
            "val" => {
                self.arity(3, "val <id> <id> <literal>")?;
                let subject = self.id(1)?;
                let prop = self.id(2)?;
                let tok = &self.tokens[3];
                let value = Literal::parse_token(tok.text)
                    .map_err(|e| self.syntax(tok.column, format!("{e}")))?;
                Ok(Axiom::DataPropAssertion {
                    subject,
                    prop,
                    value,
                })
            }
            other => Err(self.err(kw.column, ParseErrorKind::UnknownKeyword(other.to_string()))),
        }
    }
}

enum Line<'a> {
    Prefix(Vec<Token<'a>>),
    Statement(Vec<Token<'a>>),
}

/// Parses a UTF-8 document. All malformed lines are reported; the
/// remaining lines still parse into `ParseErrors::partial`.
pub fn parse(bytes: &[u8]) -> Result<Document, ParseErrors> {
    let mut errors = Vec::new();
    let mut lines = Vec::new();
    for (idx, raw) in bytes.split(|b| *b == b'\n').enumerate() {
        let line_no = idx + 1;
        let raw = raw.strip_suffix(b"\r").unwrap_or(raw);
        let line = match std::str::from_utf8(raw) {
            Ok(l) => l,
            Err(e) => {
                let column = String::from_utf8_lossy(&raw[..e.valid_up_to()]).chars().count() + 1;
                errors.push(ParseError {
                    span: SourceSpan {
                        line: line_no,
                        column,
                    },
                    kind: ParseErrorKind::Syntax("invalid UTF-8".into()),
                });
                continue;
            }
        };
        let trimmed = line.trim_start_matches([' ', '\t']);
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        match tokenize(line) {
            Err((column, msg)) => errors.push(ParseError {
                span: SourceSpan {
                    line: line_no,
                    column,
                },
                kind: ParseErrorKind::Syntax(msg),
            }),
            Ok(tokens) if tokens[0].text == "prefix" => lines.push((line_no, Line::Prefix(tokens))),
            Ok(tokens) => lines.push((line_no, Line::Statement(tokens))),
        }
    }

    // prefixes first so that declaration position does not matter
    let mut doc = Document::new();
    for (line_no, line) in &lines {
        let Line::Prefix(tokens) = line else { continue };
        let span = |column| SourceSpan {
            line: *line_no,
            column,
        };
        if tokens.len() != 3 {
            errors.push(ParseError {
                span: span(tokens[0].column),
                kind: ParseErrorKind::Syntax(format!(
                    "expected `prefix <name>: <namespace>`, found {} argument(s)",
                    tokens.len() - 1
                )),
            });
            continue;
        }
        let Some(name) = tokens[1].text.strip_suffix(':') else {
            errors.push(ParseError {
                span: span(tokens[1].column),
                kind: ParseErrorKind::Syntax("prefix name must end with ':'".into()),
            });
            continue;
        };
        match doc.declare_prefix(name, tokens[2].text) {
            Ok(()) => {}
            Err(DocumentError::Duplicate(_)) => errors.push(ParseError {
                span: span(tokens[0].column),
                kind: ParseErrorKind::DuplicateStatement,
            }),
            Err(e) => errors.push(ParseError {
                span: span(tokens[1].column),
                kind: ParseErrorKind::Syntax(e.to_string()),
            }),
        }
    }

    let prefixes = doc.prefixes.clone();
    for (line_no, line) in lines {
        let Line::Statement(tokens) = line else { continue };
        let column = tokens[0].column;
        let parser = LineParser {
            line: line_no,
            tokens,
            prefixes: &prefixes,
        };
        let result = parser.statement();
        match result {
            Ok(ax) => {
                if doc.push(ax).is_err() {
                    errors.push(parser.err(column, ParseErrorKind::DuplicateStatement));
                }
            }
            Err(e) => errors.push(e),
        }
    }

    if errors.is_empty() {
        Ok(doc)
    } else {
        errors.sort_by_key(|e| e.span);
        Err(ParseErrors {
            errors,
            partial: doc,
        })
    }
}

pub fn parse_str(text: &str) -> Result<Document, ParseErrors> {
    parse(text.as_bytes())
}

/// Canonical byte form.
pub fn serialize(doc: &Document) -> Vec<u8> {
    let mut lines: Vec<(usize, String)> = doc
        .statements
        .iter()
        .map(|ax| (ax.kind() as usize, ax.to_string()))
        .collect();
    lines.sort();
    let mut out = String::new();
    for (name, ns) in &doc.prefixes {
        out.push_str("prefix ");
        out.push_str(name);
        out.push_str(": ");
        out.push_str(ns);
        out.push('\n');
    }
    for (_, line) in lines {
        out.push_str(&line);
        out.push('\n');
    }
    out.into_bytes()
}

pub fn stats(doc: &Document) -> Stats {
    Stats {
        axiom_count: doc.len(),
        byte_size: serialize(doc).len(),
    }
}

/// Keyword list, exposed for diagnostics.
pub fn keywords() -> &'static [&'static str] {
    &KEYWORDS
}
