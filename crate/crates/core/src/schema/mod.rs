//! The shipped smart-city vocabulary and typed views over knowledge-base
//! individuals.
//!
//! A *world* is an `.amb` document holding individuals (devices, people,
//! agents, goals). [`load_world`] layers it over [`base_schema`] before
//! loading, so world files never repeat schema statements.

pub mod inventory;
pub mod records;
pub mod views;
pub mod vocab;

use std::path::Path;

use thiserror::Error;

use crate::id::EntityId;
use crate::kb::{EntityKind, KbError, KnowledgeBase};
use crate::text::{self, Document, DocumentError, LoadError, ParseErrors};

pub use inventory::DeviceInventory;
pub use records::*;
pub use views::*;
pub use vocab::sc;

const SMARTCITY: &str = include_str!("../../../../schema/smartcity.amb");

/// The curated schema document.
pub fn base_schema() -> Document {
    text::parse_str(SMARTCITY).expect("shipped schema parses")
}

/// The curated schema loaded into a fresh knowledge base.
pub fn base_kb() -> KnowledgeBase {
    base_schema().to_kb().expect("shipped schema loads")
}

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("{0} is not a hardware individual")]
    NotHardware(EntityId),
    #[error("{id} is not an instance of {expected}")]
    WrongClass { id: EntityId, expected: EntityId },
    #[error("malformed record {id}: {reason}")]
    MalformedRecord { id: EntityId, reason: String },
    #[error(transparent)]
    Kb(#[from] KbError),
}

impl SchemaError {
    pub(crate) fn malformed(id: &EntityId, reason: impl Into<String>) -> Self {
        SchemaError::MalformedRecord {
            id: id.clone(),
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum WorldError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {errors}")]
    Parse { path: String, errors: ParseErrors },
    #[error("world conflicts with the schema: {0}")]
    Document(#[from] DocumentError),
    #[error("{} statement(s) rejected, first: {}", .0.len(), .0[0])]
    Load(Vec<LoadError>),
    #[error("{} invalid record(s), first: {}", .0.len(), .0[0])]
    Records(Vec<SchemaError>),
}

/// A world document together with its loaded, validated knowledge base.
#[derive(Debug, Clone)]
pub struct World {
    /// Schema plus world statements.
    pub document: Document,
    pub kb: KnowledgeBase,
}

/// Layers `world` over the schema, loads it and validates every record.
pub fn load_world(world: &Document) -> Result<World, WorldError> {
    let mut document = base_schema();
    document.merge(world)?;
    let kb = document.to_kb().map_err(WorldError::Load)?;
    let problems = validate_world(&kb);
    if !problems.is_empty() {
        return Err(WorldError::Records(problems));
    }
    Ok(World { document, kb })
}

pub fn read_document(path: &Path) -> Result<Document, WorldError> {
    let bytes = std::fs::read(path).map_err(|source| WorldError::Io {
        path: path.display().to_string(),
        source,
    })?;
    text::parse(&bytes).map_err(|errors| WorldError::Parse {
        path: path.display().to_string(),
        errors,
    })
}

pub fn load_world_file(path: &Path) -> Result<World, WorldError> {
    load_world(&read_document(path)?)
}

/// Ids of every class, property and capability the engines rely on.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemaCatalog {
    pub classes: Vec<EntityId>,
    pub object_properties: Vec<EntityId>,
    pub data_properties: Vec<EntityId>,
    pub capabilities: Vec<EntityId>,
}

impl SchemaCatalog {
    pub fn shipped() -> Self {
        let ids = |names: &[&str]| names.iter().map(|n| sc(n)).collect();
        Self {
            classes: ids(vocab::class::ALL),
            object_properties: ids(vocab::prop::OBJECT),
            data_properties: ids(vocab::prop::DATA),
            capabilities: ids(vocab::capability::ALL),
        }
    }

    /// Catalog entries absent from `kb` or declared with the wrong kind.
    pub fn missing_in(&self, kb: &KnowledgeBase) -> Vec<EntityId> {
        let mut missing = Vec::new();
        let mut check = |ids: &[EntityId], kind: EntityKind| {
            missing.extend(ids.iter().filter(|id| kb.kind_of(id) != Some(kind)).cloned());
        };
        check(&self.classes, EntityKind::Class);
        check(&self.object_properties, EntityKind::ObjectProperty);
        check(&self.data_properties, EntityKind::DataProperty);
        check(&self.capabilities, EntityKind::Individual);
        missing.extend(
            self.capabilities
                .iter()
                .filter(|c| !kb.is_instance_of(c, &sc(vocab::class::CAPABILITY)))
                .cloned(),
        );
        missing.sort();
        missing.dedup();
        missing
    }
}
