//! The activity log: every occurrence of an action, by a person or an
//! agent, recorded with the same subject/action/instrument/context shape.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::context::ContextRecord;
use crate::id::EntityId;
use crate::kb::{Axiom, KbError, KnowledgeBase};
use crate::literal::Literal;
use crate::schema::views::{context_axioms, context_id_for};
use crate::schema::vocab::{class, prop, sc};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ActivityClass {
    /// Registered beforehand by its subject.
    Scheduled,
    /// Inferred from observations; the subject is always a person.
    Deduced,
    /// Carried out by an agent.
    Executed,
}

impl ActivityClass {
    pub fn class_name(self) -> &'static str {
        match self {
            ActivityClass::Scheduled => class::SCHEDULED_ACTIVITY,
            ActivityClass::Deduced => class::DEDUCED_ACTIVITY,
            ActivityClass::Executed => class::EXECUTED_ACTIVITY,
        }
    }
}

impl fmt::Display for ActivityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActivityRecord {
    pub id: u64,
    pub t: i64,
    pub subject: EntityId,
    pub action: String,
    pub instrument: Option<EntityId>,
    #[serde(skip)]
    pub context: ContextRecord,
    pub class: ActivityClass,
}

impl ActivityRecord {
    /// KB individual holding this record.
    pub fn entity(&self) -> EntityId {
        sc(&format!("act_{}", self.id))
    }
}

#[derive(Debug, Error)]
pub enum ActivityError {
    #[error("deduced activity `{action}` cannot have agent {subject} as subject")]
    DeducedAgentSubject { subject: EntityId, action: String },
    #[error("{0} is not a user")]
    UnknownSubject(EntityId),
    #[error("action name must be a non-empty single line")]
    BadAction,
    #[error(transparent)]
    Kb(#[from] KbError),
}

/// Append-only log with ids increasing from 1.
#[derive(Debug, Clone, Default)]
pub struct ActivityLog {
    records: Vec<ActivityRecord>,
}

impl ActivityLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn records(&self) -> &[ActivityRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Appends a record and writes it into `kb` as an activity individual.
    #[allow(clippy::too_many_arguments)]
    pub fn record(
        &mut self,
        kb: &mut KnowledgeBase,
        t: i64,
        subject: &EntityId,
        action: &str,
        instrument: Option<&EntityId>,
        context: ContextRecord,
        class_: ActivityClass,
    ) -> Result<ActivityRecord, ActivityError> {
        if !kb.is_instance_of(subject, &sc(class::USER)) {
            return Err(ActivityError::UnknownSubject(subject.clone()));
        }
        if class_ == ActivityClass::Deduced && !kb.is_instance_of(subject, &sc(class::PERSON)) {
            return Err(ActivityError::DeducedAgentSubject {
                subject: subject.clone(),
                action: action.to_string(),
            });
        }
        let name = Literal::string(action).map_err(|_| ActivityError::BadAction)?;
        if action.is_empty() {
            return Err(ActivityError::BadAction);
        }
        let record = ActivityRecord {
            id: self.records.len() as u64 + 1,
            t,
            subject: subject.clone(),
            action: action.to_string(),
            instrument: instrument.cloned(),
            context,
            class: class_,
        };
        let id = record.entity();
        let mut axioms = vec![
            Axiom::instance(id.clone(), sc(class_.class_name())),
            Axiom::relation(id.clone(), sc(prop::HAS_SUBJECT), subject.clone()),
            Axiom::value(id.clone(), sc(prop::ACTION_NAME), name),
            Axiom::value(id.clone(), sc(prop::TIMESTAMP), Literal::Integer(t)),
        ];
        if let Some(inst) = instrument {
            axioms.push(Axiom::relation(id.clone(), sc(prop::HAS_INSTRUMENT), inst.clone()));
        }
        if record.context.specificity() > 0 {
            let cid = context_id_for(&id);
            axioms.extend(context_axioms(&cid, &record.context));
            axioms.push(Axiom::relation(id.clone(), sc(prop::HAS_CONTEXT), cid));
        }
        axioms.sort_by_key(Axiom::kind);
        // validate on a copy so a rejected record leaves the KB untouched
        let mut trial = kb.clone();
        trial.add_all(axioms)?;
        *kb = trial;
        self.records.push(record.clone());
        Ok(record)
    }
}
