//! Axiom store with subsumption, instance and property queries.
//!
//! The store holds a small OWL-like subset: class and property declarations,
//! subclass links and assertions over individuals. Subclass closure is kept
//! reflexive-transitive and is maintained incrementally on every insertion.
//! Domain and range declarations are checked when an assertion is added
//! (closed-world checking) instead of being used to infer types.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::id::EntityId;
use crate::literal::{Datatype, Literal, LiteralError};

/// One ontology statement. Variant order is the canonical kind rank.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    ClassDecl(EntityId),
    ObjPropDecl {
        prop: EntityId,
        domain: EntityId,
        range: EntityId,
    },
    DataPropDecl {
        prop: EntityId,
        domain: EntityId,
        range: Datatype,
    },
    SubClassOf {
        sub: EntityId,
        sup: EntityId,
    },
    ClassAssertion {
        individual: EntityId,
        class: EntityId,
    },
    ObjPropAssertion {
        subject: EntityId,
        prop: EntityId,
        object: EntityId,
    },
    DataPropAssertion {
        subject: EntityId,
        prop: EntityId,
        value: Literal,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomKind {
    ClassDecl,
    ObjPropDecl,
    DataPropDecl,
    SubClassOf,
    ClassAssertion,
    ObjPropAssertion,
    DataPropAssertion,
}

impl AxiomKind {
    pub const ALL: [AxiomKind; 7] = [
        AxiomKind::ClassDecl,
        AxiomKind::ObjPropDecl,
        AxiomKind::DataPropDecl,
        AxiomKind::SubClassOf,
        AxiomKind::ClassAssertion,
        AxiomKind::ObjPropAssertion,
        AxiomKind::DataPropAssertion,
    ];

    /// Statement keyword in the text format.
    pub fn keyword(self) -> &'static str {
        match self {
            AxiomKind::ClassDecl => "class",
            AxiomKind::ObjPropDecl => "objprop",
            AxiomKind::DataPropDecl => "dataprop",
            AxiomKind::SubClassOf => "subclass",
            AxiomKind::ClassAssertion => "ind",
            AxiomKind::ObjPropAssertion => "rel",
            AxiomKind::DataPropAssertion => "val",
        }
    }
}

impl Axiom {
    pub fn kind(&self) -> AxiomKind {
        match self {
            Axiom::ClassDecl(_) => AxiomKind::ClassDecl,
            Axiom::ObjPropDecl { .. } => AxiomKind::ObjPropDecl,
            Axiom::DataPropDecl { .. } => AxiomKind::DataPropDecl,
            Axiom::SubClassOf { .. } => AxiomKind::SubClassOf,
            Axiom::ClassAssertion { .. } => AxiomKind::ClassAssertion,
            Axiom::ObjPropAssertion { .. } => AxiomKind::ObjPropAssertion,
            Axiom::DataPropAssertion { .. } => AxiomKind::DataPropAssertion,
        }
    }

    /// Every entity the axiom mentions, in argument order.
    pub fn entities(&self) -> Vec<&EntityId> {
        match self {
            Axiom::ClassDecl(c) => vec![c],
            Axiom::ObjPropDecl {
                prop,
                domain,
                range,
            } => vec![prop, domain, range],
            Axiom::DataPropDecl { prop, domain, .. } => vec![prop, domain],
            Axiom::SubClassOf { sub, sup } => vec![sub, sup],
            Axiom::ClassAssertion { individual, class } => vec![individual, class],
            Axiom::ObjPropAssertion {
                subject,
                prop,
                object,
            } => vec![subject, prop, object],
            Axiom::DataPropAssertion { subject, prop, .. } => vec![subject, prop],
        }
    }

    pub fn class(id: EntityId) -> Self {
        Axiom::ClassDecl(id)
    }

    pub fn subclass(sub: EntityId, sup: EntityId) -> Self {
        Axiom::SubClassOf { sub, sup }
    }

    pub fn instance(individual: EntityId, class: EntityId) -> Self {
        Axiom::ClassAssertion { individual, class }
    }

    pub fn relation(subject: EntityId, prop: EntityId, object: EntityId) -> Self {
        Axiom::ObjPropAssertion {
            subject,
            prop,
            object,
        }
    }

    pub fn value(subject: EntityId, prop: EntityId, value: Literal) -> Self {
        Axiom::DataPropAssertion {
            subject,
            prop,
            value,
        }
    }
}

/// Canonical one-line text form (without trailing newline).
impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kw = self.kind().keyword();
        match self {
            Axiom::ClassDecl(c) => write!(f, "{kw} {c}"),
            Axiom::ObjPropDecl {
                prop,
                domain,
                range,
            } => write!(f, "{kw} {prop} domain {domain} range {range}"),
            Axiom::DataPropDecl {
                prop,
                domain,
                range,
            } => write!(f, "{kw} {prop} domain {domain} range {range}"),
            Axiom::SubClassOf { sub, sup } => write!(f, "{kw} {sub} {sup}"),
            Axiom::ClassAssertion { individual, class } => write!(f, "{kw} {individual} : {class}"),
            Axiom::ObjPropAssertion {
                subject,
                prop,
                object,
            } => write!(f, "{kw} {subject} {prop} {object}"),
            Axiom::DataPropAssertion {
                subject,
                prop,
                value,
            } => write!(f, "{kw} {subject} {prop} {value}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntityKind {
    Class,
    ObjectProperty,
    DataProperty,
    Individual,
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntityKind::Class => "class",
            EntityKind::ObjectProperty => "object property",
            EntityKind::DataProperty => "data property",
            EntityKind::Individual => "individual",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KbError {
    #[error("{id} is not a declared {expected}")]
    UndeclaredEntity { id: EntityId, expected: EntityKind },
    #[error("subclass link {sub} -> {sup} would create a cycle")]
    SubclassCycle { sub: EntityId, sup: EntityId },
    #[error("{subject} is not an instance of {domain}, the domain of {prop}")]
    DomainViolation {
        subject: EntityId,
        prop: EntityId,
        domain: EntityId,
    },
    #[error("{value} does not fit {range}, the range of {prop}")]
    RangeViolation {
        prop: EntityId,
        value: String,
        range: String,
    },
    #[error("{id} is already declared as a {existing}, cannot redeclare as a {attempted}")]
    KindConflict {
        id: EntityId,
        existing: EntityKind,
        attempted: EntityKind,
    },
    #[error("{prop} is already declared with a different domain or range")]
    ConflictingDeclaration { prop: EntityId },
    #[error(transparent)]
    InvalidLiteral(#[from] LiteralError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceMode {
    /// Individuals asserted into exactly the queried class.
    Direct,
    /// Individuals asserted into the class or any of its subclasses.
    Inferred,
}

/// Object of a property assertion.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Entity(EntityId),
    Literal(Literal),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Entity(e) => write!(f, "{e}"),
            Value::Literal(l) => write!(f, "{l}"),
        }
    }
}

type PropKey = (EntityId, EntityId);

#[derive(Debug, Clone, Default, PartialEq)]
pub struct KnowledgeBase {
    axioms: BTreeSet<Axiom>,
    kinds: BTreeMap<EntityId, EntityKind>,
    obj_props: BTreeMap<EntityId, (EntityId, EntityId)>,
    data_props: BTreeMap<EntityId, (EntityId, Datatype)>,
    /// class -> every class it is subsumed by, itself included
    ancestors: BTreeMap<EntityId, BTreeSet<EntityId>>,
    /// individual -> asserted classes
    types: BTreeMap<EntityId, BTreeSet<EntityId>>,
    objects: BTreeMap<PropKey, BTreeSet<EntityId>>,
    /// (prop, object) -> subjects
    subjects: BTreeMap<PropKey, BTreeSet<EntityId>>,
    literals: BTreeMap<PropKey, BTreeSet<Literal>>,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts an axiom. Returns `false` when it was already present.
    pub fn add_axiom(&mut self, ax: Axiom) -> Result<bool, KbError> {
        if self.axioms.contains(&ax) {
            return Ok(false);
        }
        self.check(&ax)?;
        self.apply(&ax);
        self.axioms.insert(ax);
        Ok(true)
    }

    pub fn add_all(&mut self, axioms: impl IntoIterator<Item = Axiom>) -> Result<(), KbError> {
        for ax in axioms {
            self.add_axiom(ax)?;
        }
        Ok(())
    }

    fn claim(&self, id: &EntityId, kind: EntityKind) -> Result<(), KbError> {
        match self.kinds.get(id) {
            Some(existing) if *existing != kind => Err(KbError::KindConflict {
                id: id.clone(),
                existing: *existing,
                attempted: kind,
            }),
            _ => Ok(()),
        }
    }

    fn require(&self, id: &EntityId, kind: EntityKind) -> Result<(), KbError> {
        if self.kinds.get(id) == Some(&kind) {
            Ok(())
        } else {
            Err(KbError::UndeclaredEntity {
                id: id.clone(),
                expected: kind,
            })
        }
    }

    fn check(&self, ax: &Axiom) -> Result<(), KbError> {
        match ax {
            Axiom::ClassDecl(c) => self.claim(c, EntityKind::Class),
            Axiom::ObjPropDecl {
                prop,
                domain,
                range,
            } => {
                self.claim(prop, EntityKind::ObjectProperty)?;
                self.require(domain, EntityKind::Class)?;
                self.require(range, EntityKind::Class)?;
                if self.obj_props.contains_key(prop) {
                    return Err(KbError::ConflictingDeclaration { prop: prop.clone() });
                }
                Ok(())
            }
            Axiom::DataPropDecl { prop, domain, .. } => {
                self.claim(prop, EntityKind::DataProperty)?;
                self.require(domain, EntityKind::Class)?;
                if self.data_props.contains_key(prop) {
                    return Err(KbError::ConflictingDeclaration { prop: prop.clone() });
                }
                Ok(())
            }
            Axiom::SubClassOf { sub, sup } => {
                self.require(sub, EntityKind::Class)?;
                self.require(sup, EntityKind::Class)?;
                if sub != sup && self.ancestors[sup].contains(sub) {
                    return Err(KbError::SubclassCycle {
                        sub: sub.clone(),
                        sup: sup.clone(),
                    });
                }
                Ok(())
            }
            Axiom::ClassAssertion { individual, class } => {
                self.claim(individual, EntityKind::Individual)?;
                self.require(class, EntityKind::Class)
            }
            Axiom::ObjPropAssertion {
                subject,
                prop,
                object,
            } => {
                self.require(prop, EntityKind::ObjectProperty)?;
                self.require(subject, EntityKind::Individual)?;
                self.require(object, EntityKind::Individual)?;
                let (domain, range) = &self.obj_props[prop];
                if !self.is_instance_of(subject, domain) {
                    return Err(KbError::DomainViolation {
                        subject: subject.clone(),
                        prop: prop.clone(),
                        domain: domain.clone(),
                    });
                }
                if !self.is_instance_of(object, range) {
                    return Err(KbError::RangeViolation {
                        prop: prop.clone(),
                        value: object.to_string(),
                        range: range.to_string(),
                    });
                }
                Ok(())
            }
            Axiom::DataPropAssertion {
                subject,
                prop,
                value,
            } => {
                value.validate()?;
                self.require(prop, EntityKind::DataProperty)?;
                self.require(subject, EntityKind::Individual)?;
                let (domain, range) = &self.data_props[prop];
                if !self.is_instance_of(subject, domain) {
                    return Err(KbError::DomainViolation {
                        subject: subject.clone(),
                        prop: prop.clone(),
                        domain: domain.clone(),
                    });
                }
                if value.datatype() != *range {
                    return Err(KbError::RangeViolation {
                        prop: prop.clone(),
                        value: value.to_string(),
                        range: range.to_string(),
                    });
                }
                Ok(())
            }
        }
    }

    fn apply(&mut self, ax: &Axiom) {
        match ax {
            Axiom::ClassDecl(c) => {
                self.kinds.insert(c.clone(), EntityKind::Class);
                self.ancestors
                    .entry(c.clone())
                    .or_insert_with(|| BTreeSet::from([c.clone()]));
            }
            Axiom::ObjPropDecl {
                prop,
                domain,
                range,
            } => {
                self.kinds.insert(prop.clone(), EntityKind::ObjectProperty);
                self.obj_props
                    .insert(prop.clone(), (domain.clone(), range.clone()));
            }
            Axiom::DataPropDecl {
                prop,
                domain,
                range,
            } => {
                self.kinds.insert(prop.clone(), EntityKind::DataProperty);
                self.data_props.insert(prop.clone(), (domain.clone(), *range));
            }
            Axiom::SubClassOf { sub, sup } => {
                if sub == sup {
                    return;
                }
                let gained = self.ancestors[sup].clone();
                let below: Vec<EntityId> = self
                    .ancestors
                    .iter()
                    .filter(|(_, anc)| anc.contains(sub))
                    .map(|(c, _)| c.clone())
                    .collect();
                for c in below {
                    if let Some(anc) = self.ancestors.get_mut(&c) {
                        anc.extend(gained.iter().cloned());
                    }
                }
            }
            Axiom::ClassAssertion { individual, class } => {
                self.kinds
                    .insert(individual.clone(), EntityKind::Individual);
                self.types
                    .entry(individual.clone())
                    .or_default()
                    .insert(class.clone());
            }
            Axiom::ObjPropAssertion {
                subject,
                prop,
                object,
            } => {
                self.objects
                    .entry((subject.clone(), prop.clone()))
                    .or_default()
                    .insert(object.clone());
                self.subjects
                    .entry((prop.clone(), object.clone()))
                    .or_default()
                    .insert(subject.clone());
            }
            Axiom::DataPropAssertion {
                subject,
                prop,
                value,
            } => {
                self.literals
                    .entry((subject.clone(), prop.clone()))
                    .or_default()
                    .insert(value.clone());
            }
        }
    }

    /// Replaces every value of a data property on a subject.
    ///
    /// This is the only retraction the store supports; it touches assertions,
    /// never the schema.
    pub fn set_data_value(
        &mut self,
        subject: &EntityId,
        prop: &EntityId,
        value: Literal,
    ) -> Result<(), KbError> {
        let replacement = Axiom::value(subject.clone(), prop.clone(), value);
        self.check(&replacement)?;
        let key = (subject.clone(), prop.clone());
        if let Some(old) = self.literals.remove(&key) {
            for lit in old {
                self.axioms
                    .remove(&Axiom::value(subject.clone(), prop.clone(), lit));
            }
        }
        self.apply(&replacement);
        self.axioms.insert(replacement);
        Ok(())
    }

    pub fn axiom_count(&self) -> usize {
        self.axioms.len()
    }

    /// Axioms in canonical order.
    pub fn axioms(&self) -> impl Iterator<Item = &Axiom> {
        self.axioms.iter()
    }

    pub fn contains(&self, ax: &Axiom) -> bool {
        self.axioms.contains(ax)
    }

    pub fn kind_of(&self, id: &EntityId) -> Option<EntityKind> {
        self.kinds.get(id).copied()
    }

    pub fn is_class(&self, id: &EntityId) -> bool {
        self.kind_of(id) == Some(EntityKind::Class)
    }

    pub fn is_individual(&self, id: &EntityId) -> bool {
        self.kind_of(id) == Some(EntityKind::Individual)
    }

    pub fn classes(&self) -> impl Iterator<Item = &EntityId> {
        self.ancestors.keys()
    }

    pub fn individuals(&self) -> impl Iterator<Item = &EntityId> {
        self.types.keys()
    }

    pub fn object_property(&self, prop: &EntityId) -> Option<(&EntityId, &EntityId)> {
        self.obj_props.get(prop).map(|(d, r)| (d, r))
    }

    pub fn data_property(&self, prop: &EntityId) -> Option<(&EntityId, Datatype)> {
        self.data_props.get(prop).map(|(d, r)| (d, *r))
    }

    pub fn is_subclass_of(&self, sub: &EntityId, sup: &EntityId) -> Result<bool, KbError> {
        self.require(sub, EntityKind::Class)?;
        self.require(sup, EntityKind::Class)?;
        Ok(self.ancestors[sub].contains(sup))
    }

    /// Reflexive-transitive superclasses, sorted.
    pub fn superclasses(&self, class: &EntityId) -> Result<Vec<EntityId>, KbError> {
        self.require(class, EntityKind::Class)?;
        Ok(self.ancestors[class].iter().cloned().collect())
    }

    /// Inferred membership test; false for anything that is not an individual.
    pub fn is_instance_of(&self, individual: &EntityId, class: &EntityId) -> bool {
        self.types.get(individual).is_some_and(|asserted| {
            asserted
                .iter()
                .any(|t| self.ancestors.get(t).is_some_and(|a| a.contains(class)))
        })
    }

    /// Asserted classes of an individual.
    pub fn asserted_types(&self, individual: &EntityId) -> Vec<EntityId> {
        self.types
            .get(individual)
            .map(|t| t.iter().cloned().collect())
            .unwrap_or_default()
    }

    pub fn instances_of(
        &self,
        class: &EntityId,
        mode: InstanceMode,
    ) -> Result<Vec<EntityId>, KbError> {
        self.require(class, EntityKind::Class)?;
        Ok(self
            .types
            .iter()
            .filter(|(_, asserted)| match mode {
                InstanceMode::Direct => asserted.contains(class),
                InstanceMode::Inferred => asserted.iter().any(|t| self.ancestors[t].contains(class)),
            })
            .map(|(ind, _)| ind.clone())
            .collect())
    }

    /// All asserted objects or literals for `(subject, prop)`, sorted.
    pub fn property_values(
        &self,
        subject: &EntityId,
        prop: &EntityId,
    ) -> Result<Vec<Value>, KbError> {
        self.require(subject, EntityKind::Individual)?;
        match self.kinds.get(prop) {
            Some(EntityKind::ObjectProperty) => Ok(self
                .objects_of(subject, prop)
                .into_iter()
                .map(Value::Entity)
                .collect()),
            Some(EntityKind::DataProperty) => Ok(self
                .literals_of(subject, prop)
                .into_iter()
                .map(Value::Literal)
                .collect()),
            _ => Err(KbError::UndeclaredEntity {
                id: prop.clone(),
                expected: EntityKind::ObjectProperty,
            }),
        }
    }

    /// Unchecked lookup of object-property values; empty when nothing is asserted.
    pub fn objects_of(&self, subject: &EntityId, prop: &EntityId) -> Vec<EntityId> {
        self.objects
            .get(&(subject.clone(), prop.clone()))
            .map(|s| s.iter().cloned().collect())
            .unwrap_or_default()
    }

    /// Unchecked reverse lookup: subjects `s` with `rel s prop object`.
    pub fn subjects_of(&self, prop: &EntityId, object: &EntityId) -> Vec<EntityId> {
        self.subjects
            .get(&(prop.clone(), object.clone()))
            .map(|s| s.iter().cloned().collect())
            .unwrap_or_default()
    }

    /// Unchecked lookup of data-property values.
    pub fn literals_of(&self, subject: &EntityId, prop: &EntityId) -> Vec<Literal> {
        self.literals
            .get(&(subject.clone(), prop.clone()))
            .map(|s| s.iter().cloned().collect())
            .unwrap_or_default()
    }
}
