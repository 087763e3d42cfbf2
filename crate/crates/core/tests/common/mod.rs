//! Builders shared by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use ambient::context::ContextRecord;
use ambient::id::EntityId;
use ambient::kb::{Axiom, KnowledgeBase};
use ambient::schema::{base_kb, hardware_axioms, sc, HardwareKind, HardwareRecord};

pub fn repo_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

pub fn atomic(id: &str, kind: HardwareKind, caps: &[&str], context: Option<ContextRecord>) -> HardwareRecord {
    HardwareRecord {
        id: sc(id),
        kind,
        capabilities: caps.iter().map(|c| sc(c)).collect(),
        components: Vec::new(),
        functioning: true,
        context,
    }
}

pub fn composite(id: &str, parts: &[&str], context: Option<ContextRecord>) -> HardwareRecord {
    HardwareRecord {
        id: sc(id),
        kind: HardwareKind::Composite,
        capabilities: BTreeSet::new(),
        components: parts.iter().map(|p| sc(p)).collect(),
        functioning: true,
        context,
    }
}

/// The shipped schema plus `persons` (as assisted people) and `devices`.
pub fn world(persons: &[EntityId], devices: &[HardwareRecord]) -> KnowledgeBase {
    world_with(persons, &[], devices)
}

/// [`world`] with plain `things` that contexts may concern.
pub fn world_with(persons: &[EntityId], things: &[EntityId], devices: &[HardwareRecord]) -> KnowledgeBase {
    let mut kb = base_kb();
    for p in persons {
        kb.add_axiom(Axiom::instance(p.clone(), sc("Assisted"))).unwrap();
    }
    for t in things {
        kb.add_axiom(Axiom::instance(t.clone(), sc("Thing"))).unwrap();
    }
    let mut axioms: Vec<Axiom> = devices.iter().flat_map(hardware_axioms).collect();
    axioms.sort_by_key(Axiom::kind);
    kb.add_all(axioms).unwrap();
    kb
}
