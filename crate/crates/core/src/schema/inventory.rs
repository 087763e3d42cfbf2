//! Every well-formed hardware record of a world, with the derived facts
//! that depend on the component tree: effective functioning, inherited
//! context and the capabilities a device offers through its components.

use std::collections::{BTreeMap, BTreeSet};

use crate::context::ContextRecord;
use crate::id::EntityId;
use crate::kb::{InstanceMode, KnowledgeBase};

use super::records::{HardwareKind, HardwareRecord};
use super::views::hardware_view;
use super::vocab::{class, sc};

#[derive(Debug, Clone, Default)]
pub struct DeviceInventory {
    records: BTreeMap<EntityId, HardwareRecord>,
    /// component -> composites listing it
    parents: BTreeMap<EntityId, BTreeSet<EntityId>>,
}

impl DeviceInventory {
    /// Malformed hardware is left out.
    pub fn from_kb(kb: &KnowledgeBase) -> Self {
        let ids = kb
            .instances_of(&sc(class::HARDWARE), InstanceMode::Inferred)
            .unwrap_or_default();
        Self::from_records(ids.iter().filter_map(|id| hardware_view(kb, id).ok()))
    }

    pub fn from_records(records: impl IntoIterator<Item = HardwareRecord>) -> Self {
        let records: BTreeMap<EntityId, HardwareRecord> =
            records.into_iter().map(|r| (r.id.clone(), r)).collect();
        let mut parents: BTreeMap<EntityId, BTreeSet<EntityId>> = BTreeMap::new();
        for rec in records.values() {
            for c in &rec.components {
                parents.entry(c.clone()).or_default().insert(rec.id.clone());
            }
        }
        Self { records, parents }
    }

    pub fn get(&self, id: &EntityId) -> Option<&HardwareRecord> {
        self.records.get(id)
    }

    pub fn records(&self) -> impl Iterator<Item = &HardwareRecord> {
        self.records.values()
    }

    /// Devices that are not a component of another device.
    pub fn roots(&self) -> impl Iterator<Item = &HardwareRecord> {
        self.records
            .values()
            .filter(|r| !self.parents.contains_key(&r.id))
    }

    /// Non-composite devices, the units a composition can assign.
    pub fn leaves(&self) -> impl Iterator<Item = &HardwareRecord> {
        self.records
            .values()
            .filter(|r| r.kind != HardwareKind::Composite)
    }

    pub fn parents_of(&self, id: &EntityId) -> impl Iterator<Item = &EntityId> {
        self.parents.get(id).into_iter().flatten()
    }

    /// A device works only if it and every enclosing composite work.
    pub fn effectively_functioning(&self, id: &EntityId) -> bool {
        self.records.get(id).is_some_and(|r| {
            r.functioning && self.parents_of(id).all(|p| self.effectively_functioning(p))
        })
    }

    /// Own context, or else the nearest enclosing composite's.
    pub fn effective_context(&self, id: &EntityId) -> Option<&ContextRecord> {
        let rec = self.records.get(id)?;
        rec.context
            .as_ref()
            .or_else(|| self.parents_of(id).find_map(|p| self.effective_context(p)))
    }

    /// `(capability, kind)` pairs available through `id`. A composite
    /// offers what its working components offer; its own direct
    /// capability assertions count with kind `Composite`.
    pub fn offered_capabilities(&self, id: &EntityId) -> BTreeSet<(EntityId, HardwareKind)> {
        let mut out = BTreeSet::new();
        let Some(rec) = self.records.get(id) else {
            return out;
        };
        out.extend(rec.capabilities.iter().map(|c| (c.clone(), rec.kind)));
        for comp in &rec.components {
            if self.records.get(comp).is_some_and(|c| c.functioning) {
                out.extend(self.offered_capabilities(comp));
            }
        }
        out
    }

    /// Every device nested under `id`, excluding `id` itself.
    pub fn descendants(&self, id: &EntityId) -> BTreeSet<EntityId> {
        let mut out = BTreeSet::new();
        let mut stack: Vec<&EntityId> = self
            .records
            .get(id)
            .map(|r| r.components.iter().collect())
            .unwrap_or_default();
        while let Some(next) = stack.pop() {
            if out.insert(next.clone()) {
                if let Some(r) = self.records.get(next) {
                    stack.extend(r.components.iter());
                }
            }
        }
        out
    }
}
