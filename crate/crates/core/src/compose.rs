//! Composite hardware: taking it apart, and assembling a virtual composite
//! out of separate devices that share a context.
//!
//! [`recompose`] minimizes the number of distinct devices. It enumerates
//! device subsets by increasing size, in lexicographic order over sorted
//! ids, and keeps the first subset that covers every requirement. The
//! search is exponential in the number of candidates, which stays small at
//! room scale.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::context::{matches, ContextPattern, ContextRecord, DeviceKind};
use crate::id::EntityId;
use crate::kb::KnowledgeBase;
use crate::schema::inventory::DeviceInventory;
use crate::schema::vocab::{class, prop, sc};

/// One capability a composite must offer, with the kind of device
/// expected to provide it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Requirement {
    pub capability: EntityId,
    pub kind: DeviceKind,
}

impl Requirement {
    pub fn new(capability: EntityId, kind: DeviceKind) -> Self {
        Self { capability, kind }
    }
}

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.capability, self.kind)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositeSpec {
    pub name: String,
    pub required: BTreeSet<Requirement>,
    /// Every chosen device's context must match this pattern.
    #[serde(default)]
    pub colocate: ContextPattern,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VirtualComposite {
    pub spec: CompositeSpec,
    pub assignment: BTreeMap<Requirement, EntityId>,
}

impl VirtualComposite {
    /// Distinct devices used, sorted.
    pub fn devices(&self) -> BTreeSet<EntityId> {
        self.assignment.values().cloned().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComposeError {
    #[error("{0} is not composite hardware")]
    NotComposite(EntityId),
    #[error("component graph of {0} contains a cycle")]
    CyclicComposition(EntityId),
    #[error("composite spec `{0}` has no requirement")]
    EmptySpec(String),
    #[error("no device covers {}", fmt_missing(.missing))]
    NoCover { missing: BTreeSet<Requirement> },
}

fn fmt_missing(missing: &BTreeSet<Requirement>) -> String {
    missing.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// Transitive components of `composite`, sorted, without the composite.
pub fn decompose(kb: &KnowledgeBase, composite: &EntityId) -> Result<Vec<EntityId>, ComposeError> {
    if !kb.is_instance_of(composite, &sc(class::COMPOSITE_HARDWARE)) {
        return Err(ComposeError::NotComposite(composite.clone()));
    }
    let has_component = sc(prop::HAS_COMPONENT);
    // iterative DFS with an explicit path to spot back edges
    let mut done = BTreeSet::new();
    let mut on_path = BTreeSet::from([composite.clone()]);
    let mut stack = vec![(composite.clone(), kb.objects_of(composite, &has_component), 0)];
    while let Some((_, children, next)) = stack.last_mut() {
        if let Some(child) = children.get(*next).cloned() {
            *next += 1;
            if on_path.contains(&child) {
                return Err(ComposeError::CyclicComposition(composite.clone()));
            }
            if !done.contains(&child) {
                on_path.insert(child.clone());
                let grandchildren = kb.objects_of(&child, &has_component);
                stack.push((child, grandchildren, 0));
            }
        } else if let Some((node, _, _)) = stack.pop() {
            on_path.remove(&node);
            done.insert(node);
        }
    }
    done.remove(composite);
    Ok(done.into_iter().collect())
}

/// Assignable devices for each requirement: working, non-composite, with
/// the capability and kind, and an (inherited) context matching `colocate`.
pub fn candidates(
    inventory: &DeviceInventory,
    spec: &CompositeSpec,
) -> BTreeMap<Requirement, BTreeSet<EntityId>> {
    let empty = ContextRecord::default();
    let usable: Vec<_> = inventory
        .leaves()
        .filter(|r| inventory.effectively_functioning(&r.id))
        .filter(|r| matches(&spec.colocate, inventory.effective_context(&r.id).unwrap_or(&empty)))
        .collect();
    spec.required
        .iter()
        .map(|req| {
            let ids = usable
                .iter()
                .filter(|r| r.kind == req.kind.hardware_kind() && r.capabilities.contains(&req.capability))
                .map(|r| r.id.clone())
                .collect();
            (req.clone(), ids)
        })
        .collect()
}

pub fn recompose(kb: &KnowledgeBase, spec: &CompositeSpec) -> Result<VirtualComposite, ComposeError> {
    recompose_in(&DeviceInventory::from_kb(kb), spec)
}

/// [`recompose`] over an already built inventory.
pub fn recompose_in(
    inventory: &DeviceInventory,
    spec: &CompositeSpec,
) -> Result<VirtualComposite, ComposeError> {
    if spec.required.is_empty() {
        return Err(ComposeError::EmptySpec(spec.name.clone()));
    }
    let per_req = candidates(inventory, spec);
    let missing: BTreeSet<Requirement> = per_req
        .iter()
        .filter(|(_, ids)| ids.is_empty())
        .map(|(r, _)| r.clone())
        .collect();
    if !missing.is_empty() {
        return Err(ComposeError::NoCover { missing });
    }
    let universe: Vec<&EntityId> = per_req.values().flatten().collect::<BTreeSet<_>>().into_iter().collect();
    // one device per requirement always covers, so k never exceeds that
    for k in 1..=spec.required.len().min(universe.len()) {
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            let chosen: BTreeSet<&EntityId> = combo.iter().map(|&i| universe[i]).collect();
            let assignment: Option<BTreeMap<Requirement, EntityId>> = per_req
                .iter()
                .map(|(req, ids)| {
                    ids.iter()
                        .find(|id| chosen.contains(id))
                        .map(|id| (req.clone(), id.clone()))
                })
                .collect();
            if let Some(assignment) = assignment {
                return Ok(VirtualComposite {
                    spec: spec.clone(),
                    assignment,
                });
            }
            if !next_combination(&mut combo, universe.len()) {
                break;
            }
        }
    }
    unreachable!("a cover exists once every requirement has a candidate")
}

/// Advances `combo` to the next k-combination of `0..n` in lexicographic
/// order; false when exhausted.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    for i in (0..k).rev() {
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_in_lexicographic_order() {
        let mut c = vec![0, 1];
        let mut seen = vec![c.clone()];
        while next_combination(&mut c, 4) {
            seen.push(c.clone());
        }
        assert_eq!(
            seen,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
    }

    #[test]
    fn spec_json_shape() {
        let spec: CompositeSpec = serde_json::from_str(
            r#"{"name":"VirtualTV","required":[{"capability":"sc:Display","kind":"actuator"},{"capability":"sc:Audio","kind":"actuator"}],"colocate":"building=MaisonDeJohn&room=Bedroom"}"#,
        )
        .unwrap();
        assert_eq!(spec.required.len(), 2);
        assert_eq!(spec.colocate.location.room.as_deref(), Some("Bedroom"));
        let back: CompositeSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
    }
}
