//! Agent goal trees and their satisfiability.
//!
//! A leaf is satisfiable when some device (or person, for contact actions)
//! can carry out its action right now. The first candidate in the
//! deterministic ordering becomes the leaf's binding. Leaves bind
//! independently, so two leaves may share a device.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::context::{find_in_inventory, ContextPattern, DeviceKind};
use crate::id::EntityId;
use crate::kb::{Axiom, InstanceMode, KnowledgeBase};
use crate::literal::Literal;
use crate::schema::inventory::DeviceInventory;
use crate::schema::records::{RelationFunction, Role};
use crate::schema::views::{agent_view, context_axioms, context_id_for, person_view, read_context, relations_of};
use crate::schema::vocab::{class, prop, sc};
use crate::schema::SchemaError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verb {
    Observe,
    Actuate,
}

impl Verb {
    /// Observing needs a sensor, actuating an actuator.
    pub fn device_kind(self) -> DeviceKind {
        match self {
            Verb::Observe => DeviceKind::Sensor,
            Verb::Actuate => DeviceKind::Actuator,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verb::Observe => "observe",
            Verb::Actuate => "actuate",
        }
    }
}

impl FromStr for Verb {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "observe" => Ok(Verb::Observe),
            "actuate" => Ok(Verb::Actuate),
            other => Err(format!("unknown action verb `{other}`")),
        }
    }
}

/// Which persons a contact action may reach.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContactFilter {
    pub role: Option<Role>,
    /// Functions the relation with `about` must include.
    #[serde(default)]
    pub functions: BTreeSet<RelationFunction>,
    /// The person the message concerns; never a target itself.
    pub about: Option<EntityId>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ActionSpec {
    Device {
        capability: EntityId,
        kind: DeviceKind,
        pattern: ContextPattern,
        verb: Verb,
    },
    Contact {
        target: ContactFilter,
        message_kind: String,
    },
}

impl ActionSpec {
    pub fn observe(capability: EntityId, pattern: ContextPattern) -> Self {
        ActionSpec::Device {
            capability,
            kind: DeviceKind::Sensor,
            pattern,
            verb: Verb::Observe,
        }
    }

    pub fn actuate(capability: EntityId, pattern: ContextPattern) -> Self {
        ActionSpec::Device {
            capability,
            kind: DeviceKind::Actuator,
            pattern,
            verb: Verb::Actuate,
        }
    }

    pub fn contact(target: ContactFilter, message_kind: impl Into<String>) -> Self {
        ActionSpec::Contact {
            target,
            message_kind: message_kind.into(),
        }
    }
}

impl fmt::Display for ActionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionSpec::Device {
                capability,
                kind,
                pattern,
                verb,
            } => {
                write!(f, "{} {capability} via {kind}", verb.as_str())?;
                if !pattern.is_empty() {
                    write!(f, " where {pattern}")?;
                }
                Ok(())
            }
            ActionSpec::Contact { target, message_kind } => {
                write!(f, "contact ")?;
                match target.role {
                    Some(r) => write!(f, "{r}")?,
                    None => write!(f, "person")?,
                }
                if let Some(about) = &target.about {
                    write!(f, " about {about}")?;
                }
                if !target.functions.is_empty() {
                    let fs: Vec<_> = target.functions.iter().map(|f| f.as_str()).collect();
                    write!(f, " with {}", fs.join("+"))?;
                }
                write!(f, " [{message_kind}]")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GoalBody {
    Leaf(ActionSpec),
    And(Vec<GoalNode>),
    Or(Vec<GoalNode>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoalNode {
    pub id: EntityId,
    pub label: String,
    /// Free tag behaviors use to find the sub-goal they drive.
    pub purpose: Option<String>,
    pub body: GoalBody,
}

impl GoalNode {
    pub fn leaf(id: EntityId, label: impl Into<String>, action: ActionSpec) -> Self {
        Self {
            id,
            label: label.into(),
            purpose: None,
            body: GoalBody::Leaf(action),
        }
    }

    pub fn and(id: EntityId, label: impl Into<String>, children: Vec<GoalNode>) -> Self {
        Self {
            id,
            label: label.into(),
            purpose: None,
            body: GoalBody::And(children),
        }
    }

    pub fn or(id: EntityId, label: impl Into<String>, children: Vec<GoalNode>) -> Self {
        Self {
            id,
            label: label.into(),
            purpose: None,
            body: GoalBody::Or(children),
        }
    }

    pub fn with_purpose(mut self, purpose: impl Into<String>) -> Self {
        self.purpose = Some(purpose.into());
        self
    }

    pub fn children(&self) -> &[GoalNode] {
        match &self.body {
            GoalBody::Leaf(_) => &[],
            GoalBody::And(c) | GoalBody::Or(c) => c,
        }
    }

    /// Pre-order walk.
    pub fn nodes(&self) -> Vec<&GoalNode> {
        let mut out = vec![self];
        for c in self.children() {
            out.extend(c.nodes());
        }
        out
    }

    pub fn leaves(&self) -> Vec<&GoalNode> {
        self.nodes()
            .into_iter()
            .filter(|n| matches!(n.body, GoalBody::Leaf(_)))
            .collect()
    }

    pub fn find(&self, id: &EntityId) -> Option<&GoalNode> {
        self.nodes().into_iter().find(|n| &n.id == id)
    }

    /// First node, in pre-order, tagged with `purpose`.
    pub fn find_purpose(&self, purpose: &str) -> Option<&GoalNode> {
        self.nodes()
            .into_iter()
            .find(|n| n.purpose.as_deref() == Some(purpose))
    }

    /// Copy with children ordered by id at every level, the order in which
    /// trees read back from a knowledge base list them.
    pub fn canonical(&self) -> GoalNode {
        let sorted = |c: &[GoalNode]| {
            let mut c: Vec<GoalNode> = c.iter().map(GoalNode::canonical).collect();
            c.sort_by(|a, b| a.id.cmp(&b.id));
            c
        };
        let body = match &self.body {
            GoalBody::Leaf(a) => GoalBody::Leaf(a.clone()),
            GoalBody::And(c) => GoalBody::And(sorted(c)),
            GoalBody::Or(c) => GoalBody::Or(sorted(c)),
        };
        GoalNode { body, ..self.clone() }
    }

    pub fn action(&self) -> Option<&ActionSpec> {
        match &self.body {
            GoalBody::Leaf(a) => Some(a),
            _ => None,
        }
    }

    /// Checks the tree invariants: no shared node, unique labels, non-empty
    /// inner nodes, device kinds consistent with verbs.
    pub fn validate(&self) -> Result<(), GoalError> {
        let mut ids = BTreeSet::new();
        let mut labels = BTreeSet::new();
        for node in self.nodes() {
            let bad = |reason: String| GoalError::MalformedTree {
                node: node.id.clone(),
                reason,
            };
            if !ids.insert(&node.id) {
                return Err(bad("node appears twice".into()));
            }
            if !labels.insert(node.label.as_str()) {
                return Err(bad(format!("label `{}` is not unique", node.label)));
            }
            match &node.body {
                GoalBody::And(c) | GoalBody::Or(c) if c.is_empty() => {
                    return Err(bad("inner goal without children".into()))
                }
                GoalBody::Leaf(ActionSpec::Device { kind, verb, .. }) if verb.device_kind() != *kind => {
                    return Err(bad(format!("{} needs a {} device", verb.as_str(), verb.device_kind())))
                }
                _ => {}
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Unsatisfied {
    pub leaf: EntityId,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct BindingReport {
    pub satisfiable: bool,
    /// leaf id -> bound device or person
    pub bindings: BTreeMap<EntityId, EntityId>,
    pub unsatisfied: Vec<Unsatisfied>,
}

impl BindingReport {
    pub fn binding(&self, leaf: &EntityId) -> Option<&EntityId> {
        self.bindings.get(leaf)
    }
}

#[derive(Debug, Error)]
pub enum GoalError {
    #[error("malformed goal tree at {node}: {reason}")]
    MalformedTree { node: EntityId, reason: String },
    #[error("goal graph has a cycle through {0}")]
    CyclicGoalGraph(EntityId),
    #[error("leaf goal {0} carries no action")]
    DanglingLeaf(EntityId),
    #[error(transparent)]
    Schema(#[from] SchemaError),
}

/// Persons a contact action may reach, best first: those with a relation
/// to `about`, then the rest, each group by id.
pub fn resolve_contacts(kb: &KnowledgeBase, filter: &ContactFilter) -> Vec<EntityId> {
    let persons = kb
        .instances_of(&sc(class::PERSON), InstanceMode::Inferred)
        .unwrap_or_default();
    let about_relations = filter
        .about
        .as_ref()
        .and_then(|a| relations_of(kb, a).ok())
        .unwrap_or_default();
    let mut hits: Vec<(bool, EntityId)> = persons
        .into_iter()
        .filter(|p| Some(p) != filter.about.as_ref())
        .filter(|p| match filter.role {
            None => true,
            Some(role) => person_view(kb, p).is_ok_and(|rec| rec.role == role),
        })
        .filter_map(|p| {
            let linking: Vec<_> = match &filter.about {
                Some(a) => about_relations.iter().filter(|r| r.links(&p, a)).collect(),
                None => Vec::new(),
            };
            if !filter.functions.is_empty() {
                let ok = if filter.about.is_some() {
                    linking.iter().any(|r| filter.functions.is_subset(&r.functions))
                } else {
                    relations_of(kb, &p)
                        .unwrap_or_default()
                        .iter()
                        .any(|r| filter.functions.is_subset(&r.functions))
                };
                if !ok {
                    return None;
                }
            }
            Some((!linking.is_empty(), p))
        })
        .collect();
    hits.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    hits.into_iter().map(|(_, p)| p).collect()
}

/// Candidates for one leaf, best first.
pub fn leaf_candidates(kb: &KnowledgeBase, inventory: &DeviceInventory, action: &ActionSpec) -> Vec<EntityId> {
    match action {
        ActionSpec::Device {
            capability,
            kind,
            pattern,
            ..
        } => find_in_inventory(inventory, pattern, capability, (*kind).into()),
        ActionSpec::Contact { target, .. } => resolve_contacts(kb, target),
    }
}

pub fn evaluate(kb: &KnowledgeBase, root: &GoalNode) -> Result<BindingReport, GoalError> {
    root.validate()?;
    let inventory = DeviceInventory::from_kb(kb);
    Ok(eval(kb, &inventory, root))
}

fn eval(kb: &KnowledgeBase, inventory: &DeviceInventory, node: &GoalNode) -> BindingReport {
    match &node.body {
        GoalBody::Leaf(action) => match leaf_candidates(kb, inventory, action).into_iter().next() {
            Some(bound) => BindingReport {
                satisfiable: true,
                bindings: BTreeMap::from([(node.id.clone(), bound)]),
                unsatisfied: Vec::new(),
            },
            None => BindingReport {
                satisfiable: false,
                bindings: BTreeMap::new(),
                unsatisfied: vec![Unsatisfied {
                    leaf: node.id.clone(),
                    reason: format!("nothing can {action}"),
                }],
            },
        },
        GoalBody::And(children) => {
            let mut report = BindingReport {
                satisfiable: true,
                ..Default::default()
            };
            for child in children {
                let r = eval(kb, inventory, child);
                report.satisfiable &= r.satisfiable;
                report.bindings.extend(r.bindings);
                report.unsatisfied.extend(r.unsatisfied);
            }
            report
        }
        GoalBody::Or(children) => {
            let mut failed = Vec::new();
            for child in children {
                let r = eval(kb, inventory, child);
                if r.satisfiable {
                    return r;
                }
                failed.extend(r.unsatisfied);
            }
            BindingReport {
                satisfiable: false,
                bindings: BTreeMap::new(),
                unsatisfied: failed,
            }
        }
    }
}

fn single_string(kb: &KnowledgeBase, id: &EntityId, property: &str) -> Result<Option<String>, GoalError> {
    let values = kb.literals_of(id, &sc(property));
    match values.as_slice() {
        [] => Ok(None),
        [Literal::String(s)] => Ok(Some(s.clone())),
        _ => Err(GoalError::MalformedTree {
            node: id.clone(),
            reason: format!("expected one string for {property}"),
        }),
    }
}

/// Goal trees of `agent`, rebuilt from `hasGoal` / `subGoalOf` edges.
pub fn goals_from_kb(kb: &KnowledgeBase, agent: &EntityId) -> Result<Vec<GoalNode>, GoalError> {
    let record = agent_view(kb, agent)?;
    let trees = record
        .goals
        .iter()
        .map(|root| goal_tree(kb, root))
        .collect::<Result<Vec<_>, _>>()?;
    let mut labels = BTreeSet::new();
    for node in trees.iter().flat_map(GoalNode::nodes) {
        if !labels.insert(node.label.clone()) {
            return Err(GoalError::MalformedTree {
                node: node.id.clone(),
                reason: format!("label `{}` used twice by {agent}", node.label),
            });
        }
    }
    Ok(trees)
}

/// Rebuilds the tree rooted at goal individual `root`.
pub fn goal_tree(kb: &KnowledgeBase, root: &EntityId) -> Result<GoalNode, GoalError> {
    let tree = build(kb, root, &mut Vec::new())?;
    tree.validate()?;
    Ok(tree)
}

fn build(kb: &KnowledgeBase, id: &EntityId, path: &mut Vec<EntityId>) -> Result<GoalNode, GoalError> {
    if path.contains(id) {
        return Err(GoalError::CyclicGoalGraph(id.clone()));
    }
    if !kb.is_instance_of(id, &sc(class::GOAL)) {
        return Err(GoalError::Schema(SchemaError::WrongClass {
            id: id.clone(),
            expected: sc(class::GOAL),
        }));
    }
    let malformed = |reason: String| GoalError::MalformedTree {
        node: id.clone(),
        reason,
    };
    let label = single_string(kb, id, prop::LABEL)?.unwrap_or_else(|| id.local().to_string());
    let purpose = single_string(kb, id, prop::PURPOSE)?;
    let children_ids = kb.subjects_of(&sc(prop::SUB_GOAL_OF), id);
    let body = if children_ids.is_empty() {
        GoalBody::Leaf(leaf_action(kb, id)?)
    } else {
        path.push(id.clone());
        let children = children_ids
            .iter()
            .map(|c| build(kb, c, path))
            .collect::<Result<Vec<_>, _>>()?;
        path.pop();
        match single_string(kb, id, prop::GOAL_MODE)?.as_deref() {
            None | Some("and") => GoalBody::And(children),
            Some("or") => GoalBody::Or(children),
            Some(other) => return Err(malformed(format!("unknown goal mode `{other}`"))),
        }
    };
    Ok(GoalNode {
        id: id.clone(),
        label,
        purpose,
        body,
    })
}

fn leaf_action(kb: &KnowledgeBase, id: &EntityId) -> Result<ActionSpec, GoalError> {
    let malformed = |reason: String| GoalError::MalformedTree {
        node: id.clone(),
        reason,
    };
    let capabilities = kb.objects_of(id, &sc(prop::REQUIRES_CAPABILITY));
    if let Some(message_kind) = single_string(kb, id, prop::MESSAGE_KIND)? {
        if !capabilities.is_empty() {
            return Err(malformed("leaf mixes a device and a contact action".into()));
        }
        let role = single_string(kb, id, prop::CONTACT_ROLE)?
            .map(|r| r.parse::<Role>())
            .transpose()
            .map_err(malformed)?;
        let functions = kb
            .literals_of(id, &sc(prop::CONTACT_FUNCTION))
            .iter()
            .map(|l| l.as_str().unwrap_or_default().parse::<RelationFunction>())
            .collect::<Result<BTreeSet<_>, _>>()
            .map_err(malformed)?;
        let about = match kb.objects_of(id, &sc(prop::CONTACT_ABOUT)).as_slice() {
            [] => None,
            [a] => Some(a.clone()),
            _ => return Err(malformed("several contactAbout values".into())),
        };
        return Ok(ActionSpec::contact(ContactFilter { role, functions, about }, message_kind));
    }
    let capability = match capabilities.as_slice() {
        [] => return Err(GoalError::DanglingLeaf(id.clone())),
        [c] => c.clone(),
        _ => return Err(malformed("leaf requires several capabilities".into())),
    };
    let verb: Verb = single_string(kb, id, prop::ACTION_VERB)?
        .ok_or_else(|| malformed("device leaf without actionVerb".into()))?
        .parse()
        .map_err(malformed)?;
    let pattern = match kb.objects_of(id, &sc(prop::HAS_CONTEXT)).as_slice() {
        [] => ContextPattern::any(),
        [c] => ContextPattern::from(&read_context(kb, c)?),
        _ => return Err(malformed("several context patterns".into())),
    };
    Ok(ActionSpec::Device {
        capability,
        kind: verb.device_kind(),
        pattern,
        verb,
    })
}

fn text(s: &str) -> Literal {
    Literal::string(s).expect("goal strings carry no line breaks")
}

/// Axioms persisting `root` so that [`goal_tree`] rebuilds it. Child order
/// is not stored; trees read back list children by id.
pub fn goal_axioms(root: &GoalNode) -> Vec<Axiom> {
    let mut out = Vec::new();
    persist(root, None, &mut out);
    out.sort_by_key(Axiom::kind);
    out
}

/// [`goal_axioms`] plus the `hasGoal` link from `agent`.
pub fn agent_goal_axioms(agent: &EntityId, root: &GoalNode) -> Vec<Axiom> {
    let mut out = goal_axioms(root);
    out.push(Axiom::relation(agent.clone(), sc(prop::HAS_GOAL), root.id.clone()));
    out
}

fn persist(node: &GoalNode, parent: Option<&EntityId>, out: &mut Vec<Axiom>) {
    let id = &node.id;
    out.push(Axiom::instance(id.clone(), sc(class::GOAL)));
    out.push(Axiom::value(id.clone(), sc(prop::LABEL), text(&node.label)));
    if let Some(p) = &node.purpose {
        out.push(Axiom::value(id.clone(), sc(prop::PURPOSE), text(p)));
    }
    if let Some(parent) = parent {
        out.push(Axiom::relation(id.clone(), sc(prop::SUB_GOAL_OF), parent.clone()));
    }
    match &node.body {
        GoalBody::Leaf(ActionSpec::Device {
            capability,
            pattern,
            verb,
            ..
        }) => {
            out.push(Axiom::relation(id.clone(), sc(prop::REQUIRES_CAPABILITY), capability.clone()));
            out.push(Axiom::value(id.clone(), sc(prop::ACTION_VERB), text(verb.as_str())));
            if !pattern.is_empty() {
                let cid = context_id_for(id);
                out.push(Axiom::relation(id.clone(), sc(prop::HAS_CONTEXT), cid.clone()));
                out.extend(context_axioms(&cid, &pattern_record(pattern)));
            }
        }
        GoalBody::Leaf(ActionSpec::Contact { target, message_kind }) => {
            out.push(Axiom::value(id.clone(), sc(prop::MESSAGE_KIND), text(message_kind)));
            if let Some(role) = target.role {
                out.push(Axiom::value(id.clone(), sc(prop::CONTACT_ROLE), text(role.class_name())));
            }
            for f in &target.functions {
                out.push(Axiom::value(id.clone(), sc(prop::CONTACT_FUNCTION), text(f.as_str())));
            }
            if let Some(about) = &target.about {
                out.push(Axiom::relation(id.clone(), sc(prop::CONTACT_ABOUT), about.clone()));
            }
        }
        GoalBody::And(children) | GoalBody::Or(children) => {
            if matches!(node.body, GoalBody::Or(_)) {
                out.push(Axiom::value(id.clone(), sc(prop::GOAL_MODE), text("or")));
            }
            for c in children {
                persist(c, Some(id), out);
            }
        }
    }
}

fn pattern_record(pattern: &ContextPattern) -> crate::context::ContextRecord {
    let loc = &pattern.location;
    crate::context::ContextRecord {
        location: (!loc.is_empty()).then(|| crate::schema::records::LocationRecord {
            point: loc.point.clone(),
            district: loc.district.clone(),
            street: loc.street.clone(),
            building: loc.building.clone(),
            floor: loc.floor.clone(),
            room: loc.room.clone(),
        }),
        users: pattern.users.clone(),
        object: pattern.object.clone(),
        time: pattern.time,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::{base_kb, hardware_axioms, HardwareKind, HardwareRecord};

    fn id(s: &str) -> EntityId {
        s.parse().unwrap()
    }

    fn with_devices(devices: &[(&str, HardwareKind, &str)]) -> KnowledgeBase {
        let mut kb = base_kb();
        kb.add_axiom(Axiom::instance(id("sc:john"), sc(class::ASSISTED))).unwrap();
        for (d, kind, cap) in devices {
            kb.add_all(hardware_axioms(&HardwareRecord {
                id: id(d),
                kind: *kind,
                capabilities: [sc(cap)].into(),
                components: vec![],
                functioning: true,
                context: Some(crate::context::ContextRecord::with_users([id("sc:john")])),
            }))
            .unwrap();
        }
        kb
    }

    fn offer_cancel() -> GoalNode {
        let john = ContextPattern::users([id("sc:john")]);
        GoalNode::and(
            id("sc:g_offer"),
            "offer cancel",
            vec![
                GoalNode::leaf(id("sc:g_show"), "show delay", ActionSpec::actuate(sc("Display"), john.clone())),
                GoalNode::leaf(id("sc:g_button"), "receive cancel", ActionSpec::observe(sc("ButtonInput"), john)),
            ],
        )
    }

    #[test]
    fn and_reports_missing_leaf() {
        let kb = with_devices(&[("sc:screen1", HardwareKind::Actuator, "Display")]);
        let report = evaluate(&kb, &offer_cancel()).unwrap();
        assert!(!report.satisfiable);
        assert_eq!(report.bindings.get(&id("sc:g_show")), Some(&id("sc:screen1")));
        assert_eq!(report.unsatisfied.len(), 1);
        assert_eq!(report.unsatisfied[0].leaf, id("sc:g_button"));
    }

    #[test]
    fn or_takes_first_satisfiable_child() {
        let kb = with_devices(&[("sc:watch1", HardwareKind::Sensor, "ButtonInput")]);
        let tree = GoalNode::or(
            id("sc:g_any"),
            "any",
            vec![
                GoalNode::leaf(id("sc:g_a"), "a", ActionSpec::actuate(sc("Display"), ContextPattern::any())),
                GoalNode::leaf(id("sc:g_b"), "b", ActionSpec::observe(sc("ButtonInput"), ContextPattern::any())),
            ],
        );
        let report = evaluate(&kb, &tree).unwrap();
        assert!(report.satisfiable);
        assert!(report.unsatisfied.is_empty());
        assert_eq!(report.bindings, BTreeMap::from([(id("sc:g_b"), id("sc:watch1"))]));
    }

    #[test]
    fn validate_rejects_bad_trees() {
        let leaf = GoalNode::leaf(id("sc:g_a"), "a", ActionSpec::observe(sc("Presence"), ContextPattern::any()));
        let shared = GoalNode::and(id("sc:g_root"), "root", vec![leaf.clone(), leaf.clone()]);
        assert!(matches!(shared.validate(), Err(GoalError::MalformedTree { .. })));
        let empty = GoalNode::or(id("sc:g_root"), "root", vec![]);
        assert!(matches!(empty.validate(), Err(GoalError::MalformedTree { .. })));
        let inconsistent = GoalNode::leaf(
            id("sc:g_x"),
            "x",
            ActionSpec::Device {
                capability: sc("Display"),
                kind: DeviceKind::Sensor,
                pattern: ContextPattern::any(),
                verb: Verb::Actuate,
            },
        );
        assert!(inconsistent.validate().is_err());
    }

    #[test]
    fn persisted_tree_reads_back() {
        let mut kb = with_devices(&[]);
        kb.add_axiom(Axiom::instance(id("sc:agent_a"), sc(class::AGENT))).unwrap();
        let tree = offer_cancel().with_purpose("OfferCancel");
        kb.add_all(agent_goal_axioms(&id("sc:agent_a"), &tree)).unwrap();
        assert_eq!(goals_from_kb(&kb, &id("sc:agent_a")).unwrap(), vec![tree.canonical()]);
    }

    #[test]
    fn subgoal_cycle_detected() {
        let mut kb = with_devices(&[]);
        kb.add_axiom(Axiom::instance(id("sc:agent_a"), sc(class::AGENT))).unwrap();
        for g in ["sc:g1", "sc:g2", "sc:g3"] {
            kb.add_axiom(Axiom::instance(id(g), sc(class::GOAL))).unwrap();
        }
        kb.add_axiom(Axiom::relation(id("sc:agent_a"), sc(prop::HAS_GOAL), id("sc:g1"))).unwrap();
        kb.add_axiom(Axiom::relation(id("sc:g2"), sc(prop::SUB_GOAL_OF), id("sc:g1"))).unwrap();
        kb.add_axiom(Axiom::relation(id("sc:g3"), sc(prop::SUB_GOAL_OF), id("sc:g2"))).unwrap();
        kb.add_axiom(Axiom::relation(id("sc:g2"), sc(prop::SUB_GOAL_OF), id("sc:g3"))).unwrap();
        assert!(matches!(
            goals_from_kb(&kb, &id("sc:agent_a")),
            Err(GoalError::CyclicGoalGraph(_))
        ));
    }

    #[test]
    fn dangling_leaf() {
        let mut kb = with_devices(&[]);
        kb.add_axiom(Axiom::instance(id("sc:agent_a"), sc(class::AGENT))).unwrap();
        kb.add_axiom(Axiom::instance(id("sc:g1"), sc(class::GOAL))).unwrap();
        kb.add_axiom(Axiom::relation(id("sc:agent_a"), sc(prop::HAS_GOAL), id("sc:g1"))).unwrap();
        assert!(matches!(
            goals_from_kb(&kb, &id("sc:agent_a")),
            Err(GoalError::DanglingLeaf(_))
        ));
    }
}
