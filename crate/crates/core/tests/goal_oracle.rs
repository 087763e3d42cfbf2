//! Goal-tree evaluation against a brute-force assignment enumerator.

mod common;

use std::collections::BTreeMap;

use ambient::context::{ContextPattern, ContextRecord, DeviceKind};
use ambient::goal::{evaluate, ActionSpec, ContactFilter, GoalBody, GoalNode};
use ambient::id::EntityId;
use ambient::kb::{Axiom, KnowledgeBase};
use ambient::schema::{sc, HardwareKind, HardwareRecord, Role};
use proptest::prelude::*;

use common::{atomic, world};

const CAPS: &[&str] = &["Acceleration", "Display", "ButtonInput"];
const USERS: &[&str] = &["john", "ann"];

#[derive(Debug, Clone)]
enum LeafSpec {
    Device { cap: usize, observe: bool, users: Vec<usize> },
    Contact { role: Option<Role> },
}

#[derive(Debug, Clone)]
enum Shape {
    Leaf(LeafSpec),
    And(Vec<Shape>),
    Or(Vec<Shape>),
}

impl Shape {
    fn size(&self) -> usize {
        match self {
            Shape::Leaf(_) => 1,
            Shape::And(c) | Shape::Or(c) => 1 + c.iter().map(Shape::size).sum::<usize>(),
        }
    }
}

#[derive(Debug, Clone)]
struct Dev {
    sensor: bool,
    caps: Vec<usize>,
    users: Vec<usize>,
    up: bool,
}

fn leaf_spec() -> impl Strategy<Value = LeafSpec> {
    prop_oneof![
        4 => (0..CAPS.len(), any::<bool>(), prop::collection::vec(0..USERS.len(), 0..2))
            .prop_map(|(cap, observe, users)| LeafSpec::Device { cap, observe, users }),
        1 => prop::option::of(prop_oneof![Just(Role::Assisted), Just(Role::Caregiver)])
            .prop_map(|role| LeafSpec::Contact { role }),
    ]
}

fn shape() -> impl Strategy<Value = Shape> {
    leaf_spec()
        .prop_map(Shape::Leaf)
        .prop_recursive(3, 12, 4, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 1..4).prop_map(Shape::And),
                prop::collection::vec(inner, 1..4).prop_map(Shape::Or),
            ]
        })
        .prop_filter("at most 12 nodes", |s| s.size() <= 12)
}

fn devices() -> impl Strategy<Value = Vec<Dev>> {
    prop::collection::vec(
        (
            any::<bool>(),
            prop::collection::vec(0..CAPS.len(), 1..3),
            prop::collection::vec(0..USERS.len(), 0..3),
            prop::bool::weighted(0.8),
        )
            .prop_map(|(sensor, caps, users, up)| Dev { sensor, caps, users, up }),
        0..5,
    )
}

fn pattern(users: &[usize]) -> ContextPattern {
    ContextPattern::users(users.iter().map(|u| sc(USERS[*u])))
}

fn build_tree(shape: &Shape, next: &mut usize) -> GoalNode {
    let n = *next;
    *next += 1;
    let id = sc(&format!("g{n:02}"));
    let label = format!("goal {n}");
    match shape {
        Shape::Leaf(LeafSpec::Device { cap, observe, users }) => {
            let action = if *observe {
                ActionSpec::observe(sc(CAPS[*cap]), pattern(users))
            } else {
                ActionSpec::actuate(sc(CAPS[*cap]), pattern(users))
            };
            GoalNode::leaf(id, label, action)
        }
        Shape::Leaf(LeafSpec::Contact { role }) => GoalNode::leaf(
            id,
            label,
            ActionSpec::contact(
                ContactFilter {
                    role: *role,
                    ..Default::default()
                },
                "Alert",
            ),
        ),
        Shape::And(c) => GoalNode::and(id, label, c.iter().map(|s| build_tree(s, next)).collect()),
        Shape::Or(c) => GoalNode::or(id, label, c.iter().map(|s| build_tree(s, next)).collect()),
    }
}

fn build_world(devs: &[Dev]) -> KnowledgeBase {
    let records: Vec<HardwareRecord> = devs
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let kind = if d.sensor { HardwareKind::Sensor } else { HardwareKind::Actuator };
            let caps: Vec<&str> = d.caps.iter().map(|c| CAPS[*c]).collect();
            let ctx = (!d.users.is_empty()).then(|| ContextRecord::with_users(d.users.iter().map(|u| sc(USERS[*u]))));
            let mut rec = atomic(&format!("dev{i}"), kind, &caps, ctx);
            rec.functioning = d.up;
            rec
        })
        .collect();
    let mut kb = world(&USERS.iter().map(|u| sc(u)).collect::<Vec<_>>(), &records);
    kb.add_axiom(Axiom::instance(sc("carla"), sc("Caregiver"))).unwrap();
    kb
}

/// Persons and their roles, as the world above declares them.
fn persons() -> Vec<(EntityId, Role)> {
    vec![
        (sc("ann"), Role::Assisted),
        (sc("carla"), Role::Caregiver),
        (sc("john"), Role::Assisted),
    ]
}

/// Can `target` carry out `action`? Decided from the generated data only.
fn valid(devs: &[Dev], action: &ActionSpec, target: &EntityId) -> bool {
    match action {
        ActionSpec::Device {
            capability,
            kind,
            pattern,
            ..
        } => devs.iter().enumerate().any(|(i, d)| {
            sc(&format!("dev{i}")) == *target
                && d.up
                && (d.sensor == (*kind == DeviceKind::Sensor))
                && d.caps.iter().any(|c| sc(CAPS[*c]) == *capability)
                && pattern.users.iter().all(|u| d.users.iter().any(|x| sc(USERS[*x]) == *u))
        }),
        ActionSpec::Contact { target: filter, .. } => persons()
            .iter()
            .any(|(p, role)| p == target && filter.role.is_none_or(|r| r == *role)),
    }
}

fn universe(devs: &[Dev]) -> Vec<EntityId> {
    let mut all: Vec<EntityId> = (0..devs.len()).map(|i| sc(&format!("dev{i}"))).collect();
    all.extend(persons().into_iter().map(|(p, _)| p));
    all
}

fn holds(node: &GoalNode, assignment: &BTreeMap<EntityId, Option<EntityId>>) -> bool {
    match &node.body {
        GoalBody::Leaf(_) => assignment[&node.id].is_some(),
        GoalBody::And(c) => c.iter().all(|n| holds(n, assignment)),
        GoalBody::Or(c) => c.iter().any(|n| holds(n, assignment)),
    }
}

/// Tries every way of giving each leaf either nothing or one target able
/// to perform it.
fn brute_force(devs: &[Dev], root: &GoalNode) -> bool {
    let leaves = root.leaves();
    let options: Vec<Vec<Option<EntityId>>> = leaves
        .iter()
        .map(|l| {
            let mut o = vec![None];
            o.extend(universe(devs).into_iter().filter(|t| valid(devs, l.action().unwrap(), t)).map(Some));
            o
        })
        .collect();
    let mut idx = vec![0usize; leaves.len()];
    loop {
        let assignment: BTreeMap<EntityId, Option<EntityId>> = leaves
            .iter()
            .zip(&idx)
            .map(|(l, &i)| (l.id.clone(), options_at(&options, l, &leaves, i)))
            .collect();
        if holds(root, &assignment) {
            return true;
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return false;
            }
            idx[pos] += 1;
            if idx[pos] < options[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

fn options_at(options: &[Vec<Option<EntityId>>], leaf: &GoalNode, leaves: &[&GoalNode], i: usize) -> Option<EntityId> {
    let pos = leaves.iter().position(|l| l.id == leaf.id).unwrap();
    options[pos][i].clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn evaluate_agrees_with_brute_force(s in shape(), devs in devices()) {
        let kb = build_world(&devs);
        let root = build_tree(&s, &mut 0);
        let report = evaluate(&kb, &root).unwrap();
        prop_assert_eq!(report.satisfiable, brute_force(&devs, &root));
        prop_assert_eq!(report.satisfiable, report.unsatisfied.is_empty());

        // every witness really can do the job
        for (leaf, target) in &report.bindings {
            let node = root.find(leaf).unwrap();
            prop_assert!(valid(&devs, node.action().unwrap(), target), "{} -> {}", leaf, target);
        }
        // every leaf reported unsatisfied has nothing able to serve it
        for u in &report.unsatisfied {
            let node = root.find(&u.leaf).unwrap();
            prop_assert!(!universe(&devs).iter().any(|t| valid(&devs, node.action().unwrap(), t)));
            prop_assert!(!report.bindings.contains_key(&u.leaf));
        }
        // a satisfiable report's bindings make the tree true on their own
        if report.satisfiable {
            let assignment = root.leaves().iter().map(|l| (l.id.clone(), report.binding(&l.id).cloned())).collect();
            prop_assert!(holds(&root, &assignment));
        }
    }

    #[test]
    fn evaluation_is_deterministic(s in shape(), devs in devices()) {
        let kb = build_world(&devs);
        let root = build_tree(&s, &mut 0);
        prop_assert_eq!(evaluate(&kb, &root).unwrap(), evaluate(&kb.clone(), &root).unwrap());
    }
}
