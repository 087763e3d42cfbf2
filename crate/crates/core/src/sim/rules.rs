//! Deduction rules: spotting an action pattern in sensor readings.
//!
//! A rule watches one capability. A reading that passes the comparator
//! arms the rule for that device; any later reading above `quiet_above`
//! disarms it. If the rule is still armed `quiet_ms` after the arming
//! reading, it fires once. Firing consumes the arm, so a rule only fires
//! again after a fresh triggering reading.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::context::ContextRecord;
use crate::id::EntityId;
use crate::kb::KnowledgeBase;
use crate::schema::inventory::DeviceInventory;
use crate::schema::vocab::{class, sc};

use super::activity::{ActivityClass, ActivityRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparator {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
}

impl Comparator {
    pub fn holds(self, value: f64, threshold: f64) -> bool {
        match self {
            Comparator::Ge => value >= threshold,
            Comparator::Gt => value > threshold,
            Comparator::Le => value <= threshold,
            Comparator::Lt => value < threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeductionRule {
    pub id: String,
    pub capability: EntityId,
    pub comparator: Comparator,
    pub threshold: f64,
    /// Readings above this value break the quiet period.
    #[serde(default)]
    pub quiet_above: Option<f64>,
    #[serde(default)]
    pub quiet_ms: i64,
    /// Action name of the deduced activity.
    pub emits: String,
}

impl DeductionRule {
    pub fn validate(&self) -> Result<(), String> {
        if self.quiet_ms < 0 {
            return Err(format!("rule {}: negative quiet period", self.id));
        }
        if !self.threshold.is_finite() || self.quiet_above.is_some_and(|q| !q.is_finite()) {
            return Err(format!("rule {}: thresholds must be finite", self.id));
        }
        if self.emits.is_empty() {
            return Err(format!("rule {}: empty action name", self.id));
        }
        Ok(())
    }
}

/// A numeric sensor reading fed to the rules.
#[derive(Debug, Clone, PartialEq)]
pub struct Reading {
    pub t: i64,
    pub device: EntityId,
    pub capability: EntityId,
    pub value: f64,
}

/// Rule firing due at `due`, armed by the reading at `armed_at`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arming {
    pub rule: usize,
    pub device: EntityId,
    pub armed_at: i64,
    pub due: i64,
}

/// Incremental rule state, shared by [`deduce`] and the simulator loop.
#[derive(Debug, Clone, Default)]
pub struct RuleState {
    armed: BTreeMap<(usize, EntityId), i64>,
}

impl RuleState {
    /// Updates the state with one reading; returns the armings it creates.
    pub fn observe(&mut self, rules: &[DeductionRule], reading: &Reading) -> Vec<Arming> {
        let mut out = Vec::new();
        for (i, rule) in rules.iter().enumerate() {
            if rule.capability != reading.capability {
                continue;
            }
            let key = (i, reading.device.clone());
            if rule.comparator.holds(reading.value, rule.threshold) {
                self.armed.insert(key, reading.t);
                out.push(Arming {
                    rule: i,
                    device: reading.device.clone(),
                    armed_at: reading.t,
                    due: reading.t + rule.quiet_ms,
                });
            } else if rule.quiet_above.is_some_and(|q| reading.value > q) {
                self.armed.remove(&key);
            }
        }
        out
    }

    /// True, and the arm consumed, when `arming` is still current.
    pub fn fire(&mut self, arming: &Arming) -> bool {
        let key = (arming.rule, arming.device.clone());
        if self.armed.get(&key) == Some(&arming.armed_at) {
            self.armed.remove(&key);
            true
        } else {
            false
        }
    }
}

/// The person a deduction is about: the first assisted person in the
/// device's context, else the first person.
pub fn resolve_subject(kb: &KnowledgeBase, ctx: Option<&ContextRecord>) -> Option<EntityId> {
    let users = &ctx?.users;
    let pick = |class_name: &str| {
        users
            .iter()
            .find(|u| kb.is_instance_of(u, &sc(class_name)))
            .cloned()
    };
    pick(class::ASSISTED).or_else(|| pick(class::PERSON))
}

/// Activities deduced from `window` up to time `until`.
///
/// The window holds the readings actually observed, in time order (ties
/// keep their order). Records are numbered from 1 in firing order. A
/// firing whose device context names no person yields nothing.
pub fn deduce(
    kb: &KnowledgeBase,
    rules: &[DeductionRule],
    window: &[Reading],
    until: i64,
) -> Vec<ActivityRecord> {
    let inventory = DeviceInventory::from_kb(kb);
    let mut readings: Vec<&Reading> = window.iter().collect();
    readings.sort_by_key(|r| r.t);
    let mut state = RuleState::default();
    let mut pending: Vec<Arming> = Vec::new();
    let mut fired: Vec<(i64, Arming)> = Vec::new();
    let mut settle = |state: &mut RuleState, pending: &mut Vec<Arming>, before: Option<i64>| {
        // timers at t fire after the readings at t
        pending.sort_by(|a, b| a.due.cmp(&b.due).then(a.rule.cmp(&b.rule)).then(a.device.cmp(&b.device)));
        let (due, later): (Vec<_>, Vec<_>) = pending.drain(..).partition(|a| {
            a.due <= until && before.is_none_or(|t| a.due < t)
        });
        *pending = later;
        for a in due {
            if state.fire(&a) {
                fired.push((a.due, a));
            }
        }
    };
    for r in readings {
        settle(&mut state, &mut pending, Some(r.t));
        pending.extend(state.observe(rules, r));
    }
    settle(&mut state, &mut pending, None);
    let mut out = Vec::new();
    for (t, a) in fired {
        let ctx = inventory.effective_context(&a.device).cloned();
        let Some(subject) = resolve_subject(kb, ctx.as_ref()) else {
            continue;
        };
        out.push(ActivityRecord {
            id: out.len() as u64 + 1,
            t,
            subject,
            action: rules[a.rule].emits.clone(),
            instrument: Some(a.device),
            context: ctx.unwrap_or_default(),
            class: ActivityClass::Deduced,
        });
    }
    out
}
