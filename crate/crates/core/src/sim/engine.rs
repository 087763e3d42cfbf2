//! The event loop.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use crate::compose::{recompose_in, ComposeError, CompositeSpec};
use crate::context::{ContextRecord, TimeInterval};
use crate::goal::{evaluate, goals_from_kb, leaf_candidates, resolve_contacts, ActionSpec, GoalNode, Verb};
use crate::id::EntityId;
use crate::kb::{InstanceMode, KnowledgeBase};
use crate::literal::Literal;
use crate::schema::inventory::DeviceInventory;
use crate::schema::vocab::{class, prop, sc};

use super::activity::{ActivityClass, ActivityLog, ActivityRecord};
use super::assistance::{assistance_behavior, AssistanceAction, AssistanceInput, AssistanceState};
use super::rules::{resolve_subject, Arming, DeductionRule, Reading, RuleState};
use super::scenario::{AssistanceConfig, EventKind, ScenarioEvent};
use super::trace::{Payload, TraceRecord};
use super::SimError;

/// Goal purposes the assistance behavior looks up in an agent's trees.
pub const PURPOSE_OFFER_CANCEL: &str = "OfferCancel";
pub const PURPOSE_NOTIFY_CAREGIVER: &str = "NotifyCaregiver";

const EVENT: u8 = 0;
const TIMER: u8 = 1;

pub(crate) fn engine_id() -> EntityId {
    EntityId::new("sim", "engine").expect("valid id")
}

enum Timer {
    Rule(Arming),
    Agent(usize),
}

struct Agent {
    id: EntityId,
    goals: Vec<GoalNode>,
    assists: BTreeSet<EntityId>,
    state: AssistanceState,
    bindings: BTreeMap<EntityId, EntityId>,
}

impl Agent {
    fn find_purpose(&self, purpose: &str) -> Option<&GoalNode> {
        self.goals.iter().find_map(|g| g.find_purpose(purpose))
    }
}

pub(crate) struct Engine<'a> {
    pub kb: KnowledgeBase,
    config: &'a AssistanceConfig,
    rules: &'a [DeductionRule],
    composites: Vec<(&'a CompositeSpec, Option<String>)>,
    agents: Vec<Agent>,
    pub trace: Vec<TraceRecord>,
    pub log: ActivityLog,
    rule_state: RuleState,
    queue: BinaryHeap<Reverse<(i64, u8, u64)>>,
    timers: BTreeMap<u64, Timer>,
    next_timer: u64,
}

impl<'a> Engine<'a> {
    pub fn new(
        kb: KnowledgeBase,
        config: &'a AssistanceConfig,
        rules: &'a [DeductionRule],
        composites: &'a [CompositeSpec],
    ) -> Result<Self, SimError> {
        let mut agents = Vec::new();
        let ids = kb
            .instances_of(&sc(class::AGENT), InstanceMode::Inferred)
            .unwrap_or_default();
        for id in ids {
            let goals = goals_from_kb(&kb, &id)?;
            let assists = kb.objects_of(&id, &sc(prop::ASSISTS)).into_iter().collect();
            agents.push(Agent {
                id,
                goals,
                assists,
                state: AssistanceState::Idle,
                bindings: BTreeMap::new(),
            });
        }
        Ok(Self {
            kb,
            config,
            rules,
            composites: composites.iter().map(|c| (c, None)).collect(),
            agents,
            trace: Vec::new(),
            log: ActivityLog::new(),
            rule_state: RuleState::default(),
            queue: BinaryHeap::new(),
            timers: BTreeMap::new(),
            next_timer: 0,
        })
    }

    pub fn run(&mut self, events: &[ScenarioEvent]) -> Result<(), SimError> {
        self.rebind(0, true)?;
        self.recompose(0);
        for (i, ev) in events.iter().enumerate() {
            self.queue.push(Reverse((ev.t, EVENT, i as u64)));
        }
        while let Some(Reverse((t, class_, seq))) = self.queue.pop() {
            if class_ == EVENT {
                self.handle_event(t, &events[seq as usize].kind)?;
            } else if let Some(timer) = self.timers.remove(&seq) {
                self.handle_timer(t, timer)?;
            }
        }
        Ok(())
    }

    fn emit(&mut self, t: i64, emitter: &EntityId, kind: &str, payload: Payload) {
        self.trace.push(TraceRecord {
            t,
            emitter: emitter.clone(),
            kind: kind.to_string(),
            payload: payload.build(),
        });
    }

    fn schedule(&mut self, t: i64, timer: Timer) {
        let seq = self.next_timer;
        self.next_timer += 1;
        self.timers.insert(seq, timer);
        self.queue.push(Reverse((t, TIMER, seq)));
    }

    fn inventory(&self) -> DeviceInventory {
        DeviceInventory::from_kb(&self.kb)
    }

    #[allow(clippy::too_many_arguments)]
    fn record(
        &mut self,
        t: i64,
        subject: &EntityId,
        action: &str,
        instrument: Option<&EntityId>,
        context: ContextRecord,
        class_: ActivityClass,
    ) -> Result<ActivityRecord, SimError> {
        let rec = self
            .log
            .record(&mut self.kb, t, subject, action, instrument, context, class_)?;
        let mut payload = Payload::new()
            .int("id", rec.id as i64)
            .text("class", rec.class.to_string())
            .text("action", rec.action.clone());
        if let Some(inst) = &rec.instrument {
            payload = payload.id("instrument", inst);
        }
        self.emit(t, subject, "ActivityRecorded", payload);
        Ok(rec)
    }

    /// Re-evaluates every goal tree and reports binding changes.
    fn rebind(&mut self, t: i64, initial: bool) -> Result<(), SimError> {
        for i in 0..self.agents.len() {
            let mut bindings = BTreeMap::new();
            let mut reasons = BTreeMap::new();
            for root in &self.agents[i].goals {
                let report = evaluate(&self.kb, root)?;
                bindings.extend(report.bindings);
                for u in report.unsatisfied {
                    reasons.insert(u.leaf, u.reason);
                }
            }
            let agent_id = self.agents[i].id.clone();
            let leaves: Vec<EntityId> = self.agents[i]
                .goals
                .iter()
                .flat_map(|g| g.leaves())
                .map(|l| l.id.clone())
                .collect();
            for leaf in leaves {
                let old = self.agents[i].bindings.get(&leaf).cloned();
                let new = bindings.get(&leaf).cloned();
                if !initial && old == new {
                    continue;
                }
                let payload = Payload::new().id("leaf", &leaf);
                match (old, new) {
                    (Some(from), Some(to)) => {
                        self.emit(t, &agent_id, "GoalRebound", payload.id("from", &from).id("to", &to))
                    }
                    (_, Some(to)) => self.emit(t, &agent_id, "GoalBound", payload.id("target", &to)),
                    (_, None) => {
                        let reason = reasons.get(&leaf).cloned().unwrap_or_else(|| "not selected".into());
                        self.emit(t, &agent_id, "GoalUnbound", payload.text("reason", reason))
                    }
                }
            }
            self.agents[i].bindings = bindings;
        }
        Ok(())
    }

    fn recompose(&mut self, t: i64) {
        let inventory = self.inventory();
        let engine = engine_id();
        for i in 0..self.composites.len() {
            let spec = self.composites[i].0;
            let (kind, payload, summary) = match recompose_in(&inventory, spec) {
                Ok(vc) => {
                    let devices: Vec<String> = vc.devices().iter().map(ToString::to_string).collect();
                    let summary = devices.join(",");
                    (
                        "Recomposed",
                        Payload::new().text("name", spec.name.clone()).text("devices", summary.clone()),
                        summary,
                    )
                }
                Err(ComposeError::NoCover { missing }) => {
                    let list: Vec<String> = missing.iter().map(ToString::to_string).collect();
                    let summary = format!("missing {}", list.join(","));
                    (
                        "RecomposeFailed",
                        Payload::new().text("name", spec.name.clone()).text("missing", list.join(",")),
                        summary,
                    )
                }
                Err(other) => (
                    "RecomposeFailed",
                    Payload::new().text("name", spec.name.clone()).text("reason", other.to_string()),
                    other.to_string(),
                ),
            };
            if self.composites[i].1.as_deref() != Some(summary.as_str()) {
                self.emit(t, &engine, kind, payload);
                self.composites[i].1 = Some(summary);
            }
        }
    }

    /// The bound device a reading from `device` counts for, if any goal
    /// currently observes `capability` through it.
    fn observing_binding(&self, inventory: &DeviceInventory, device: &EntityId, capability: &EntityId) -> Option<EntityId> {
        if !inventory.effectively_functioning(device) {
            return None;
        }
        for agent in &self.agents {
            for leaf in agent.goals.iter().flat_map(|g| g.leaves()) {
                let Some(ActionSpec::Device {
                    capability: cap,
                    verb: Verb::Observe,
                    ..
                }) = leaf.action()
                else {
                    continue;
                };
                let Some(bound) = agent.bindings.get(&leaf.id) else {
                    continue;
                };
                if cap == capability && (bound == device || inventory.descendants(bound).contains(device)) {
                    return Some(bound.clone());
                }
            }
        }
        None
    }

    fn set_functioning(&mut self, t: i64, device: &EntityId, up: bool) -> Result<(), SimError> {
        self.kb
            .set_data_value(device, &sc(prop::IS_FUNCTIONING), Literal::Boolean(up))?;
        let kind = if up { "DeviceRecovered" } else { "DeviceFailed" };
        self.emit(t, device, kind, Payload::new());
        self.rebind(t, false)?;
        self.recompose(t);
        Ok(())
    }

    fn handle_event(&mut self, t: i64, kind: &EventKind) -> Result<(), SimError> {
        match kind {
            EventKind::SensorReading {
                device,
                capability,
                value,
            } => {
                let inventory = self.inventory();
                let numeric = value.as_f64();
                let bound = numeric.and(self.observing_binding(&inventory, device, capability));
                self.emit(
                    t,
                    device,
                    "SensorReading",
                    Payload::new()
                        .id("capability", capability)
                        .lit("value", value.clone())
                        .flag("accepted", bound.is_some()),
                );
                if let (Some(bound), Some(v)) = (bound, numeric) {
                    let reading = Reading {
                        t,
                        device: bound,
                        capability: capability.clone(),
                        value: v,
                    };
                    for arming in self.rule_state.observe(self.rules, &reading) {
                        self.schedule(arming.due, Timer::Rule(arming));
                    }
                }
            }
            EventKind::DeviceFailure { device } => self.set_functioning(t, device, false)?,
            EventKind::DeviceRecovery { device } => self.set_functioning(t, device, true)?,
            EventKind::ButtonPress { device, user } => {
                self.emit(t, device, "ButtonPressed", Payload::new().id("user", user));
                let inventory = self.inventory();
                if self.kb.is_instance_of(user, &sc(class::PERSON)) {
                    let ctx = inventory.effective_context(device).cloned().unwrap_or_default();
                    self.record(t, user, "PressButton", Some(device), ctx, ActivityClass::Deduced)?;
                }
                for i in 0..self.agents.len() {
                    if self.press_counts(&inventory, i, device) {
                        let input = AssistanceInput::ButtonPress { t, user: user.clone() };
                        self.step(t, i, input)?;
                    }
                }
            }
            EventKind::CaregiverAck { user } => {
                self.emit(t, user, "CaregiverResponded", Payload::new());
                for i in 0..self.agents.len() {
                    let input = AssistanceInput::CaregiverAck { t, user: user.clone() };
                    self.step(t, i, input)?;
                }
            }
            EventKind::AgendaEntry {
                user,
                label,
                t_start,
                t_end,
            } => {
                let mut ctx = ContextRecord::with_users([user.clone()]);
                ctx.time = TimeInterval::new(*t_start, *t_end);
                self.record(t, user, label, None, ctx, ActivityClass::Scheduled)?;
                self.emit(
                    t,
                    user,
                    "ActivityScheduled",
                    Payload::new().text("label", label.clone()).int("start", *t_start).int("end", *t_end),
                );
            }
            EventKind::Message { from, to, kind, payload } => {
                self.emit(
                    t,
                    from,
                    "MessageDelivered",
                    Payload::new().id("to", to).text("kind", kind.clone()).text("payload", payload.clone()),
                );
                let class_ = if self.kb.is_instance_of(from, &sc(class::PERSON)) {
                    Some(ActivityClass::Deduced)
                } else if self.kb.is_instance_of(from, &sc(class::AGENT)) {
                    Some(ActivityClass::Executed)
                } else {
                    None
                };
                if let Some(class_) = class_ {
                    self.record(t, from, kind, None, ContextRecord::with_users([to.clone()]), class_)?;
                }
            }
        }
        Ok(())
    }

    /// Whether a press on `device` reaches agent `i`: the device, or the
    /// root it belongs to, must be able to serve the cancel goal's input.
    fn press_counts(&self, inventory: &DeviceInventory, i: usize, device: &EntityId) -> bool {
        if !inventory.effectively_functioning(device) {
            return false;
        }
        let Some(offer) = self.agents[i].find_purpose(PURPOSE_OFFER_CANCEL) else {
            return false;
        };
        offer.leaves().into_iter().any(|leaf| match leaf.action() {
            Some(action @ ActionSpec::Device { verb: Verb::Observe, .. }) => leaf_candidates(&self.kb, inventory, action)
                .iter()
                .any(|c| c == device || inventory.descendants(c).contains(device)),
            _ => false,
        })
    }

    fn handle_timer(&mut self, t: i64, timer: Timer) -> Result<(), SimError> {
        match timer {
            Timer::Rule(arming) => {
                if !self.rule_state.fire(&arming) {
                    return Ok(());
                }
                let rule = &self.rules[arming.rule];
                let inventory = self.inventory();
                let ctx = inventory.effective_context(&arming.device).cloned();
                let Some(subject) = resolve_subject(&self.kb, ctx.as_ref()) else {
                    self.emit(t, &arming.device, "DeductionUnresolved", Payload::new().text("rule", rule.id.clone()));
                    return Ok(());
                };
                let action = rule.emits.clone();
                let rule_id = rule.id.clone();
                let rec = self.record(
                    t,
                    &subject,
                    &action,
                    Some(&arming.device),
                    ctx.unwrap_or_default(),
                    ActivityClass::Deduced,
                )?;
                self.emit(
                    t,
                    &arming.device,
                    &format!("{action}Deduced"),
                    Payload::new()
                        .text("rule", rule_id)
                        .id("subject", &subject)
                        .int("activity", rec.id as i64),
                );
                for i in 0..self.agents.len() {
                    if self.agents[i].assists.contains(&subject) {
                        self.on_deduction(t, i, &subject)?;
                    }
                }
            }
            Timer::Agent(i) => {
                let caregiver = match &self.agents[i].state {
                    AssistanceState::CancelWindow { subject, deadline, .. } if *deadline == t => {
                        self.best_caregiver(i, subject)
                    }
                    _ => None,
                };
                self.step(t, i, AssistanceInput::Deadline { t, caregiver })?;
            }
        }
        Ok(())
    }

    fn on_deduction(&mut self, t: i64, i: usize, subject: &EntityId) -> Result<(), SimError> {
        let offer_shown = match self.agents[i].find_purpose(PURPOSE_OFFER_CANCEL) {
            Some(node) => evaluate(&self.kb, node)?.satisfiable,
            None => false,
        };
        let input = AssistanceInput::FallDeduced {
            t,
            subject: subject.clone(),
            offer_shown,
        };
        self.step(t, i, input)
    }

    /// First contact of the caregiver-notification goal, about `subject`
    /// unless the goal names someone else.
    fn best_caregiver(&self, i: usize, subject: &EntityId) -> Option<EntityId> {
        let node = self.agents[i].find_purpose(PURPOSE_NOTIFY_CAREGIVER)?;
        node.leaves().into_iter().find_map(|leaf| match leaf.action() {
            Some(ActionSpec::Contact { target, .. }) => {
                let mut filter = target.clone();
                filter.about.get_or_insert_with(|| subject.clone());
                resolve_contacts(&self.kb, &filter).into_iter().next()
            }
            _ => None,
        })
    }

    /// Device bound to the first actuating leaf under `purpose`.
    fn actuator_for(&self, i: usize, purpose: &str) -> Result<Option<EntityId>, SimError> {
        let Some(node) = self.agents[i].find_purpose(purpose) else {
            return Ok(None);
        };
        let report = evaluate(&self.kb, node)?;
        Ok(node.leaves().into_iter().find_map(|leaf| match leaf.action() {
            Some(ActionSpec::Device { verb: Verb::Actuate, .. }) => report.binding(&leaf.id).cloned(),
            _ => None,
        }))
    }

    fn step(&mut self, t: i64, i: usize, input: AssistanceInput) -> Result<(), SimError> {
        let (next, actions) = assistance_behavior(&self.agents[i].state, &input, self.config);
        let agent = self.agents[i].id.clone();
        if next != self.agents[i].state {
            self.emit(
                t,
                &agent,
                "AgentState",
                Payload::new()
                    .text("from", self.agents[i].state.name())
                    .text("to", next.name()),
            );
        }
        self.agents[i].state = next;
        for action in actions {
            match action {
                AssistanceAction::CancelOffered { subject, deadline } => {
                    let display = self.actuator_for(i, PURPOSE_OFFER_CANCEL)?;
                    let mut payload = Payload::new().id("subject", &subject).int("deadline", deadline);
                    if let Some(d) = &display {
                        payload = payload.id("display", d);
                        let ctx = self.inventory().effective_context(d).cloned().unwrap_or_default();
                        self.record(t, &agent, "DisplayCancelDelay", Some(d), ctx, ActivityClass::Executed)?;
                    }
                    self.emit(t, &agent, "CancelOffered", payload);
                }
                AssistanceAction::CancelUnavailable { subject, deadline } => {
                    self.emit(
                        t,
                        &agent,
                        "CancelUnavailable",
                        Payload::new().id("subject", &subject).int("deadline", deadline),
                    );
                }
                AssistanceAction::AssistanceCancelled { subject } => {
                    self.emit(t, &agent, "AssistanceCancelled", Payload::new().id("subject", &subject));
                }
                AssistanceAction::NotifyCaregiver {
                    subject,
                    caregiver,
                    deadline,
                } => {
                    self.record(
                        t,
                        &agent,
                        "NotifyCaregiver",
                        None,
                        ContextRecord::with_users([caregiver.clone()]),
                        ActivityClass::Executed,
                    )?;
                    self.emit(
                        t,
                        &agent,
                        "NotifyCaregiver",
                        Payload::new()
                            .id("subject", &subject)
                            .id("caregiver", &caregiver)
                            .int("deadline", deadline),
                    );
                }
                AssistanceAction::NotifyEmergency { subject } => {
                    self.record(
                        t,
                        &agent,
                        "NotifyEmergency",
                        None,
                        ContextRecord::with_users([subject.clone()]),
                        ActivityClass::Executed,
                    )?;
                    self.emit(t, &agent, "NotifyEmergency", Payload::new().id("subject", &subject));
                }
                AssistanceAction::AssistanceCompleted { subject, caregiver } => {
                    self.emit(
                        t,
                        &agent,
                        "AssistanceCompleted",
                        Payload::new().id("subject", &subject).id("caregiver", &caregiver),
                    );
                }
                AssistanceAction::Timer(at) => self.schedule(at, Timer::Agent(i)),
            }
        }
        Ok(())
    }
}
