//! Deterministic discrete-event simulation of agents, devices and persons.
//!
//! A run loads a world, replays the scenario events in `(t, file order)`,
//! lets each agent run its assistance behavior, and checks the scenario's
//! expectations against the resulting trace.

pub mod activity;
pub mod assistance;
mod engine;
pub mod rules;
pub mod scenario;
pub mod trace;

use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::goal::GoalError;
use crate::kb::{KbError, KnowledgeBase};
use crate::schema::{load_world, read_document, WorldError};
use crate::text::Document;

pub use activity::{ActivityClass, ActivityError, ActivityLog, ActivityRecord};
pub use assistance::{assistance_behavior, AssistanceAction, AssistanceInput, AssistanceState};
pub use engine::{PURPOSE_NOTIFY_CAREGIVER, PURPOSE_OFFER_CANCEL};
pub use rules::{deduce, Comparator, DeductionRule, Reading};
pub use scenario::{AssistanceConfig, EscalationMode, EventKind, Expectation, Scenario, ScenarioError, ScenarioEvent};
pub use trace::{to_jsonl, TraceHeader, TraceRecord};

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    World(#[from] WorldError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Goal(#[from] GoalError),
    #[error(transparent)]
    Activity(#[from] ActivityError),
    #[error(transparent)]
    Kb(#[from] KbError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub expectation: Expectation,
    pub observed: usize,
    pub passed: bool,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.expectation;
        let status = if self.passed { "PASS" } else { "FAIL" };
        match (&e.present, &e.absent) {
            (Some(k), _) => write!(f, "{status} present {k}")?,
            (_, Some(k)) => write!(f, "{status} absent {k}")?,
            _ => write!(f, "{status} ?")?,
        }
        if let Some(t) = e.t {
            write!(f, " t={t}")?;
        }
        if let Some(em) = &e.emitter {
            write!(f, " emitter={em}")?;
        }
        if let Some(c) = e.count {
            write!(f, " count={c}")?;
        }
        write!(f, " (observed {})", self.observed)
    }
}

/// Checks one expectation against a trace.
pub fn check(expectation: &Expectation, trace: &[TraceRecord]) -> Verdict {
    let kind = expectation.present.as_ref().or(expectation.absent.as_ref());
    let observed = trace
        .iter()
        .filter(|r| Some(&r.kind) == kind)
        .filter(|r| expectation.t.is_none_or(|t| r.t == t))
        .filter(|r| expectation.emitter.as_ref().is_none_or(|e| &r.emitter == e))
        .count();
    let passed = if expectation.present.is_some() {
        match expectation.count {
            Some(c) => observed == c,
            None => observed >= 1,
        }
    } else {
        observed == 0
    };
    Verdict {
        expectation: expectation.clone(),
        observed,
        passed,
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub header: TraceHeader,
    pub trace: Vec<TraceRecord>,
    pub activities: Vec<ActivityRecord>,
    pub verdicts: Vec<Verdict>,
    /// World state at the end of the run, activities included.
    pub kb: KnowledgeBase,
}

impl RunOutput {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn trace_jsonl(&self) -> String {
        to_jsonl(&self.header, &self.trace)
    }

    pub fn records_of<'a>(&'a self, kind: &'a str) -> impl Iterator<Item = &'a TraceRecord> + 'a {
        self.trace.iter().filter(move |r| r.kind == kind)
    }

    pub fn count(&self, kind: &str) -> usize {
        self.records_of(kind).count()
    }

    /// Position and record of the first trace entry of `kind`.
    pub fn first(&self, kind: &str) -> Option<(usize, &TraceRecord)> {
        self.trace.iter().enumerate().find(|(_, r)| r.kind == kind)
    }
}

/// Runs `scenario` over `world` with `config` (the scenario's own config
/// is ignored). `seed` is recorded in the header only.
pub fn run(world: &Document, scenario: &Scenario, config: &AssistanceConfig, seed: u64) -> Result<RunOutput, SimError> {
    let loaded = load_world(world)?;
    let mut checked = scenario.clone();
    checked.config = *config;
    checked.validate(&loaded.kb)?;
    let mut engine = engine::Engine::new(loaded.kb, config, &scenario.rules, &scenario.composites)?;
    engine.run(&scenario.events)?;
    let verdicts = scenario.expect.iter().map(|e| check(e, &engine.trace)).collect();
    Ok(RunOutput {
        header: TraceHeader::new(seed, scenario.name.clone(), *config),
        activities: engine.log.records().to_vec(),
        trace: std::mem::take(&mut engine.trace),
        verdicts,
        kb: engine.kb,
    })
}

/// Reads a scenario file and its world, then runs it with its own config.
pub fn run_file(path: &Path, seed: u64) -> Result<RunOutput, SimError> {
    let (scenario, world_path) = Scenario::from_file(path)?;
    let world = read_document(&world_path)?;
    run(&world, &scenario, &scenario.config, seed)
}
