//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage, parse or load errors, 2 when a
//! scenario expectation fails or `plan --require-satisfiable` finds the
//! goal unsatisfiable.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::compose::{decompose, recompose, ComposeError, CompositeSpec};
use crate::context::{find_devices, ContextPattern, KindFilter};
use crate::goal::{evaluate, goal_tree};
use crate::id::EntityId;
use crate::kb::{AxiomKind, InstanceMode, KnowledgeBase};
use crate::literal::Literal;
use crate::schema::inventory::DeviceInventory;
use crate::schema::vocab::{prop, sc};
use crate::schema::{load_world, read_document};
use crate::sim::{run_file, EscalationMode, TraceRecord};
use crate::text;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ambient", version, about = "Ambient-assistance knowledge base, planner and simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and load a document; print its size.
    Validate { file: PathBuf },
    /// Axiom counts per statement kind.
    Stats { file: PathBuf },
    /// Ask the knowledge base a question.
    Query(QueryArgs),
    /// Devices offering a capability in a matching context.
    Match(MatchArgs),
    /// Assemble a virtual composite or list a composite's parts.
    Compose(ComposeArgs),
    /// Bind a goal tree to devices and contacts.
    Plan(PlanArgs),
    /// Run a scenario and check its expectations.
    Run(RunArgs),
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("question").required(true))]
pub struct QueryArgs {
    pub file: PathBuf,
    /// Is A a subclass of B?
    #[arg(long, num_args = 2, value_names = ["A", "B"], group = "question")]
    pub subclass: Option<Vec<EntityId>>,
    /// Instances of a class.
    #[arg(long, value_name = "CLASS", group = "question")]
    pub instances: Option<EntityId>,
    /// Only individuals asserted directly into the class.
    #[arg(long, requires = "instances")]
    pub direct: bool,
    /// Values of property P on subject S.
    #[arg(long, num_args = 2, value_names = ["S", "P"], group = "question")]
    pub prop: Option<Vec<EntityId>>,
}

#[derive(Debug, Args)]
pub struct MatchArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub pattern: ContextPattern,
    #[arg(long)]
    pub capability: EntityId,
    #[arg(long, default_value = "any")]
    pub kind: KindFilter,
    /// Mark a device as not functioning first (repeatable).
    #[arg(long)]
    pub fail: Vec<EntityId>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("mode").required(true))]
pub struct ComposeArgs {
    pub file: PathBuf,
    /// JSON composite spec.
    #[arg(long, group = "mode")]
    pub spec: Option<PathBuf>,
    /// List the components of a composite device.
    #[arg(long, value_name = "ID", group = "mode")]
    pub decompose: Option<EntityId>,
    #[arg(long)]
    pub fail: Vec<EntityId>,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    pub file: PathBuf,
    /// Root goal id.
    #[arg(long)]
    pub goal: EntityId,
    #[arg(long)]
    pub require_satisfiable: bool,
    #[arg(long)]
    pub fail: Vec<EntityId>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    pub scenario: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON-lines trace here.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

/// Each command with the library operations it exercises.
pub const DISPATCH: &[(&str, &[&str])] = &[
    (
        "validate",
        &[
            "text::parse",
            "text::stats",
            "schema::base_schema",
            "schema::load_world",
            "schema::hardware_view",
            "schema::person_view",
            "schema::agent_view",
            "kb::add_axiom",
            "kb::axiom_count",
        ],
    ),
    ("stats", &["text::parse", "text::serialize", "text::stats"]),
    ("query", &["kb::is_subclass_of", "kb::instances_of", "kb::property_values"]),
    ("match", &["context::matches", "context::find_devices"]),
    ("compose", &["compose::recompose", "compose::decompose"]),
    ("plan", &["goal::goal_tree", "goal::evaluate", "schema::relations_of"]),
    (
        "run",
        &[
            "sim::run",
            "goal::goals_from_kb",
            "sim::assistance_behavior",
            "sim::deduce",
            "sim::record_activity",
        ],
    ),
];

struct Failure(i32, String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(EXIT_ERROR, e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (program name first) and runs the command.
pub fn main_with(args: impl IntoIterator<Item = String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Validate { file } => validate(&file, out),
        Command::Stats { file } => stats(&file, out),
        Command::Query(a) => query(a, out),
        Command::Match(a) => match_cmd(a, out),
        Command::Compose(a) => compose(a, out),
        Command::Plan(a) => plan(a, out),
        Command::Run(a) => run(a, out),
    }
}

/// Loads `file` over the shipped schema, then marks `failed` devices.
fn load(file: &Path, failed: &[EntityId]) -> Result<KnowledgeBase, Failure> {
    let mut kb = load_world(&read_document(file)?)?.kb;
    for id in failed {
        if DeviceInventory::from_kb(&kb).get(id).is_none() {
            return Err(Failure(EXIT_ERROR, format!("{id} is not a device")));
        }
        kb.set_data_value(id, &sc(prop::IS_FUNCTIONING), Literal::Boolean(false))?;
    }
    Ok(kb)
}

fn validate(file: &Path, out: &mut dyn Write) -> Outcome {
    let doc = read_document(file)?;
    let world = load_world(&doc)?;
    let s = text::stats(&doc);
    writeln!(out, "axioms={} bytes={}", s.axiom_count, s.byte_size)?;
    // schema and file together, duplicates merged
    writeln!(out, "loaded={}", world.kb.axiom_count())?;
    Ok(EXIT_OK)
}

fn stats(file: &Path, out: &mut dyn Write) -> Outcome {
    let doc = read_document(file)?;
    let s = text::stats(&doc);
    let mut per_kind: BTreeMap<AxiomKind, usize> = AxiomKind::ALL.iter().map(|k| (*k, 0)).collect();
    for ax in doc.statements() {
        *per_kind.entry(ax.kind()).or_default() += 1;
    }
    writeln!(out, "axiom_count={}", s.axiom_count)?;
    writeln!(out, "byte_size={}", s.byte_size)?;
    writeln!(out, "prefixes={}", doc.prefixes().len())?;
    for (kind, n) in per_kind {
        writeln!(out, "{}={n}", kind.keyword())?;
    }
    Ok(EXIT_OK)
}

fn query(a: QueryArgs, out: &mut dyn Write) -> Outcome {
    let kb = load(&a.file, &[])?;
    if let Some(pair) = a.subclass {
        writeln!(out, "{}", kb.is_subclass_of(&pair[0], &pair[1])?)?;
    } else if let Some(class_) = a.instances {
        let mode = if a.direct {
            InstanceMode::Direct
        } else {
            InstanceMode::Inferred
        };
        for id in kb.instances_of(&class_, mode)? {
            writeln!(out, "{id}")?;
        }
    } else if let Some(pair) = a.prop {
        for v in kb.property_values(&pair[0], &pair[1])? {
            writeln!(out, "{v}")?;
        }
    }
    Ok(EXIT_OK)
}

fn match_cmd(a: MatchArgs, out: &mut dyn Write) -> Outcome {
    let kb = load(&a.file, &a.fail)?;
    for id in find_devices(&kb, &a.pattern, &a.capability, a.kind) {
        writeln!(out, "{id}")?;
    }
    Ok(EXIT_OK)
}

fn compose(a: ComposeArgs, out: &mut dyn Write) -> Outcome {
    let kb = load(&a.file, &a.fail)?;
    if let Some(id) = a.decompose {
        for part in decompose(&kb, &id)? {
            writeln!(out, "{part}")?;
        }
        return Ok(EXIT_OK);
    }
    let path = a.spec.expect("clap enforces one mode");
    let text = std::fs::read_to_string(&path).map_err(|e| Failure(EXIT_ERROR, format!("{}: {e}", path.display())))?;
    let spec: CompositeSpec =
        serde_json::from_str(&text).map_err(|e| Failure(EXIT_ERROR, format!("{}: {e}", path.display())))?;
    match recompose(&kb, &spec) {
        Ok(vc) => {
            writeln!(out, "composite {} devices={}", spec.name, vc.devices().len())?;
            for (req, dev) in &vc.assignment {
                writeln!(out, "{req} -> {dev}")?;
            }
        }
        Err(ComposeError::NoCover { missing }) => {
            writeln!(out, "composite {} NoCover", spec.name)?;
            for req in missing {
                writeln!(out, "missing {req}")?;
            }
        }
        Err(e) => return Err(e.into()),
    }
    Ok(EXIT_OK)
}

fn plan(a: PlanArgs, out: &mut dyn Write) -> Outcome {
    let kb = load(&a.file, &a.fail)?;
    let tree = goal_tree(&kb, &a.goal)?;
    let report = evaluate(&kb, &tree)?;
    writeln!(out, "satisfiable={}", report.satisfiable)?;
    let mut payload = BTreeMap::new();
    payload.insert("satisfiable".to_string(), Literal::Boolean(report.satisfiable));
    for leaf in tree.leaves() {
        if let Some(target) = report.binding(&leaf.id) {
            writeln!(out, "bind {} {} -> {target}", leaf.id, leaf.label)?;
            payload.insert(format!("bind:{}", leaf.id), Literal::String(target.to_string()));
        }
    }
    for u in &report.unsatisfied {
        writeln!(out, "unsatisfied {}: {}", u.leaf, u.reason)?;
        payload.insert(format!("unsatisfied:{}", u.leaf), Literal::String(u.reason.clone()));
    }
    let record = TraceRecord {
        t: 0,
        emitter: a.goal.clone(),
        kind: "PlanReport".into(),
        payload,
    };
    writeln!(out, "{}", serde_json::to_string(&record)?)?;
    if a.require_satisfiable && !report.satisfiable {
        return Ok(EXIT_FAILED);
    }
    Ok(EXIT_OK)
}

fn run(a: RunArgs, out: &mut dyn Write) -> Outcome {
    let output = run_file(&a.scenario, a.seed)?;
    if let Some(path) = &a.trace {
        std::fs::write(path, output.trace_jsonl()).map_err(|e| Failure(EXIT_ERROR, format!("{}: {e}", path.display())))?;
    }
    let mode = match output.header.config.escalation_mode {
        EscalationMode::Fallback => "fallback",
        EscalationMode::Both => "both",
    };
    writeln!(
        out,
        "trace records={} activities={} escalation={mode}",
        output.trace.len(),
        output.activities.len()
    )?;
    for v in &output.verdicts {
        writeln!(out, "{v}")?;
    }
    Ok(if output.passed() { EXIT_OK } else { EXIT_FAILED })
}
