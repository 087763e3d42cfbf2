//! Read an agent's goal tree from the world and bind its leaves to devices
//! and people.
//!
//! `cargo run --example goal_planning`

use std::path::PathBuf;

use ambient::goal::{evaluate, goals_from_kb, GoalBody, GoalNode};
use ambient::kb::KnowledgeBase;
use ambient::literal::Literal;
use ambient::schema::{load_world_file, sc};

fn print_tree(node: &GoalNode, depth: usize) {
    let what = match &node.body {
        GoalBody::Leaf(action) => action.to_string(),
        GoalBody::And(_) => "all of".into(),
        GoalBody::Or(_) => "any of".into(),
    };
    println!("{:indent$}{} \"{}\": {what}", "", node.id, node.label, indent = depth * 2);
    for c in node.children() {
        print_tree(c, depth + 1);
    }
}

fn plan(kb: &KnowledgeBase, title: &str) -> Result<(), Box<dyn std::error::Error>> {
    println!("== {title}");
    for tree in goals_from_kb(kb, &sc("agent_a"))? {
        let report = evaluate(kb, &tree)?;
        println!("satisfiable: {}", report.satisfiable);
        for (leaf, target) in &report.bindings {
            println!("  {leaf} -> {target}");
        }
        for u in &report.unsatisfied {
            println!("  {} unsatisfied: {}", u.leaf, u.reason);
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..");
    let mut kb = load_world_file(&root.join("fixtures/john_home.amb"))?.kb;
    for tree in goals_from_kb(&kb, &sc("agent_a"))? {
        print_tree(&tree, 0);
    }
    plan(&kb, "john's home")?;
    kb.set_data_value(&sc("phone1"), &sc("isFunctioning"), Literal::Boolean(false))?;
    plan(&kb, "phone1 broken")?;
    let sparse = load_world_file(&root.join("fixtures/john_sparse.amb"))?.kb;
    plan(&sparse, "only a basic watch")?;
    Ok(())
}
