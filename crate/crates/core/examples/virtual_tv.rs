//! Take a composite apart and rebuild an equivalent one from loose devices
//! in the same room.
//!
//! `cargo run --example virtual_tv`

use std::path::PathBuf;

use ambient::compose::{decompose, recompose, CompositeSpec};
use ambient::literal::Literal;
use ambient::schema::{load_world_file, sc};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..");
    let mut kb = load_world_file(&root.join("fixtures/john_home.amb"))?.kb;
    let spec: CompositeSpec = serde_json::from_str(&std::fs::read_to_string(root.join("fixtures/virtual_tv.json"))?)?;

    println!("tv1 is made of: {:?}", decompose(&kb, &sc("tv1"))?.iter().map(ToString::to_string).collect::<Vec<_>>());

    let steps: [(&str, &str, bool); 3] = [("tv1", "tv1 fails", false), ("speaker2", "speaker2 fails too", false), ("tv1", "tv1 is repaired", true)];
    let report = |kb: &ambient::kb::KnowledgeBase| match recompose(kb, &spec) {
        Ok(vc) => {
            for (req, dev) in &vc.assignment {
                println!("  {req} -> {dev}");
            }
        }
        Err(e) => println!("  {e}"),
    };
    println!("all working:");
    report(&kb);
    for (device, label, up) in steps {
        kb.set_data_value(&sc(device), &sc("isFunctioning"), Literal::Boolean(up))?;
        println!("{label}:");
        report(&kb);
    }
    Ok(())
}
