//! Replay the fall scenarios and follow what the agent does.
//!
//! `cargo run --example fall_assistance [scenario.json]`

use std::path::PathBuf;

use ambient::sim::run_file;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..");
    let files: Vec<PathBuf> = match std::env::args().nth(1) {
        Some(f) => vec![f.into()],
        None => ["fall_cancel", "fall_escalation", "fall_caregiver_ack", "fall_no_display", "device_substitution"]
            .iter()
            .map(|n| root.join(format!("scenarios/{n}.json")))
            .collect(),
    };
    for file in files {
        let out = run_file(&file, 0)?;
        println!("== {}", out.header.scenario.as_deref().unwrap_or("unnamed"));
        for r in out.trace.iter().filter(|r| !matches!(r.kind.as_str(), "SensorReading" | "ActivityRecorded")) {
            let payload: Vec<String> = r.payload.iter().map(|(k, v)| format!("{k}={v}")).collect();
            println!("{:>7} {:<14} {:<20} {}", r.t, r.emitter.local(), r.kind, payload.join(" "));
        }
        for v in &out.verdicts {
            println!("  {v}");
        }
    }
    Ok(())
}
