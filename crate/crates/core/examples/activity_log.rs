//! Record activities by hand and deduce them from sensor readings.
//!
//! `cargo run --example activity_log`

use std::path::PathBuf;

use ambient::context::ContextRecord;
use ambient::schema::{load_world_file, sc};
use ambient::sim::{deduce, ActivityClass, ActivityLog, Comparator, DeductionRule, Reading};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..");
    let mut kb = load_world_file(&root.join("fixtures/john_home.amb"))?.kb;
    let mut log = ActivityLog::new();

    let to_jane = ContextRecord::with_users([sc("jane")]);
    let by_agent = log.record(&mut kb, 1000, &sc("agent_a"), "CheckIn", None, to_jane.clone(), ActivityClass::Executed)?;
    let by_john = log.record(&mut kb, 2000, &sc("john"), "CheckIn", None, to_jane.clone(), ActivityClass::Deduced)?;
    for a in [&by_agent, &by_john] {
        println!("#{} t={} {} {} ({})", a.id, a.t, a.subject, a.action, a.class);
    }
    // only people can be the subject of a deduced activity
    let err = log.record(&mut kb, 3000, &sc("agent_a"), "Fall", None, to_jane, ActivityClass::Deduced).unwrap_err();
    println!("refused: {err}");

    let fall = DeductionRule {
        id: "fall".into(),
        capability: sc("Acceleration"),
        comparator: Comparator::Ge,
        threshold: 25.0,
        quiet_above: Some(1.0),
        quiet_ms: 2000,
        emits: "Fall".into(),
    };
    let reading = |t, device: &str, value| Reading {
        t,
        device: sc(device),
        capability: sc("Acceleration"),
        value,
    };
    let window = [
        reading(8_000, "accelP", 31.5),
        reading(9_000, "accelP", 0.4),
        // this spike is followed by movement, so it is not a fall
        reading(20_000, "watch1", 28.0),
        reading(21_000, "watch1", 6.0),
    ];
    for a in deduce(&kb, &[fall], &window, 60_000) {
        println!("deduced: t={} {} {} with {}", a.t, a.subject, a.action, a.instrument.map(|d| d.to_string()).unwrap_or_default());
    }
    Ok(())
}
