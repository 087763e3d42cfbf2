//! Match context patterns against device contexts and look devices up by
//! capability.
//!
//! `cargo run --example context_matching`

use std::path::PathBuf;

use ambient::context::{find_devices, matches, ContextPattern, KindFilter};
use ambient::literal::Literal;
use ambient::schema::inventory::DeviceInventory;
use ambient::schema::{load_world_file, sc};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..");
    let mut kb = load_world_file(&root.join("fixtures/john_home.amb"))?.kb;

    let bedroom: ContextPattern = "building=MaisonDeJohn&room=Bedroom".parse()?;
    let inventory = DeviceInventory::from_kb(&kb);
    for rec in inventory.roots() {
        let ctx = inventory.effective_context(&rec.id).cloned().unwrap_or_default();
        println!("{:<10} in bedroom: {}", rec.id.local(), matches(&bedroom, &ctx));
    }

    let johns: ContextPattern = "user=sc:john".parse()?;
    let show = |kb: &ambient::kb::KnowledgeBase, what: &str, pattern: &ContextPattern, kind: KindFilter| {
        let found = find_devices(kb, pattern, &sc(what), kind);
        let names: Vec<String> = found.iter().map(ToString::to_string).collect();
        let names = if names.is_empty() { "none".to_string() } else { names.join(", ") };
        println!("{what} ({kind}) for `{pattern}`: {names}");
    };
    show(&kb, "Acceleration", &johns, KindFilter::Sensor);
    show(&kb, "Display", &johns, KindFilter::Actuator);
    show(&kb, "Display", &bedroom, KindFilter::Any);

    // a failed composite takes its parts with it
    kb.set_data_value(&sc("phone1"), &sc("isFunctioning"), Literal::Boolean(false))?;
    println!("after phone1 fails:");
    show(&kb, "Acceleration", &johns, KindFilter::Sensor);
    show(&kb, "Display", &johns, KindFilter::Actuator);
    Ok(())
}
