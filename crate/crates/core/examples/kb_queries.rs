//! Build a small knowledge base by hand and ask it questions.
//!
//! `cargo run --example kb_queries`

use ambient::id::EntityId;
use ambient::kb::{Axiom, InstanceMode, KnowledgeBase};
use ambient::literal::{Datatype, Literal};

fn id(s: &str) -> EntityId {
    s.parse().expect("valid id")
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut kb = KnowledgeBase::new();
    for c in ["ex:Thing", "ex:Device", "ex:Sensor", "ex:Camera", "ex:Room"] {
        kb.add_axiom(Axiom::class(id(c)))?;
    }
    kb.add_axiom(Axiom::subclass(id("ex:Device"), id("ex:Thing")))?;
    kb.add_axiom(Axiom::subclass(id("ex:Sensor"), id("ex:Device")))?;
    kb.add_axiom(Axiom::subclass(id("ex:Camera"), id("ex:Sensor")))?;
    kb.add_axiom(Axiom::ObjPropDecl {
        prop: id("ex:locatedIn"),
        domain: id("ex:Device"),
        range: id("ex:Room"),
    })?;
    kb.add_axiom(Axiom::DataPropDecl {
        prop: id("ex:model"),
        domain: id("ex:Device"),
        range: Datatype::String,
    })?;
    kb.add_axiom(Axiom::instance(id("ex:hall"), id("ex:Room")))?;
    kb.add_axiom(Axiom::instance(id("ex:cam1"), id("ex:Camera")))?;
    kb.add_axiom(Axiom::instance(id("ex:pir1"), id("ex:Sensor")))?;
    kb.add_axiom(Axiom::relation(id("ex:cam1"), id("ex:locatedIn"), id("ex:hall")))?;
    kb.add_axiom(Axiom::value(id("ex:cam1"), id("ex:model"), Literal::string("C-300")?))?;

    println!("axioms: {}", kb.axiom_count());
    println!("Camera <= Thing: {}", kb.is_subclass_of(&id("ex:Camera"), &id("ex:Thing"))?);
    println!("Thing <= Camera: {}", kb.is_subclass_of(&id("ex:Thing"), &id("ex:Camera"))?);
    println!("superclasses of Camera: {:?}", kb.superclasses(&id("ex:Camera"))?.iter().map(ToString::to_string).collect::<Vec<_>>());
    for mode in [InstanceMode::Direct, InstanceMode::Inferred] {
        let found = kb.instances_of(&id("ex:Sensor"), mode)?;
        println!("Sensor instances ({mode:?}): {}", found.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "));
    }
    for prop in ["ex:locatedIn", "ex:model"] {
        for v in kb.property_values(&id("ex:cam1"), &id(prop))? {
            println!("cam1 {prop} {v}");
        }
    }

    // the store refuses statements that would break it, and stays unchanged
    let before = kb.axiom_count();
    for bad in [
        Axiom::subclass(id("ex:Thing"), id("ex:Camera")),
        Axiom::relation(id("ex:hall"), id("ex:locatedIn"), id("ex:hall")),
        Axiom::instance(id("ex:x"), id("ex:Unknown")),
    ] {
        println!("rejected `{bad}`: {}", kb.add_axiom(bad.clone()).unwrap_err());
    }
    assert_eq!(kb.axiom_count(), before);
    Ok(())
}
