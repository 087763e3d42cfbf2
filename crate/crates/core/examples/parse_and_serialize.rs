//! Read `.amb` text, print its canonical form, and see how errors are
//! reported.
//!
//! `cargo run --example parse_and_serialize`

use ambient::text::{parse_str, serialize, stats};

const MESSY: &str = r#"
# statements may come in any order and layout
ind   ex:lamp : ex:Light
prefix ex: http://example.org/home#
val ex:lamp ex:label "desk \"lamp\""
class ex:Light
dataprop ex:label domain ex:Light range string
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let doc = parse_str(MESSY)?;
    let canonical = serialize(&doc);
    print!("{}", String::from_utf8(canonical.clone())?);
    let s = stats(&doc);
    println!("-- {} axioms, {} bytes", s.axiom_count, s.byte_size);

    // canonical text reads back to the same thing, byte for byte
    let again = parse_str(std::str::from_utf8(&canonical)?)?;
    assert_eq!(serialize(&again), canonical);

    // every bad line is reported; the rest of the document survives
    let broken = "prefix ex: http://example.org/home#\nclass ex:Light\nklass ex:Oops\nind ex:lamp : ex:Light\nval ex:lamp ex:label \"unterminated\n";
    let err = parse_str(broken).unwrap_err();
    for e in &err.errors {
        println!("error at {e}");
    }
    println!("-- kept {} statements", err.partial.len());
    Ok(())
}
