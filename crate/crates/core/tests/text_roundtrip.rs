//! Round trips through the `.amb` text format on generated documents.

use std::collections::BTreeSet;

use ambient::id::EntityId;
use ambient::kb::Axiom;
use ambient::literal::{Datatype, Decimal, Literal};
use ambient::text::{parse, parse_str, serialize, stats, Document, ParseErrorKind};
use proptest::prelude::*;

const PREFIXES: &[(&str, &str)] = &[
    ("sc", "http://ambient.local/smartcity#"),
    ("ex", "http://example.org/ns/"),
    ("a1", "urn:test:a1#"),
];

fn id() -> impl Strategy<Value = EntityId> {
    (0..PREFIXES.len(), "[A-Za-z][A-Za-z0-9_.-]{0,10}").prop_map(|(p, local)| EntityId::new(PREFIXES[p].0, &local).unwrap())
}

fn literal() -> impl Strategy<Value = Literal> {
    prop_oneof![
        any::<bool>().prop_map(Literal::Boolean),
        any::<i64>().prop_map(Literal::Integer),
        (any::<i32>(), "[0-9]{1,6}").prop_map(|(i, frac)| Literal::Decimal(Decimal::parse(&format!("{i}.{frac}")).unwrap())),
        // anything but line breaks, including quotes, backslashes, '#' and tabs
        "[^\r\n]{0,24}".prop_map(|s| Literal::string(s).unwrap()),
    ]
}

fn datatype() -> impl Strategy<Value = Datatype> {
    prop_oneof![
        Just(Datatype::String),
        Just(Datatype::Integer),
        Just(Datatype::Decimal),
        Just(Datatype::Boolean)
    ]
}

fn axiom() -> impl Strategy<Value = Axiom> {
    prop_oneof![
        id().prop_map(Axiom::class),
        (id(), id(), id()).prop_map(|(prop, domain, range)| Axiom::ObjPropDecl { prop, domain, range }),
        (id(), id(), datatype()).prop_map(|(prop, domain, range)| Axiom::DataPropDecl { prop, domain, range }),
        (id(), id()).prop_map(|(a, b)| Axiom::subclass(a, b)),
        (id(), id()).prop_map(|(a, b)| Axiom::instance(a, b)),
        (id(), id(), id()).prop_map(|(s, p, o)| Axiom::relation(s, p, o)),
        (id(), id(), literal()).prop_map(|(s, p, v)| Axiom::value(s, p, v)),
    ]
}

fn document() -> impl Strategy<Value = Document> {
    prop::collection::vec(axiom(), 0..40).prop_map(|axioms| {
        let mut doc = Document::new();
        for (name, ns) in PREFIXES {
            doc.declare_prefix(name, ns).unwrap();
        }
        let mut seen = BTreeSet::new();
        for ax in axioms {
            if seen.insert(ax.clone()) {
                doc.push(ax).unwrap();
            }
        }
        doc
    })
}

/// Re-spaces a canonical serialization without changing its meaning:
/// extra blanks between tokens outside strings, comments, blank lines and
/// CRLF endings.
fn perturb(text: &str, salt: usize) -> String {
    let mut out = String::from("# generated\n\n");
    for (i, line) in text.lines().enumerate() {
        if (i + salt) % 3 == 0 {
            out.push_str("   # note\n");
        }
        let mut in_string = false;
        let mut escaped = false;
        let mut respaced = String::new();
        for c in line.chars() {
            if in_string {
                respaced.push(c);
                if escaped {
                    escaped = false;
                } else if c == '\\' {
                    escaped = true;
                } else if c == '"' {
                    in_string = false;
                }
            } else if c == ' ' {
                respaced.push_str(if (i + salt) % 2 == 0 { " \t " } else { "  " });
            } else {
                if c == '"' {
                    in_string = true;
                }
                respaced.push(c);
            }
        }
        if salt % 2 == 1 {
            out.push('\t');
        }
        out.push_str(&respaced);
        out.push_str(if (i + salt) % 4 == 0 { "\r\n" } else { "\n" });
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn parse_serialize_preserves_axioms(doc in document()) {
        let bytes = serialize(&doc);
        let back = parse(&bytes).unwrap();
        prop_assert_eq!(back.axiom_set(), doc.axiom_set());
        prop_assert_eq!(back.prefixes(), doc.prefixes());
        // idempotent, byte for byte
        prop_assert_eq!(serialize(&back), bytes.clone());
        let st = stats(&doc);
        prop_assert_eq!(st.axiom_count, doc.axiom_set().len());
        prop_assert_eq!(st.byte_size, bytes.len());
    }

    #[test]
    fn layout_does_not_matter(doc in document(), salt in 0usize..8) {
        let canonical = serialize(&doc);
        let messy = perturb(std::str::from_utf8(&canonical).unwrap(), salt);
        let back = parse_str(&messy).unwrap();
        prop_assert_eq!(back.axiom_set(), doc.axiom_set());
        prop_assert_eq!(serialize(&back), canonical);
    }

    #[test]
    fn bad_line_is_reported_and_rest_kept(doc in document(), at in 0usize..50) {
        let canonical = String::from_utf8(serialize(&doc)).unwrap();
        let mut lines: Vec<&str> = canonical.lines().collect();
        let at = at % (lines.len() + 1);
        // never before the prefix lines, so every other statement still resolves
        let at = at.max(PREFIXES.len());
        let at = at.min(lines.len());
        lines.insert(at, "klass sc:Broken");
        let text = lines.join("\n") + "\n";
        let err = parse_str(&text).unwrap_err();
        prop_assert_eq!(err.errors.len(), 1);
        prop_assert_eq!(err.errors[0].span.line, at + 1);
        prop_assert_eq!(&err.errors[0].kind, &ParseErrorKind::UnknownKeyword("klass".into()));
        prop_assert_eq!(err.partial.axiom_set(), doc.axiom_set());
    }
}

#[test]
fn empty_document_round_trips() {
    let doc = Document::new();
    let bytes = serialize(&doc);
    assert_eq!(parse(&bytes).unwrap(), doc);
}
