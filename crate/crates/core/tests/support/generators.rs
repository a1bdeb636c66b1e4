//! proptest strategies for graphs and identifiers.

#![allow(dead_code)]

use legalkg_core::identifiers::{ApplicationNumber, DocumentType, EcliId};
use legalkg_core::rdf::{BlankNode, Graph, Iri, Literal, Term, Triple};
use proptest::prelude::*;

const XSD: &str = "http://www.w3.org/2001/XMLSchema#";

fn iri() -> impl Strategy<Value = Iri> {
    prop_oneof![
        "[a-z0-9_.#/-]{0,8}".prop_map(|local| format!("http://ex.org/{local}")),
        "[a-zé]{1,5}".prop_map(|local| format!("urn:x:{local}")),
        Just("https://w3id.org/prejust4woman/ontology#respondentState".to_string()),
    ]
    .prop_map(|s| Iri::new(s).unwrap())
}

fn blank() -> impl Strategy<Value = BlankNode> {
    "[a-z][a-z0-9]{0,4}".prop_map(|l| BlankNode::new(l).unwrap())
}

fn lexical() -> impl Strategy<Value = String> {
    prop::collection::vec(
        prop_oneof![
            "[a-zA-Z0-9 ]",
            Just("\"".to_string()),
            Just("\\".to_string()),
            Just("\n".to_string()),
            Just("\r".to_string()),
            Just("\t".to_string()),
            Just("'".to_string()),
            Just("é".to_string()),
            Just("€".to_string()),
            Just("\u{1F600}".to_string()),
        ],
        0..12,
    )
    .prop_map(|parts| parts.concat())
}

fn literal() -> impl Strategy<Value = Literal> {
    prop_oneof![
        lexical().prop_map(Literal::string),
        (lexical(), prop::sample::select(vec!["en", "fr", "en-GB", "de-CH-1996"]))
            .prop_map(|(s, l)| Literal::lang(s, l).unwrap()),
        any::<i64>().prop_map(Literal::integer),
        any::<bool>().prop_map(Literal::boolean),
        "-?[0-9]{1,4}\\.[0-9]{1,3}".prop_map(|s| Literal::typed(s, Iri::new(format!("{XSD}decimal")).unwrap())),
        "[0-9]{4}-[0-9]{2}-[0-9]{2}".prop_map(|s| Literal::typed(s, Iri::new(format!("{XSD}date")).unwrap())),
        (lexical(), iri()).prop_map(|(s, dt)| Literal::typed(s, dt)),
    ]
}

fn subject() -> impl Strategy<Value = Term> {
    prop_oneof![4 => iri().prop_map(Term::Iri), 1 => blank().prop_map(Term::BlankNode)]
}

fn object() -> impl Strategy<Value = Term> {
    prop_oneof![
        3 => iri().prop_map(Term::Iri),
        1 => blank().prop_map(Term::BlankNode),
        4 => literal().prop_map(Term::Literal),
    ]
}

/// Graphs of at most `max` triples, sometimes with prefix bindings so that
/// Turtle output uses prefixed names.
pub fn graph(max: usize) -> impl Strategy<Value = Graph> {
    (
        prop::collection::vec((subject(), iri(), object()), 0..=max),
        any::<bool>(),
    )
        .prop_map(|(triples, prefixed)| {
            let mut g = Graph::new();
            if prefixed {
                g.bind_prefix("ex", Iri::new("http://ex.org/").unwrap());
                g.bind_prefix("pj4w", Iri::new("https://w3id.org/prejust4woman/ontology#").unwrap());
            }
            for (s, p, o) in triples {
                g.insert(Triple::new(s, p, o).unwrap());
            }
            g
        })
}

pub fn ecli() -> impl Strategy<Value = EcliId> {
    (
        prop::sample::select(vec!["CE", "EC", "NL", "ce"]),
        prop::sample::select(vec!["ECHR", "HR", "CEDH1"]),
        1950i32..=2100,
        1u32..=12,
        1u32..=31,
        prop_oneof![
            Just(DocumentType::Judgment),
            Just(DocumentType::Decision),
            "[A-Z]{3}".prop_filter("reserved codes", |c| c != "JUD" && c != "DEC").prop_map(DocumentType::Other),
        ],
        1u32..=9_999_999,
        0u8..=99,
    )
        .prop_filter_map("calendar date", |(issuer, court, year, month, day, doc_type, serial, suffix)| {
            let application = ApplicationNumber::new(serial, suffix).ok()?;
            EcliId::new(issuer, court, year, month, day, doc_type, application).ok()
        })
}
