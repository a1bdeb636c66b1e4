#[path = "support/generators.rs"]
mod generators;

use legalkg_core::rdf::{parse_ntriples, parse_turtle, serialize_ntriples, serialize_turtle};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn turtle_round_trip(g in generators::graph(100)) {
        let text = serialize_turtle(&g);
        let back = parse_turtle(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(serialize_turtle(&back), text);
    }

    #[test]
    fn ntriples_round_trip(g in generators::graph(100)) {
        let text = serialize_ntriples(&g);
        let back = parse_ntriples(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(text.lines().count(), g.len());
    }

    #[test]
    fn formats_agree(g in generators::graph(30)) {
        let via_turtle = parse_turtle(&serialize_turtle(&g)).unwrap();
        let via_nt = parse_ntriples(&serialize_ntriples(&g)).unwrap();
        prop_assert_eq!(via_turtle, via_nt);
    }
}
