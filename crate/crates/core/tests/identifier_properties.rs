#[path = "support/generators.rs"]
mod generators;

use chrono::Datelike;
use legalkg_core::identifiers::{format_ecli, parse_ecli};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ecli_round_trip(id in generators::ecli()) {
        let text = format_ecli(&id);
        let back = parse_ecli(&text).map_err(|e| TestCaseError::fail(format!("{e}: {text}")))?;
        prop_assert_eq!(&back, &id);
        prop_assert_eq!(format_ecli(&back), text);
        prop_assert_eq!(back.date().year(), back.year());
    }

    #[test]
    fn issuer_spelling_normalizes(id in generators::ecli()) {
        let text = format_ecli(&id);
        if let Some(rest) = text.strip_prefix("ECLI:CE:") {
            let alt = parse_ecli(&format!("ECLI:EC:{rest}")).unwrap();
            prop_assert_eq!(alt, id);
        }
    }

    #[test]
    fn garbage_never_panics(s in "\\PC{0,40}") {
        let _ = parse_ecli(&s);
    }
}
