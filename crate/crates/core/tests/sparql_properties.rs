#[path = "support/oracle.rs"]
mod oracle;

use std::collections::BTreeMap;

use legalkg_core::rdf::{serialize_ntriples, Graph, Term};
use legalkg_core::sparql::{evaluate, parse_query, ResultSet};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn run(text: &str, graph: &Graph) -> ResultSet {
    let query = parse_query(text).unwrap_or_else(|e| panic!("{text}\n{e}"));
    evaluate(&query, graph).unwrap()
}

fn named(results: &ResultSet) -> Vec<BTreeMap<String, Term>> {
    match results {
        ResultSet::Bindings { solutions, .. } => solutions
            .iter()
            .map(|s| s.iter().map(|(v, t)| (v.name().to_string(), t.clone())).collect())
            .collect(),
        ResultSet::Boolean(_) => panic!("expected bindings"),
    }
}

fn instance(seed: u64) -> (Graph, oracle::Query) {
    let mut rng = StdRng::seed_from_u64(seed);
    (oracle::random_graph(&mut rng, 50), oracle::random_query(&mut rng))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn agrees_with_brute_force(seed in any::<u64>()) {
        let (graph, query) = instance(seed);
        let text = query.to_sparql();
        let actual = oracle::canonical(oracle::from_named(named(&run(&text, &graph))));
        let expected = oracle::canonical(oracle::brute_force(&query, &graph));
        prop_assert_eq!(actual, expected, "{}", text);
    }

    #[test]
    fn distinct_is_idempotent(seed in any::<u64>()) {
        let (graph, mut query) = instance(seed);
        query.distinct = true;
        let once = named(&run(&query.to_sparql(), &graph));
        let mut twice = once.clone();
        let mut seen = std::collections::BTreeSet::new();
        twice.retain(|s| seen.insert(s.clone()));
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn limit_is_a_prefix(seed in any::<u64>(), n in 0usize..6) {
        let (graph, query) = instance(seed);
        let base = query.to_sparql();
        let vars: Vec<String> = query.projected().iter().map(|v| format!("?v{v}")).collect();
        let order = if vars.is_empty() { String::new() } else { format!(" ORDER BY {}", vars.join(" ")) };
        let shorter = named(&run(&format!("{base}{order} LIMIT {n}"), &graph));
        let longer = named(&run(&format!("{base}{order} LIMIT {}", n + 1), &graph));
        prop_assert!(shorter.len() <= n);
        prop_assert_eq!(&longer[..shorter.len()], &shorter[..]);
    }

    #[test]
    fn optional_never_removes_solutions(seed in any::<u64>()) {
        let (graph, mut query) = instance(seed);
        query.optional = None;
        query.filters.clear();
        query.projection = None;
        query.distinct = false;
        let plain = oracle::canonical(oracle::from_named(named(&run(&query.to_sparql(), &graph))));
        let required = query.required_vars();
        prop_assume!(!required.is_empty());
        query.optional = Some((vec![oracle::Pattern(
            oracle::Slot::Var(required[0]),
            oracle::Slot::Const(oracle::iri_pool()[3].clone()),
            oracle::Slot::Var(3),
        )], vec![]));
        let extended = oracle::from_named(named(&run(&query.to_sparql(), &graph)));
        prop_assert!(extended.len() >= plain.len());
        let restricted = oracle::canonical(
            extended
                .into_iter()
                .map(|mu| mu.into_iter().filter(|(v, _)| required.contains(v)).collect())
                .collect::<Vec<_>>(),
        );
        let mut deduped_plain = plain.clone();
        deduped_plain.dedup();
        let mut deduped_restricted = restricted.clone();
        deduped_restricted.dedup();
        prop_assert_eq!(deduped_plain, deduped_restricted);
    }

    #[test]
    fn evaluation_leaves_the_graph_untouched(seed in any::<u64>()) {
        let (graph, query) = instance(seed);
        let before = serialize_ntriples(&graph);
        let snapshot = graph.clone();
        run(&query.to_sparql(), &graph);
        prop_assert_eq!(serialize_ntriples(&graph), before);
        prop_assert_eq!(graph, snapshot);
    }
}

#[test]
fn ask_matches_brute_force_emptiness() {
    for seed in 0..200 {
        let (graph, mut query) = instance(seed);
        query.projection = None;
        let select = query.to_sparql();
        let ask = format!("ASK {}", &select[select.find("WHERE").unwrap() + 6..]);
        let expected = !oracle::brute_force(&query, &graph).is_empty();
        assert_eq!(run(&ask, &graph), ResultSet::Boolean(expected), "{ask}");
    }
}

