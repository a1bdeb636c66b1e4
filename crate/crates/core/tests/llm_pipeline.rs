use std::path::PathBuf;

use legalkg_core::llm::{
    generate_kg, load_documents, run_pipeline, CqScoreSheet, DeclarationCensus, InputStrategy, MockProvider,
    PipelineConfig, SectionSelector,
};
use legalkg_core::rdf::{parse_turtle, serialize_turtle, Iri};

fn data() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn mock() -> MockProvider {
    MockProvider::new(data().join("llm/fixtures"))
}

fn config() -> PipelineConfig {
    let mut config = PipelineConfig::new(data().join("llm/documents"));
    config.scores = Some(data().join("scores/cq_scores.csv"));
    config
}

#[test]
fn fixture_run_matches_declared_counts() {
    let out = run_pipeline(&mock(), &config()).unwrap();
    assert_eq!(out.documents.len(), 5);
    assert_eq!(out.census.counts(), (12, 9, 17));
    for class in ["Abuse", "LegalCase"] {
        let iri = Iri::new(format!("http://example.org/vaw#{class}")).unwrap();
        assert!(out.census.classes.contains(&iri), "{class}");
    }
    assert!(out.rejects.is_empty(), "{:?}", out.rejects);
    assert_eq!(out.pruned.len(), 3, "{:?}", out.pruned);
    assert_eq!(parse_turtle(&serialize_turtle(&out.kg)).unwrap(), out.kg);
    assert_eq!(DeclarationCensus::of(&out.ontology), out.census);
}

#[test]
fn generated_questions_and_answers() {
    let out = run_pipeline(&mock(), &config()).unwrap();
    let sheet = out.scores.as_ref().unwrap();
    let expected: Vec<&str> = sheet.rows().iter().map(|r| r.question.as_str()).collect();
    assert_eq!(out.cqs, expected);
    assert_eq!(out.answers.len(), 13);
    for answer in &out.answers {
        assert!(!answer.no_context);
        assert!(!answer.context_ids.is_empty() && answer.context_ids.len() <= 4);
        assert!(!answer.answer.is_empty());
    }
}

#[test]
fn runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let first = run_pipeline(&mock(), &config()).unwrap().write_to(a.path()).unwrap();
    run_pipeline(&mock(), &config()).unwrap().write_to(b.path()).unwrap();
    for path in first {
        let name = path.file_name().unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(b.path().join(name)).unwrap(), "{name:?}");
    }
}

#[test]
fn sub_part_strategy_runs() {
    let docs = data().join("llm/documents");
    let mut config = config();
    config.strategy = InputStrategy::SubPart(SectionSelector::from_dir(&docs).unwrap());
    let out = run_pipeline(&mock(), &config).unwrap();
    assert_eq!(out.census.counts(), (12, 9, 17));
}

#[test]
fn each_document_kg_conforms() {
    let out = run_pipeline(&mock(), &config()).unwrap();
    for doc in load_documents(&data().join("llm/documents")).unwrap() {
        let kg = generate_kg(&mock(), &out.ontology, &doc, &InputStrategy::FullText).unwrap();
        assert!(kg.rejects.is_empty(), "{}", doc.id);
        assert!(!kg.graph.is_empty());
    }
}

#[test]
fn table_two_sheet() {
    let sheet = CqScoreSheet::load(&data().join("scores/cq_scores.csv")).unwrap();
    let fulltext = [3, 4, 4, 5, 2, 3, 4, 5, 2, 1, 5, 0, 5];
    let subpart = [4, 4, 2, 4, 2, 2, 4, 4, 1, 3, 4, 4, 3];
    let readd = |col: &[u32]| col.iter().fold(0, |acc, v| acc + v);
    let totals = sheet.totals();
    assert_eq!(totals.fulltext, readd(&fulltext));
    assert_eq!(totals.subpart, readd(&subpart));
    assert_eq!(sheet.render_total(totals.fulltext), "43/65");
    assert_eq!(sheet.render_total(totals.subpart), "41/65");
    let note = sheet.known_issue().unwrap();
    assert!(note.contains("40/65") && note.contains("37/65"));
}
