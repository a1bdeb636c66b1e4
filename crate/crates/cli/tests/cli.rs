use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

fn legalkg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_legalkg")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn build_stats_and_query() {
    let dir = tempfile::tempdir().unwrap();
    let kg = dir.path().join("kg.nt");
    let corpus = data("corpus");
    let out = legalkg(&["build", "--corpus", corpus.to_str().unwrap(), "--out", kg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&kg).unwrap();
    let graph = legalkg_core::rdf::parse_ntriples(&text).unwrap();

    let out = legalkg(&["stats", kg.to_str().unwrap()]);
    let stats: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(stats["tripleCount"], graph.len());

    let q = "SELECT ?s WHERE { ?s <http://purl.org/dc/terms/identifier> ?id } LIMIT 3";
    let out = legalkg(&["query", kg.to_str().unwrap(), q, "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 4);
}

#[test]
fn cq_validate_passes_on_fixtures() {
    let out = legalkg(&["cq-validate", "--manifest", data("corpus/manifest.csv").to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("(100.0%)"));
}

#[test]
fn llm_run_with_example_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = data("config/legalkg.toml");
    let out = legalkg(&[
        "--config",
        config.to_str().unwrap(),
        "llm-run",
        "--strategy",
        "subpart",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("12 classes, 9 object properties, 17 data properties"));
    assert!(dir.path().join("scores.csv").is_file());
}

#[test]
fn nlp_run_emits_json() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("t.txt");
    std::fs::write(&input, "The court dismissed the appeal.").unwrap();
    let out = legalkg(&["nlp-run", input.to_str().unwrap()]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["triples"].as_array().unwrap().len(), 1);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ttl");
    std::fs::write(&bad, "<a> <b> .").unwrap();
    assert_eq!(legalkg(&["stats", bad.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(legalkg(&["stats", "/nonexistent/kg.ttl"]).status.code(), Some(2));

    let cfg = dir.path().join("cfg.toml");
    std::fs::write(&cfg, "[llm]\nprovider = \"carrier-pigeon\"\n").unwrap();
    assert_eq!(
        legalkg(&["--config", cfg.to_str().unwrap(), "stats", bad.to_str().unwrap()]).status.code(),
        Some(3)
    );
    assert_eq!(legalkg(&["llm-run", "--out", dir.path().to_str().unwrap()]).status.code(), Some(3));
    assert_eq!(legalkg(&["no-such-command"]).status.code(), Some(3));

    let kg = dir.path().join("kg.ttl");
    std::fs::write(&kg, "<http://a> <http://b> <http://c> .\n").unwrap();
    assert_eq!(legalkg(&["query", kg.to_str().unwrap(), "SELECT WHERE"]).status.code(), Some(1));
}
