//! LLM-assisted construction: chunking, retrieval, ontology and KG
//! generation, competency-question generation and answering, and the
//! score-sheet harness. Everything runs against a [`Provider`], with a
//! fixture-backed mock for reproducible runs.

mod chunk;
mod index;
mod pipeline;
mod prompts;
mod provider;
mod scores;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::rdf::vocab::{owl, rdf, rdfs};
use crate::rdf::{merge, parse_turtle, Graph, Iri, Term, Triple};

pub use chunk::{chunk_document, TextChunk, DEFAULT_CHUNK_OVERLAP, DEFAULT_CHUNK_SIZE};
pub use index::{build_index, EmbeddingVector, RetrievalIndex, Retrieved, DEFAULT_TOP_K};
pub use pipeline::{run_pipeline, PipelineConfig, PipelineOutcome};
pub use prompts::{PromptMode, PromptTemplate, TemplateId};
pub use provider::{
    hashed_embedding, CompletionRequest, HttpProvider, MockProvider, Provider, ProviderError, DEFAULT_DIMENSION,
    ENDPOINT_ENV, TOKEN_ENV,
};
pub use scores::{CqScoreSheet, ScoreRow, ScoreTotals, MAX_SCORE, QUESTION_COUNT};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LlmError {
    #[error(transparent)]
    Provider(#[from] ProviderError),
    #[error("{template} response for {key:?} is not valid Turtle after repair: {message}")]
    ResponseFormat {
        template: &'static str,
        key: String,
        message: String,
        raw: String,
    },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("prompt error: {0}")]
    Prompt(String),
    #[error("I/O error on {path}: {message}")]
    Io { path: String, message: String },
    #[error("score sheet: {0}")]
    Scores(String),
}

pub(crate) fn io_error(path: &Path, e: std::io::Error) -> LlmError {
    LlmError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub text: String,
}

/// Reads every `*.txt` file in `dir`; the file stem is the document id.
pub fn load_documents(dir: &Path) -> Result<Vec<Document>, LlmError> {
    let entries = std::fs::read_dir(dir).map_err(|e| io_error(dir, e))?;
    let mut docs = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| io_error(dir, e))?.path();
        if path.extension().and_then(|e| e.to_str()) != Some("txt") {
            continue;
        }
        let Some(id) = path.file_stem().and_then(|s| s.to_str()) else {
            continue;
        };
        let text = std::fs::read_to_string(&path).map_err(|e| io_error(&path, e))?;
        docs.push(Document { id: id.to_string(), text });
    }
    docs.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(docs)
}

/// Section headings to keep, per document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionSelector {
    headings: BTreeMap<String, Vec<String>>,
}

impl SectionSelector {
    pub fn new(headings: BTreeMap<String, Vec<String>>) -> Result<Self, LlmError> {
        if headings.is_empty() || headings.values().any(Vec::is_empty) {
            return Err(LlmError::Config("section selector must name at least one section per document".into()));
        }
        Ok(SectionSelector { headings })
    }

    /// Loads `<doc id>.sections` files: one heading per line, `#` comments.
    pub fn from_dir(dir: &Path) -> Result<Self, LlmError> {
        let mut headings = BTreeMap::new();
        for entry in std::fs::read_dir(dir).map_err(|e| io_error(dir, e))? {
            let path = entry.map_err(|e| io_error(dir, e))?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("sections") {
                continue;
            }
            let Some(id) = path.file_stem().and_then(|s| s.to_str()) else {
                continue;
            };
            let text = std::fs::read_to_string(&path).map_err(|e| io_error(&path, e))?;
            let lines = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_string)
                .collect();
            headings.insert(id.to_string(), lines);
        }
        Self::new(headings)
    }

    pub fn for_document(&self, doc_id: &str) -> Option<&[String]> {
        self.headings.get(doc_id).map(Vec::as_slice)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputStrategy {
    FullText,
    SubPart(SectionSelector),
}

impl InputStrategy {
    /// The text handed to the model. Sections start at lines beginning
    /// with `## ` and headings match case-insensitively.
    pub fn apply(&self, doc: &Document) -> Result<String, LlmError> {
        let selector = match self {
            InputStrategy::FullText => return Ok(doc.text.clone()),
            InputStrategy::SubPart(selector) => selector,
        };
        let wanted: BTreeSet<String> = selector
            .for_document(&doc.id)
            .ok_or_else(|| LlmError::Config(format!("no section selector for document {}", doc.id)))?
            .iter()
            .map(|h| h.to_lowercase())
            .collect();
        let mut out = String::new();
        let mut keep = false;
        for line in doc.text.lines() {
            if let Some(heading) = line.strip_prefix("## ") {
                keep = wanted.contains(&heading.trim().to_lowercase());
            }
            if keep {
                out.push_str(line);
                out.push('\n');
            }
        }
        Ok(out)
    }
}

fn fenced_block(raw: &str) -> Option<&str> {
    let open = raw.find("```")?;
    let after = &raw[open + 3..];
    let body_start = after.find('\n')? + 1;
    let body = &after[body_start..];
    let close = body.find("```").unwrap_or(body.len());
    Some(&body[..close])
}

fn looks_like_turtle_start(line: &str) -> bool {
    let line = line.trim_start();
    if line.starts_with("@prefix") || line.starts_with("@base") || line.starts_with('<') || line.starts_with("_:") {
        return true;
    }
    let lower = line.to_ascii_lowercase();
    if lower.starts_with("prefix ") || lower.starts_with("base ") {
        return true;
    }
    match line.split_whitespace().next() {
        Some(word) => word
            .split_once(':')
            .is_some_and(|(p, _)| p.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-')),
        None => false,
    }
}

/// Parses a model response as Turtle. On failure, one repair is tried:
/// the first fenced code block if there is one, otherwise the text from
/// the first line that looks like Turtle.
pub fn parse_response(template: TemplateId, key: &str, raw: &str) -> Result<Graph, LlmError> {
    let first_error = match parse_turtle(raw) {
        Ok(g) => return Ok(g),
        Err(e) => e,
    };
    let repaired = match fenced_block(raw) {
        Some(body) => body.to_string(),
        None => {
            let mut offset = raw.len();
            let mut pos = 0;
            for line in raw.split_inclusive('\n') {
                if looks_like_turtle_start(line) {
                    offset = pos;
                    break;
                }
                pos += line.len();
            }
            raw[offset..].to_string()
        }
    };
    parse_turtle(&repaired).map_err(|e| LlmError::ResponseFormat {
        template: template.id(),
        key: key.to_string(),
        message: format!("{e} (before repair: {first_error})"),
        raw: raw.to_string(),
    })
}

/// Counts of declared classes and properties.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DeclarationCensus {
    pub classes: BTreeSet<Iri>,
    pub object_properties: BTreeSet<Iri>,
    pub data_properties: BTreeSet<Iri>,
}

impl DeclarationCensus {
    pub fn of(graph: &Graph) -> Self {
        let mut census = DeclarationCensus::default();
        for t in graph.iter().filter(|t| t.predicate().as_str() == rdf::TYPE) {
            let (Term::Iri(subject), Term::Iri(kind)) = (t.subject(), t.object()) else {
                continue;
            };
            let bucket = match kind.as_str() {
                owl::CLASS | rdfs::CLASS => &mut census.classes,
                owl::OBJECT_PROPERTY => &mut census.object_properties,
                owl::DATATYPE_PROPERTY => &mut census.data_properties,
                _ => continue,
            };
            bucket.insert(subject.clone());
        }
        census
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        (self.classes.len(), self.object_properties.len(), self.data_properties.len())
    }
}

const DECLARATION_TYPES: &[&str] = &[
    owl::CLASS,
    rdfs::CLASS,
    owl::OBJECT_PROPERTY,
    owl::DATATYPE_PROPERTY,
    owl::ANNOTATION_PROPERTY,
    rdf::PROPERTY,
];

const SCHEMA_PREDICATES: &[&str] = &[
    rdfs::LABEL,
    rdfs::COMMENT,
    rdfs::DOMAIN,
    rdfs::RANGE,
    rdfs::SUB_CLASS_OF,
    rdfs::SUB_PROPERTY_OF,
    owl::INVERSE_OF,
    owl::EQUIVALENT_CLASS,
    owl::DISJOINT_WITH,
];

fn declared_subjects(graph: &Graph) -> BTreeSet<Term> {
    graph
        .iter()
        .filter(|t| t.predicate().as_str() == rdf::TYPE)
        .filter(|t| matches!(t.object(), Term::Iri(o) if DECLARATION_TYPES.contains(&o.as_str())))
        .map(|t| t.subject().clone())
        .collect()
}

/// A triple removed from a model response, with the reason.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportEntry {
    pub source: String,
    pub triple: String,
    pub reason: String,
}

impl ReportEntry {
    fn new(source: &str, triple: &Triple, reason: &str) -> Self {
        ReportEntry {
            source: source.to_string(),
            triple: triple.to_string(),
            reason: reason.to_string(),
        }
    }
}

/// Line-delimited JSON, one entry per line.
pub fn report_jsonl(entries: &[ReportEntry]) -> String {
    entries
        .iter()
        .map(|e| serde_json::to_string(e).expect("report entries serialize") + "\n")
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OntologyOutcome {
    pub ontology: Graph,
    pub pruned: Vec<ReportEntry>,
}

fn absorb_declarations(ontology: &mut Graph, response: Graph, source: &str, pruned: &mut Vec<ReportEntry>) {
    let mut declared = declared_subjects(ontology);
    declared.extend(declared_subjects(&response));
    for (prefix, ns) in response.prefixes() {
        if !ontology.prefixes().contains_key(prefix) {
            ontology.bind_prefix(prefix.clone(), ns.clone());
        }
    }
    for t in response.iter() {
        let p = t.predicate().as_str();
        let keep = if p == rdf::TYPE {
            matches!(t.object(), Term::Iri(o) if DECLARATION_TYPES.contains(&o.as_str()))
        } else {
            SCHEMA_PREDICATES.contains(&p)
        };
        if !keep {
            pruned.push(ReportEntry::new(source, t, "not a class or property declaration"));
        } else if !declared.contains(t.subject()) {
            pruned.push(ReportEntry::new(source, t, "describes an undeclared term"));
        } else {
            ontology.insert(t.clone());
        }
    }
}

/// Asks for a foundational ontology from `seed`, then for extensions from
/// each document in order. Only declarations and their schema triples are
/// kept; everything else goes to the pruning report.
pub fn generate_ontology(
    provider: &dyn Provider,
    seed: &Graph,
    docs: &[Document],
    strategy: &InputStrategy,
) -> Result<OntologyOutcome, LlmError> {
    let mut ontology = seed.clone();
    let mut pruned = Vec::new();
    let seed_text = crate::rdf::serialize_turtle(seed);
    let prompt = PromptTemplate::builtin(TemplateId::OntologySeed).render(&BTreeMap::from([("seed", seed_text.as_str())]))?;
    let key = "seed";
    let raw = provider.complete(&CompletionRequest {
        template: TemplateId::OntologySeed,
        key,
        prompt: &prompt,
    })?;
    let response = parse_response(TemplateId::OntologySeed, key, &raw)?;
    absorb_declarations(&mut ontology, response, &format!("{}/{key}", TemplateId::OntologySeed.id()), &mut pruned);

    let expand = PromptTemplate::builtin(TemplateId::OntologyExpand);
    for doc in docs {
        let text = strategy.apply(doc)?;
        let current = crate::rdf::serialize_turtle(&ontology);
        let prompt = expand.render(&BTreeMap::from([("ontology", current.as_str()), ("document", text.as_str())]))?;
        let raw = provider.complete(&CompletionRequest {
            template: TemplateId::OntologyExpand,
            key: &doc.id,
            prompt: &prompt,
        })?;
        let response = parse_response(TemplateId::OntologyExpand, &doc.id, &raw)?;
        let source = format!("{}/{}", TemplateId::OntologyExpand.id(), doc.id);
        absorb_declarations(&mut ontology, response, &source, &mut pruned);
    }
    Ok(OntologyOutcome { ontology, pruned })
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KgOutcome {
    pub graph: Graph,
    pub rejects: Vec<ReportEntry>,
}

/// Generates instance data for one document. Type assertions naming a
/// class the ontology does not declare are quarantined into `rejects`.
pub fn generate_kg(
    provider: &dyn Provider,
    ontology: &Graph,
    doc: &Document,
    strategy: &InputStrategy,
) -> Result<KgOutcome, LlmError> {
    if ontology.is_empty() {
        return Err(LlmError::Config("KG generation needs a non-empty ontology".into()));
    }
    let text = strategy.apply(doc)?;
    if text.trim().is_empty() {
        return Ok(KgOutcome::default());
    }
    let ontology_text = crate::rdf::serialize_turtle(ontology);
    let prompt = PromptTemplate::builtin(TemplateId::KgGenerate)
        .render(&BTreeMap::from([("ontology", ontology_text.as_str()), ("document", text.as_str())]))?;
    let raw = provider.complete(&CompletionRequest {
        template: TemplateId::KgGenerate,
        key: &doc.id,
        prompt: &prompt,
    })?;
    let response = parse_response(TemplateId::KgGenerate, &doc.id, &raw)?;
    let classes = DeclarationCensus::of(ontology).classes;
    let source = format!("{}/{}", TemplateId::KgGenerate.id(), doc.id);
    let mut outcome = KgOutcome::default();
    for (prefix, ns) in response.prefixes() {
        outcome.graph.bind_prefix(prefix.clone(), ns.clone());
    }
    for t in response.iter() {
        let undeclared = t.predicate().as_str() == rdf::TYPE
            && !matches!(t.object(), Term::Iri(class) if classes.contains(class));
        if undeclared {
            outcome.rejects.push(ReportEntry::new(&source, t, "type is not a declared class"));
        } else {
            outcome.graph.insert(t.clone());
        }
    }
    Ok(outcome)
}

/// Set union; nothing is renamed.
pub fn merge_kgs<'a>(graphs: impl IntoIterator<Item = &'a Graph>) -> Graph {
    graphs.into_iter().fold(Graph::new(), |acc, g| merge(&acc, g))
}

/// Key under which answers are requested: the question's words,
/// lowercased and joined by `-`.
pub fn question_key(question: &str) -> String {
    provider::words(question).collect::<Vec<_>>().join("-")
}

fn strip_numbering(line: &str) -> &str {
    let line = line.trim();
    let line = line.trim_start_matches(['-', '*', '•']).trim_start();
    let digits = line.len() - line.trim_start_matches(|c: char| c.is_ascii_digit()).len();
    if digits > 0 {
        let rest = &line[digits..];
        if let Some(rest) = rest.strip_prefix('.').or_else(|| rest.strip_prefix(')')) {
            return rest.trim_start();
        }
    }
    line
}

/// Competency questions proposed for `ontology`: every line ending in a
/// question mark, list numbering removed, first occurrence kept.
pub fn generate_cqs(provider: &dyn Provider, ontology: &Graph) -> Result<Vec<String>, LlmError> {
    if ontology.is_empty() {
        return Err(LlmError::Config("CQ generation needs a non-empty ontology".into()));
    }
    let text = crate::rdf::serialize_turtle(ontology);
    let prompt = PromptTemplate::builtin(TemplateId::CqGenerate).render(&BTreeMap::from([("ontology", text.as_str())]))?;
    let raw = provider.complete(&CompletionRequest {
        template: TemplateId::CqGenerate,
        key: "ontology",
        prompt: &prompt,
    })?;
    let mut seen = BTreeSet::new();
    Ok(raw
        .lines()
        .map(strip_numbering)
        .filter(|q| q.ends_with('?'))
        .filter(|q| seen.insert(q.to_string()))
        .map(str::to_string)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CqAnswer {
    pub question: String,
    pub answer: String,
    pub context_ids: Vec<String>,
    pub no_context: bool,
}

/// Answers `question` from the `k` most similar chunks. With nothing to
/// retrieve the model is not called and the answer is flagged.
pub fn answer_cq(provider: &dyn Provider, index: &RetrievalIndex, question: &str, k: usize) -> Result<CqAnswer, LlmError> {
    let hits = index.retrieve_text(provider, question, k)?;
    if hits.is_empty() {
        return Ok(CqAnswer {
            question: question.to_string(),
            answer: String::new(),
            context_ids: Vec::new(),
            no_context: true,
        });
    }
    let context: String = hits
        .iter()
        .map(|h| format!("[{}]\n{}\n\n", h.chunk.id(), h.chunk.text))
        .collect();
    let prompt = PromptTemplate::builtin(TemplateId::CqAnswer)
        .render(&BTreeMap::from([("context", context.as_str()), ("question", question)]))?;
    let key = question_key(question);
    let answer = provider.complete(&CompletionRequest {
        template: TemplateId::CqAnswer,
        key: &key,
        prompt: &prompt,
    })?;
    Ok(CqAnswer {
        question: question.to_string(),
        answer: answer.trim().to_string(),
        context_ids: hits.iter().map(|h| h.chunk.id()).collect(),
        no_context: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::serialize_turtle;
    use std::fs;

    const PREFIXES: &str = "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n@prefix o: <http://x/o#> .\n";

    fn fixtures(files: &[(&str, &str)]) -> tempfile::TempDir {
        let dir = tempfile::tempdir().unwrap();
        for (name, body) in files {
            let path = dir.path().join(name);
            fs::create_dir_all(path.parent().unwrap()).unwrap();
            fs::write(path, body).unwrap();
        }
        dir
    }

    fn doc(id: &str, text: &str) -> Document {
        Document {
            id: id.into(),
            text: text.into(),
        }
    }

    #[test]
    fn repair_strips_fences_and_prose() {
        let fenced = format!("Sure! Here it is:\n```turtle\n{PREFIXES}o:A a owl:Class .\n```\nHope it helps.");
        assert_eq!(parse_response(TemplateId::KgGenerate, "d", &fenced).unwrap().len(), 1);
        let prose = format!("The ontology follows.\n{PREFIXES}o:A a owl:Class .\n");
        assert_eq!(parse_response(TemplateId::KgGenerate, "d", &prose).unwrap().len(), 1);
        let broken = "```\nthis is not turtle\n```";
        match parse_response(TemplateId::KgGenerate, "d", broken) {
            Err(LlmError::ResponseFormat { raw, .. }) => assert_eq!(raw, broken),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ontology_keeps_declarations_and_prunes_the_rest() {
        let seed_response = format!(
            "```turtle\n{PREFIXES}o:Abuse a owl:Class .\no:LegalCase a owl:Class ;\n  <http://www.w3.org/2000/01/rdf-schema#label> \"Legal case\" .\no:case1 a o:LegalCase .\n```"
        );
        let dir = fixtures(&[
            ("ontology-seed/seed.txt", &seed_response),
            ("ontology-expand/d1.txt", ""),
        ]);
        let mock = MockProvider::new(dir.path());
        let out = generate_ontology(&mock, &Graph::new(), &[doc("d1", "text")], &InputStrategy::FullText).unwrap();
        let census = DeclarationCensus::of(&out.ontology);
        let names: Vec<_> = census.classes.iter().map(Iri::as_str).collect();
        assert_eq!(names, ["http://x/o#Abuse", "http://x/o#LegalCase"]);
        assert_eq!(out.ontology.len(), 3);
        assert_eq!(out.pruned.len(), 1);
        assert!(out.pruned[0].triple.contains("case1"));
    }

    #[test]
    fn empty_expansion_leaves_seed_unchanged() {
        let seed = parse_turtle(&format!("{PREFIXES}o:A a owl:Class .\n")).unwrap();
        let dir = fixtures(&[("ontology-seed/seed.txt", ""), ("ontology-expand/d1.txt", "")]);
        let mock = MockProvider::new(dir.path());
        let out = generate_ontology(&mock, &seed, &[doc("d1", "x")], &InputStrategy::FullText).unwrap();
        assert_eq!(out.ontology, seed);
    }

    #[test]
    fn kg_quarantines_undeclared_types() {
        let ontology = parse_turtle(&format!("{PREFIXES}o:Abuse a owl:Class .\n")).unwrap();
        let response = format!("{PREFIXES}o:e1 a o:Abuse .\no:e2 a o:Dragon .\no:e1 o:severity \"high\" .\n");
        let dir = fixtures(&[("kg-generate/d1.txt", &response)]);
        let mock = MockProvider::new(dir.path());
        let out = generate_kg(&mock, &ontology, &doc("d1", "text"), &InputStrategy::FullText).unwrap();
        assert_eq!(out.graph.len(), 2);
        assert_eq!(out.rejects.len(), 1);
        assert!(out.rejects[0].triple.contains("Dragon"));
        let again = parse_turtle(&serialize_turtle(&out.graph)).unwrap();
        assert_eq!(again, out.graph);
        let empty = generate_kg(&mock, &ontology, &doc("d9", "  \n"), &InputStrategy::FullText).unwrap();
        assert!(empty.graph.is_empty());
    }

    #[test]
    fn merge_preserves_entities() {
        let a = parse_turtle("<http://x/a> <http://x/p> \"1\" .\n<http://x/b> <http://x/p> \"2\" .\n").unwrap();
        let b = parse_turtle("<http://x/a> <http://x/q> \"3\" .\n<http://x/c> <http://x/p> \"4\" .\n").unwrap();
        let m = merge_kgs([&a, &b]);
        assert_eq!(m.len(), 4);
        let subjects: BTreeSet<_> = m.iter().map(|t| t.subject().clone()).collect();
        assert_eq!(subjects.len(), 3);
        assert_eq!(merge_kgs([&a, &a]), a);
    }

    #[test]
    fn cq_generation_and_answers() {
        let ontology = parse_turtle(&format!("{PREFIXES}o:A a owl:Class .\n")).unwrap();
        let dir = fixtures(&[
            ("cq-generate/ontology.txt", "Questions:\n1. What is A?\n2) Who is B?\n\n- What is A?\n"),
            ("cq-answer/what-is-a.txt", "A is a class.\n"),
        ]);
        let mock = MockProvider::new(dir.path());
        assert_eq!(generate_cqs(&mock, &ontology).unwrap(), ["What is A?", "Who is B?"]);

        let empty = build_index(Vec::new(), &mock).unwrap();
        assert!(answer_cq(&mock, &empty, "What is A?", 4).unwrap().no_context);

        let index = build_index(chunk_document("d1", "A is a class of things.", 100, 10).unwrap(), &mock).unwrap();
        let first = answer_cq(&mock, &index, "What is A?", 4).unwrap();
        assert_eq!(first, answer_cq(&mock, &index, "What is A?", 4).unwrap());
        assert_eq!(first.answer, "A is a class.");
        assert_eq!(first.context_ids, ["d1#0"]);
    }

    #[test]
    fn sub_part_selection() {
        let d = doc("d1", "intro\n## The facts\nfact one\n## The law\nlaw text\n## Costs\nmoney\n");
        let selector = SectionSelector::new(BTreeMap::from([("d1".to_string(), vec!["THE LAW".to_string()])])).unwrap();
        let text = InputStrategy::SubPart(selector).apply(&d).unwrap();
        assert_eq!(text, "## The law\nlaw text\n");
        assert!(SectionSelector::new(BTreeMap::from([("d1".to_string(), vec![])])).is_err());
    }

    #[test]
    fn question_keys() {
        assert_eq!(question_key("Which legal articles are violated?"), "which-legal-articles-are-violated");
    }
}
