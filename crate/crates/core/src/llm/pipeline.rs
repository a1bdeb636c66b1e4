use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::rdf::{serialize_turtle, Graph};

use super::{
    answer_cq, build_index, chunk_document, generate_cqs, generate_kg, generate_ontology, io_error, load_documents,
    merge_kgs, report_jsonl, CqAnswer, CqScoreSheet, DeclarationCensus, InputStrategy, LlmError, Provider,
    ReportEntry, DEFAULT_CHUNK_OVERLAP, DEFAULT_CHUNK_SIZE, DEFAULT_TOP_K,
};

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub documents: PathBuf,
    pub strategy: InputStrategy,
    pub seed: Graph,
    pub chunk_size: usize,
    pub chunk_overlap: usize,
    pub top_k: usize,
    pub scores: Option<PathBuf>,
}

impl PipelineConfig {
    pub fn new(documents: impl Into<PathBuf>) -> Self {
        PipelineConfig {
            documents: documents.into(),
            strategy: InputStrategy::FullText,
            seed: Graph::new(),
            chunk_size: DEFAULT_CHUNK_SIZE,
            chunk_overlap: DEFAULT_CHUNK_OVERLAP,
            top_k: DEFAULT_TOP_K,
            scores: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub documents: Vec<String>,
    pub ontology: Graph,
    /// Ontology plus the instance data of every document.
    pub kg: Graph,
    pub census: DeclarationCensus,
    pub pruned: Vec<ReportEntry>,
    pub rejects: Vec<ReportEntry>,
    pub cqs: Vec<String>,
    pub answers: Vec<CqAnswer>,
    pub scores: Option<CqScoreSheet>,
}

/// Ontology, per-document KGs, merge, CQ generation and answering over
/// the chunk index, then the optional score sheet.
pub fn run_pipeline(provider: &dyn Provider, config: &PipelineConfig) -> Result<PipelineOutcome, LlmError> {
    let docs = load_documents(&config.documents)?;
    if docs.is_empty() {
        return Err(LlmError::Config(format!("no .txt documents in {}", config.documents.display())));
    }
    let ontology = generate_ontology(provider, &config.seed, &docs, &config.strategy)?;

    let per_doc = docs
        .par_iter()
        .map(|doc| generate_kg(provider, &ontology.ontology, doc, &config.strategy))
        .collect::<Result<Vec<_>, _>>()?;
    let kg = merge_kgs(std::iter::once(&ontology.ontology).chain(per_doc.iter().map(|o| &o.graph)));
    let rejects = per_doc.iter().flat_map(|o| o.rejects.iter().cloned()).collect();

    let mut chunks = Vec::new();
    for doc in &docs {
        let text = config.strategy.apply(doc)?;
        chunks.extend(chunk_document(&doc.id, &text, config.chunk_size, config.chunk_overlap)?);
    }
    let index = build_index(chunks, provider)?;
    let cqs = generate_cqs(provider, &ontology.ontology)?;
    let answers = cqs
        .iter()
        .map(|q| answer_cq(provider, &index, q, config.top_k))
        .collect::<Result<Vec<_>, _>>()?;

    let scores = config.scores.as_deref().map(CqScoreSheet::load).transpose()?;
    Ok(PipelineOutcome {
        documents: docs.into_iter().map(|d| d.id).collect(),
        census: DeclarationCensus::of(&kg),
        ontology: ontology.ontology,
        kg,
        pruned: ontology.pruned,
        rejects,
        cqs,
        answers,
        scores,
    })
}

impl PipelineOutcome {
    /// Writes `kg.ttl`, `ontology.ttl`, `pruned.jsonl`, `rejects.jsonl`,
    /// `cqs.txt`, `answers.jsonl` and, with a score sheet, `scores.csv` and
    /// `scores.txt`. Returns the written paths.
    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>, LlmError> {
        std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
        let mut files = vec![
            ("kg.ttl", serialize_turtle(&self.kg)),
            ("ontology.ttl", serialize_turtle(&self.ontology)),
            ("pruned.jsonl", report_jsonl(&self.pruned)),
            ("rejects.jsonl", report_jsonl(&self.rejects)),
            ("cqs.txt", self.cqs.iter().map(|q| format!("{q}\n")).collect()),
            (
                "answers.jsonl",
                self.answers
                    .iter()
                    .map(|a| serde_json::to_string(a).expect("answers serialize") + "\n")
                    .collect(),
            ),
        ];
        if let Some(sheet) = &self.scores {
            files.push(("scores.csv", sheet.to_csv()));
            files.push(("scores.txt", sheet.report()));
        }
        files
            .into_iter()
            .map(|(name, body)| {
                let path = dir.join(name);
                std::fs::write(&path, body).map_err(|e| io_error(&path, e))?;
                Ok(path)
            })
            .collect()
    }
}
