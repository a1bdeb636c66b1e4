use std::cmp::Ordering;

use serde::Serialize;

use super::chunk::TextChunk;
use super::provider::{Provider, ProviderError};

pub const DEFAULT_TOP_K: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingVector {
    values: Vec<f64>,
}

impl EmbeddingVector {
    pub fn new(values: Vec<f64>) -> Self {
        EmbeddingVector { values }
    }

    /// Scales to unit length; the zero vector is left as is.
    pub fn normalized(mut values: Vec<f64>) -> Self {
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            values.iter_mut().for_each(|v| *v /= norm);
        }
        EmbeddingVector { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Cosine similarity; 0 when either side is the zero vector.
    pub fn cosine(&self, other: &EmbeddingVector) -> f64 {
        let dot: f64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum();
        let denom = self.norm() * other.norm();
        if denom == 0.0 {
            0.0
        } else {
            dot / denom
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RetrievalIndex {
    entries: Vec<(TextChunk, EmbeddingVector)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Retrieved {
    pub chunk: TextChunk,
    pub similarity: f64,
}

pub fn build_index(chunks: Vec<TextChunk>, embedder: &dyn Provider) -> Result<RetrievalIndex, ProviderError> {
    let entries = chunks
        .into_iter()
        .map(|chunk| {
            let vector = embedder.embed(&chunk.text)?;
            Ok((chunk, vector))
        })
        .collect::<Result<Vec<_>, ProviderError>>()?;
    if let Some((_, first)) = entries.first() {
        let dim = first.values().len();
        if entries.iter().any(|(_, v)| v.values().len() != dim) {
            return Err(ProviderError::Config("embeddings of differing dimension".into()));
        }
    }
    Ok(RetrievalIndex { entries })
}

impl RetrievalIndex {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Top `k` chunks by cosine similarity, ties broken by document id and
    /// chunk index.
    pub fn retrieve(&self, query: &EmbeddingVector, k: usize) -> Vec<Retrieved> {
        let mut scored: Vec<Retrieved> = self
            .entries
            .iter()
            .map(|(chunk, v)| Retrieved {
                chunk: chunk.clone(),
                similarity: query.cosine(v),
            })
            .collect();
        scored.sort_by(|a, b| {
            b.similarity
                .partial_cmp(&a.similarity)
                .unwrap_or(Ordering::Equal)
                .then_with(|| a.chunk.doc_id.cmp(&b.chunk.doc_id))
                .then_with(|| a.chunk.index.cmp(&b.chunk.index))
        });
        scored.truncate(k);
        scored
    }

    pub fn retrieve_text(&self, embedder: &dyn Provider, query: &str, k: usize) -> Result<Vec<Retrieved>, ProviderError> {
        if self.is_empty() {
            return Ok(Vec::new());
        }
        Ok(self.retrieve(&embedder.embed(query)?, k))
    }
}
