//! RDF data model, an in-memory deduplicating graph, and Turtle /
//! N-Triples parsing and serialization.

mod graph;
mod lexer;
pub mod ntriples;
mod term;
pub mod turtle;
pub mod vocab;

use thiserror::Error;

pub use graph::{merge, Graph};
pub use ntriples::{parse_ntriples, serialize_ntriples};
pub use term::{BlankNode, Iri, Literal, Term, Triple};
pub use turtle::{parse_turtle, serialize_turtle};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RdfError {
    #[error("invalid IRI {value:?}: {reason}")]
    InvalidIri { value: String, reason: String },
    #[error("invalid blank node label {0:?}")]
    InvalidBlankNode(String),
    #[error("invalid language tag {0:?}")]
    InvalidLanguageTag(String),
    #[error("literal {0} cannot be used as a triple subject")]
    LiteralSubject(String),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("undefined prefix {prefix:?} at line {line}, column {column}")]
    UndefinedPrefix {
        prefix: String,
        line: usize,
        column: usize,
    },
}

impl RdfError {
    /// Line number for syntax-level errors.
    pub fn line(&self) -> Option<usize> {
        match self {
            RdfError::Syntax { line, .. } | RdfError::UndefinedPrefix { line, .. } => Some(*line),
            _ => None,
        }
    }
}
