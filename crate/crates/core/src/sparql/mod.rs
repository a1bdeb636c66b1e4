//! A SPARQL 1.1 subset: SELECT/ASK over basic graph patterns with FILTER,
//! OPTIONAL, ORDER BY and LIMIT/OFFSET, plus the standard JSON and CSV
//! result formats.

mod ast;
mod eval;
mod parser;
mod results;

use thiserror::Error;

pub use ast::*;
pub use eval::{evaluate, evaluate_with_deadline, ResultSet, Solution};
pub use parser::parse_query;
pub use results::{serialize_results_csv, serialize_results_json, CSV_MEDIA_TYPE, JSON_MEDIA_TYPE};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueryError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unsupported feature {feature} at line {line}, column {column}")]
    Unsupported { feature: String, line: usize, column: usize },
    #[error("undefined prefix {prefix:?} at line {line}, column {column}")]
    UndefinedPrefix { prefix: String, line: usize, column: usize },
}

impl QueryError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            QueryError::Syntax { line, column, .. }
            | QueryError::Unsupported { line, column, .. }
            | QueryError::UndefinedPrefix { line, column, .. } => (*line, *column),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("query evaluation timed out")]
    Timeout,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResultsError {
    #[error("boolean results have no CSV form")]
    BooleanAsCsv,
    #[error("CSV output failed: {0}")]
    Csv(String),
}

/// Parses and evaluates in one step.
pub fn run_query(text: &str, graph: &crate::rdf::Graph) -> Result<ResultSet, QueryFailure> {
    let query = parse_query(text)?;
    Ok(evaluate(&query, graph)?)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueryFailure {
    #[error(transparent)]
    Parse(#[from] QueryError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}
