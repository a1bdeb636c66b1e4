//! Building blocks for constructing, storing, querying and validating a
//! legal knowledge graph of court rulings.

pub mod rdf;
pub mod identifiers;
pub mod ingestion;
pub mod mapping;
pub mod llm;
pub mod nlp;
pub mod sparql;
