//! Corpus loading: case-detail fixtures (HTML definition lists or JSON)
//! into [`CaseRecord`]s, respondent-state resolution, the CSV corpus
//! manifest, and a plain HTTP fetcher for pre-resolved document URLs.

mod fetch;
mod html;
mod json;
mod manifest;
mod states;

use std::fmt;

use chrono::NaiveDate;
use serde::Serialize;
use thiserror::Error;

use crate::identifiers::{
    parse_ecli, ApplicationNumber, DocumentType, EcliId, IdentifierError, ImportanceLevel, ImportanceTable,
};
use crate::rdf::Iri;

pub use fetch::{FetchError, FetchOutcome, Fetcher, FETCH_TIMEOUT_ENV};
pub use html::parse_case_details_html;
pub use json::parse_case_record_json;
pub use manifest::{load_corpus, CorpusManifest, LoadedCase, ManifestEntry};
pub use states::{map_state_to_wikidata, StateTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IngestError {
    #[error("missing mandatory field {0:?}")]
    MissingField(&'static str),
    #[error("invalid ECLI: {0}")]
    Ecli(#[from] IdentifierError),
    #[error("invalid value for {field}: {message}")]
    InvalidField { field: String, message: String },
    #[error("record invariant violated: {0}")]
    Invariant(String),
    #[error("schema violation at {pointer}: {source}")]
    Schema {
        pointer: String,
        #[source]
        source: Box<IngestError>,
    },
    #[error("malformed JSON at {pointer}: {message}")]
    Json { pointer: String, message: String },
    #[error("unresolved respondent state {0:?}")]
    UnresolvedState(String),
    #[error("manifest error: {0}")]
    Manifest(String),
    #[error("I/O error on {path}: {message}")]
    Io { path: String, message: String },
    #[error("case {case_id}: {source}")]
    Case {
        case_id: String,
        #[source]
        source: Box<IngestError>,
    },
}

impl IngestError {
    /// The innermost error, skipping schema and case wrappers.
    pub fn root(&self) -> &IngestError {
        match self {
            IngestError::Schema { source, .. } | IngestError::Case { source, .. } => source.root(),
            other => other,
        }
    }
}

/// A non-fatal observation made while parsing a fixture.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IngestWarning {
    pub field: String,
    pub message: String,
}

impl fmt::Display for IngestWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RespondentState {
    pub name: String,
    pub iri: Option<Iri>,
}

/// Normalized metadata of one judgment or decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseRecord {
    pub title: String,
    pub ecli: EcliId,
    pub doc_type: DocumentType,
    pub date: NaiveDate,
    pub application_numbers: Vec<ApplicationNumber>,
    pub importance: Option<ImportanceLevel>,
    pub respondent_states: Vec<RespondentState>,
    pub convention_articles: Vec<String>,
    pub unanimous: Option<bool>,
    pub language: String,
    pub conclusion_abstract: String,
    pub references: Vec<String>,
    pub contributors: Vec<String>,
    pub access_rights: String,
    pub document_url: Iri,
}

/// A parsed record plus the warnings raised along the way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedCase {
    pub record: CaseRecord,
    pub warnings: Vec<IngestWarning>,
}

/// Parsing context shared by the HTML and JSON readers.
#[derive(Debug, Clone, Default)]
pub struct IngestContext {
    pub states: StateTable,
    pub importance: ImportanceTable,
}

/// Field-by-field accumulator; both fixture formats feed the same setters
/// so equivalent content yields equal records.
#[derive(Debug, Default)]
pub(crate) struct CaseDraft {
    title: Option<String>,
    ecli: Option<EcliId>,
    doc_type: Option<DocumentType>,
    date: Option<NaiveDate>,
    application_numbers: Vec<ApplicationNumber>,
    importance: Option<ImportanceLevel>,
    respondent_states: Vec<RespondentState>,
    convention_articles: Vec<String>,
    unanimous: Option<bool>,
    language: Option<String>,
    conclusion_abstract: Option<String>,
    references: Vec<String>,
    contributors: Vec<String>,
    access_rights: Option<String>,
    document_url: Option<Iri>,
    pub warnings: Vec<IngestWarning>,
}

fn clean(value: &str) -> String {
    value.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn invalid(field: &str, message: impl Into<String>) -> IngestError {
    IngestError::InvalidField {
        field: field.to_string(),
        message: message.into(),
    }
}

impl CaseDraft {
    pub fn set_title(&mut self, v: &str) {
        self.title = Some(clean(v));
    }

    pub fn set_ecli(&mut self, v: &str) -> Result<(), IngestError> {
        self.ecli = Some(parse_ecli(v)?);
        Ok(())
    }

    pub fn set_doc_type(&mut self, v: &str) -> Result<(), IngestError> {
        let v = clean(v);
        let lower = v.to_lowercase();
        self.doc_type = Some(if lower.starts_with("judg") {
            DocumentType::Judgment
        } else if lower.starts_with("decision") {
            DocumentType::Decision
        } else {
            DocumentType::from_code(&v).map_err(|_| invalid("document type", format!("unrecognized type {v:?}")))?
        });
        Ok(())
    }

    pub fn set_date(&mut self, v: &str) -> Result<(), IngestError> {
        let v = clean(v);
        let date = ["%Y-%m-%d", "%d/%m/%Y", "%d %B %Y", "%d.%m.%Y"]
            .iter()
            .find_map(|fmt| NaiveDate::parse_from_str(&v, fmt).ok())
            .ok_or_else(|| invalid("date", format!("unrecognized date {v:?}")))?;
        self.date = Some(date);
        Ok(())
    }

    pub fn add_application_number(&mut self, v: &str) -> Result<(), IngestError> {
        let number: ApplicationNumber = v.trim().parse().map_err(|e: IdentifierError| invalid("application number", e.to_string()))?;
        if !self.application_numbers.contains(&number) {
            self.application_numbers.push(number);
        }
        Ok(())
    }

    pub fn set_importance(&mut self, v: &str, table: &ImportanceTable) -> Result<(), IngestError> {
        self.importance = Some(table.normalize(v).map_err(|e| invalid("importance level", e.to_string()))?);
        Ok(())
    }

    pub fn add_state(&mut self, v: &str, table: &StateTable) {
        let name = clean(v);
        let iri = match table.resolve(&name) {
            Ok(iri) => Some(iri),
            Err(e) => {
                self.warnings.push(IngestWarning {
                    field: "respondent state".into(),
                    message: e.to_string(),
                });
                None
            }
        };
        self.respondent_states.push(RespondentState { name, iri });
    }

    pub fn add_article(&mut self, v: &str) {
        self.convention_articles.push(clean(v));
    }

    pub fn set_unanimous(&mut self, v: bool) {
        self.unanimous = Some(v);
    }

    pub fn set_unanimous_text(&mut self, v: &str) -> Result<(), IngestError> {
        let value = match clean(v).to_lowercase().as_str() {
            "yes" | "true" | "unanimous" | "unanimously" | "unanimity" => true,
            "no" | "false" | "majority" | "by majority" | "by a majority" => false,
            other => return Err(invalid("unanimous", format!("expected yes/no, got {other:?}"))),
        };
        self.unanimous = Some(value);
        Ok(())
    }

    pub fn set_language(&mut self, v: &str) {
        self.language = Some(clean(v));
    }

    pub fn set_abstract(&mut self, v: &str) {
        self.conclusion_abstract = Some(clean(v));
    }

    pub fn add_reference(&mut self, v: &str) {
        self.references.push(clean(v));
    }

    pub fn add_contributor(&mut self, v: &str) {
        self.contributors.push(clean(v));
    }

    pub fn set_access_rights(&mut self, v: &str) {
        self.access_rights = Some(clean(v));
    }

    pub fn set_document_url(&mut self, v: &str) -> Result<(), IngestError> {
        self.document_url = Some(Iri::new(v.trim()).map_err(|e| invalid("document url", e.to_string()))?);
        Ok(())
    }

    pub fn finish(mut self) -> Result<ParsedCase, IngestError> {
        let ecli = self.ecli.take().ok_or(IngestError::MissingField("ECLI"))?;
        let date = self.date.ok_or(IngestError::MissingField("Date"))?;
        let doc_type = self.doc_type.take().ok_or(IngestError::MissingField("Document Type"))?;
        let language = self.language.take().filter(|l| !l.is_empty()).ok_or(IngestError::MissingField("Language"))?;
        let document_url = self.document_url.take().ok_or(IngestError::MissingField("Document URL"))?;

        if ecli.year() != chrono::Datelike::year(&date) {
            return Err(IngestError::Invariant(format!("ECLI year {} differs from date {date}", ecli.year())));
        }
        if *ecli.doc_type() != doc_type {
            return Err(IngestError::Invariant(format!(
                "document type {doc_type} differs from ECLI type {}",
                ecli.doc_type()
            )));
        }
        if self.application_numbers.is_empty() {
            self.application_numbers.push(ecli.application_number());
        }
        let record = CaseRecord {
            title: self.title.unwrap_or_default(),
            ecli,
            doc_type,
            date,
            application_numbers: self.application_numbers,
            importance: self.importance,
            respondent_states: self.respondent_states,
            convention_articles: self.convention_articles,
            unanimous: self.unanimous,
            language,
            conclusion_abstract: self.conclusion_abstract.unwrap_or_default(),
            references: self.references,
            contributors: self.contributors,
            access_rights: self.access_rights.unwrap_or_default(),
            document_url,
        };
        Ok(ParsedCase {
            record,
            warnings: self.warnings,
        })
    }
}
