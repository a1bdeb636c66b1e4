use std::collections::BTreeSet;

use serde::Serialize;

use crate::ingestion::CaseRecord;
use crate::rdf::{Graph, Iri, Term};
use crate::sparql::{evaluate, parse_query, ResultSet};

use super::{FieldRole, VocabularyConfig};

/// Token replaced by the case IRI when a template is instantiated.
pub const CASE_PLACEHOLDER: &str = "{{case}}";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CqTemplate {
    pub name: &'static str,
    pub question: &'static str,
    #[serde(skip)]
    pub role: FieldRole,
    pub query: String,
}

impl CqTemplate {
    pub fn instantiate(&self, case: &Iri) -> String {
        self.query.replace(CASE_PLACEHOLDER, &case.to_string())
    }
}

fn question(role: FieldRole) -> (&'static str, &'static str) {
    match role {
        FieldRole::Type => ("type", "What type of document are we dealing with?"),
        FieldRole::Date => ("date", "When is the document dated?"),
        FieldRole::IsVersionOf => (
            "isVersionOf",
            "Can I retrieve the information of a certain case given its identifier?",
        ),
        FieldRole::Contributor => ("contributor", "Who represents the applicant?"),
        FieldRole::RespondentState => ("respondentState", "To which European state does the applicant belong?"),
        FieldRole::Abstract => ("abstract", "What was the ruling?"),
        FieldRole::UnanimousDecision => ("unanimousDecision", "Was the ruling unanimous?"),
        FieldRole::ConventionArticle => ("involveConventionArticle", "Which articles of the Convention were considered?"),
        FieldRole::References => ("references", "Which laws were considered to reach this conclusion?"),
        FieldRole::ImportanceLevel => (
            "importanceLevel",
            "What is the importance of the ruling concerning future cases?",
        ),
        FieldRole::AccessRights => ("accessRights", "Is the document publicly accessible?"),
        FieldRole::Language => ("language", "In which language is the document written?"),
        FieldRole::Identifier => ("identifier", "Where can I consult the document?"),
    }
}

/// One query per competency question, in table order.
pub fn cq_query_templates(cfg: &VocabularyConfig) -> Vec<CqTemplate> {
    let head = format!(
        "PREFIX dcterms: <{}>\nPREFIX {}: <{}>\nPREFIX xsd: <http://www.w3.org/2001/XMLSchema#>\n",
        cfg.dcterms_ns.as_str(),
        cfg.custom_prefix,
        cfg.custom_ns.as_str()
    );
    let c = CASE_PLACEHOLDER;
    FieldRole::ALL
        .iter()
        .map(|&role| {
            let p = cfg.predicate(role);
            let body = match role {
                FieldRole::UnanimousDecision => format!("ASK {{ {c} {p} ?u . FILTER(?u = true) }}"),
                FieldRole::Date => {
                    format!("SELECT ?answer WHERE {{ {c} {p} ?answer . FILTER(DATATYPE(?answer) = xsd:date) }}")
                }
                FieldRole::IsVersionOf => format!(
                    "SELECT ?answer ?case WHERE {{ {c} {p} ?answer . ?case {p} ?answer }} ORDER BY ?case"
                ),
                FieldRole::ImportanceLevel => format!(
                    "SELECT ?answer ?label WHERE {{ {c} {p} ?answer . OPTIONAL {{ {c} {} ?label }} }}",
                    cfg.importance_label()
                ),
                _ => format!("SELECT DISTINCT ?answer WHERE {{ {c} {p} ?answer }} ORDER BY ?answer"),
            };
            let (name, question) = question(role);
            CqTemplate {
                name,
                question,
                role,
                query: format!("{head}{body}"),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CqCheck {
    pub name: &'static str,
    pub expected: BTreeSet<String>,
    pub actual: BTreeSet<String>,
    pub error: Option<String>,
}

impl CqCheck {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.expected == self.actual
    }
}

fn expected_answers(rec: &CaseRecord, role: FieldRole) -> BTreeSet<String> {
    let one = |s: String| BTreeSet::from([s]);
    let nonempty = |s: &str| if s.is_empty() { BTreeSet::new() } else { one(s.to_string()) };
    match role {
        FieldRole::Type => one(rec.doc_type.code().to_string()),
        FieldRole::Date => one(rec.date.format("%Y-%m-%d").to_string()),
        FieldRole::IsVersionOf => one(rec.ecli.to_string()),
        FieldRole::Contributor => rec.contributors.iter().cloned().collect(),
        FieldRole::RespondentState => rec
            .respondent_states
            .iter()
            .map(|s| s.iri.as_ref().map_or_else(|| s.name.clone(), |i| i.as_str().to_string()))
            .collect(),
        FieldRole::Abstract => nonempty(&rec.conclusion_abstract),
        FieldRole::UnanimousDecision => one((rec.unanimous == Some(true)).to_string()),
        FieldRole::ConventionArticle => rec.convention_articles.iter().cloned().collect(),
        FieldRole::References => rec.references.iter().cloned().collect(),
        FieldRole::ImportanceLevel => rec.importance.iter().map(|l| l.canonical().to_string()).collect(),
        FieldRole::AccessRights => nonempty(&rec.access_rights),
        FieldRole::Language => one(rec.language.clone()),
        FieldRole::Identifier => one(rec.document_url.as_str().to_string()),
    }
}

fn plain(term: &Term) -> String {
    match term {
        Term::Iri(i) => i.as_str().to_string(),
        Term::BlankNode(b) => b.to_string(),
        Term::Literal(l) => l.lexical().to_string(),
    }
}

fn actual_answers(results: &ResultSet) -> BTreeSet<String> {
    match results {
        ResultSet::Boolean(b) => BTreeSet::from([b.to_string()]),
        ResultSet::Bindings { vars, solutions } => solutions
            .iter()
            .filter_map(|sol| sol.get(vars.first()?))
            .map(plain)
            .collect(),
    }
}

/// Runs all templates for one case and compares each answer with the
/// record it was built from.
pub fn validate_case(graph: &Graph, rec: &CaseRecord, cfg: &VocabularyConfig) -> Vec<CqCheck> {
    cq_query_templates(cfg)
        .iter()
        .map(|template| {
            let expected = expected_answers(rec, template.role);
            let outcome = parse_query(&template.instantiate(&rec.document_url))
                .map_err(|e| e.to_string())
                .and_then(|q| evaluate(&q, graph).map_err(|e| e.to_string()));
            match outcome {
                Ok(results) => CqCheck {
                    name: template.name,
                    expected,
                    actual: actual_answers(&results),
                    error: None,
                },
                Err(e) => CqCheck {
                    name: template.name,
                    expected,
                    actual: BTreeSet::new(),
                    error: Some(e),
                },
            }
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CqReport {
    pub cases: Vec<(String, Vec<CqCheck>)>,
}

impl CqReport {
    pub fn total(&self) -> usize {
        self.cases.iter().map(|(_, c)| c.len()).sum()
    }

    pub fn passed(&self) -> usize {
        self.cases.iter().flat_map(|(_, c)| c).filter(|c| c.passed()).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = (&str, &CqCheck)> {
        self.cases
            .iter()
            .flat_map(|(id, checks)| checks.iter().map(move |c| (id.as_str(), c)))
            .filter(|(_, c)| !c.passed())
    }

    pub fn all_passed(&self) -> bool {
        self.passed() == self.total()
    }
}

/// Validates every `(case id, record)` pair against `graph`.
pub fn validate_corpus<'a>(
    graph: &Graph,
    records: impl IntoIterator<Item = (&'a str, &'a CaseRecord)>,
    cfg: &VocabularyConfig,
) -> CqReport {
    CqReport {
        cases: records
            .into_iter()
            .map(|(id, rec)| (id.to_string(), validate_case(graph, rec, cfg)))
            .collect(),
    }
}
