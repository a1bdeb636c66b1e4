//! Maps case records onto RDF using Dublin Core terms plus a small custom
//! vocabulary, and emits the matching T-box.

mod cq;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingestion::CaseRecord;
use crate::rdf::vocab::{dcterms, owl, rdf, rdfs, xsd};
use crate::rdf::{merge, BlankNode, Graph, Iri, Literal, Term, Triple};

pub use cq::{cq_query_templates, validate_case, validate_corpus, CqCheck, CqReport, CqTemplate, CASE_PLACEHOLDER};

pub const DEFAULT_CUSTOM_NS: &str = "https://w3id.org/prejust4woman/ontology#";
pub const DEFAULT_CUSTOM_PREFIX: &str = "pj4w";
pub const WIKIDATA_ENTITY_NS: &str = "http://www.wikidata.org/entity/";

/// The thirteen record fields that carry a competency question.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldRole {
    Type,
    Date,
    IsVersionOf,
    Contributor,
    RespondentState,
    Abstract,
    UnanimousDecision,
    ConventionArticle,
    References,
    ImportanceLevel,
    AccessRights,
    Language,
    Identifier,
}

impl FieldRole {
    pub const ALL: [FieldRole; 13] = [
        FieldRole::Type,
        FieldRole::Date,
        FieldRole::IsVersionOf,
        FieldRole::Contributor,
        FieldRole::RespondentState,
        FieldRole::Abstract,
        FieldRole::UnanimousDecision,
        FieldRole::ConventionArticle,
        FieldRole::References,
        FieldRole::ImportanceLevel,
        FieldRole::AccessRights,
        FieldRole::Language,
        FieldRole::Identifier,
    ];

    /// Local name of the default predicate, and whether it lives in the
    /// Dublin Core namespace (otherwise the custom one).
    fn default_term(self) -> (&'static str, bool) {
        match self {
            FieldRole::Type => ("type", true),
            FieldRole::Date => ("date", true),
            FieldRole::IsVersionOf => ("isVersionOf", true),
            FieldRole::Contributor => ("contributor", true),
            FieldRole::RespondentState => ("respondentState", false),
            FieldRole::Abstract => ("abstract", true),
            FieldRole::UnanimousDecision => ("unanimousDecision", false),
            FieldRole::ConventionArticle => ("involveConventionArticle", false),
            FieldRole::References => ("references", true),
            FieldRole::ImportanceLevel => ("importanceLevel", false),
            FieldRole::AccessRights => ("accessRights", true),
            FieldRole::Language => ("language", true),
            FieldRole::Identifier => ("identifier", true),
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            FieldRole::Type => "type",
            FieldRole::Date => "date",
            FieldRole::IsVersionOf => "is_version_of",
            FieldRole::Contributor => "contributor",
            FieldRole::RespondentState => "respondent_state",
            FieldRole::Abstract => "abstract",
            FieldRole::UnanimousDecision => "unanimous_decision",
            FieldRole::ConventionArticle => "convention_article",
            FieldRole::References => "references",
            FieldRole::ImportanceLevel => "importance_level",
            FieldRole::AccessRights => "access_rights",
            FieldRole::Language => "language",
            FieldRole::Identifier => "identifier",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassIris {
    pub domestic_law: Iri,
    pub international_law: Iri,
    pub strasbourg_case_law: Iri,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("vocabulary config: {0}")]
    Invalid(String),
    #[error("vocabulary config {path}: {message}")]
    Read { path: String, message: String },
}

/// Namespaces, per-role predicates and class IRIs used by the mapping.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VocabularyConfig {
    pub dcterms_ns: Iri,
    pub custom_ns: Iri,
    pub custom_prefix: String,
    pub terms: BTreeMap<FieldRole, Iri>,
    pub classes: ClassIris,
}

/// On-disk form; every key is optional and falls back to the defaults.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct VocabularyFile {
    dcterms_ns: Option<Iri>,
    custom_ns: Option<Iri>,
    custom_prefix: Option<String>,
    #[serde(default)]
    terms: BTreeMap<FieldRole, Iri>,
    classes: Option<ClassIris>,
}

fn join(ns: &Iri, local: &str) -> Iri {
    Iri::new(format!("{}{local}", ns.as_str())).expect("namespace plus local name stays a valid IRI")
}

impl Default for VocabularyConfig {
    fn default() -> Self {
        VocabularyConfig::with_namespaces(Iri::from_static(dcterms::NS), Iri::from_static(DEFAULT_CUSTOM_NS))
    }
}

impl VocabularyConfig {
    pub fn with_namespaces(dcterms_ns: Iri, custom_ns: Iri) -> Self {
        let terms = FieldRole::ALL
            .iter()
            .map(|&role| {
                let (local, dc) = role.default_term();
                (role, join(if dc { &dcterms_ns } else { &custom_ns }, local))
            })
            .collect();
        let classes = ClassIris {
            domestic_law: join(&custom_ns, "DomesticLaw"),
            international_law: join(&custom_ns, "InternationalLaw"),
            strasbourg_case_law: join(&custom_ns, "StrasbourgCaseLaw"),
        };
        VocabularyConfig {
            dcterms_ns,
            custom_ns,
            custom_prefix: DEFAULT_CUSTOM_PREFIX.to_string(),
            terms,
            classes,
        }
    }

    fn from_file_form(file: VocabularyFile) -> Result<Self, ConfigError> {
        let mut cfg = VocabularyConfig::with_namespaces(
            file.dcterms_ns.unwrap_or_else(|| Iri::from_static(dcterms::NS)),
            file.custom_ns.unwrap_or_else(|| Iri::from_static(DEFAULT_CUSTOM_NS)),
        );
        if let Some(prefix) = file.custom_prefix {
            cfg.custom_prefix = prefix;
        }
        cfg.terms.extend(file.terms);
        if let Some(classes) = file.classes {
            cfg.classes = classes;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let file: VocabularyFile = toml::from_str(text).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Self::from_file_form(file)
    }

    pub fn from_json_str(text: &str) -> Result<Self, ConfigError> {
        let file: VocabularyFile = serde_json::from_str(text).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Self::from_file_form(file)
    }

    /// Loads a `.json` file as JSON and anything else as TOML.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let parsed = match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Self::from_json_str(&text),
            _ => Self::from_toml_str(&text),
        };
        parsed.map_err(|e| ConfigError::Read {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    /// Checks every role has a predicate and no two share one.
    pub fn validate(&self) -> Result<(), ConfigError> {
        for role in FieldRole::ALL {
            if !self.terms.contains_key(&role) {
                return Err(ConfigError::Invalid(format!("missing predicate for role {}", role.key())));
            }
        }
        let mut seen = BTreeMap::new();
        let extras = [
            ("application_numbers", self.application_numbers()),
            ("importance_label", self.importance_label()),
        ];
        let all = self
            .terms
            .iter()
            .map(|(role, iri)| (role.key(), iri.clone()))
            .chain(extras);
        for (key, iri) in all {
            if let Some(other) = seen.insert(iri.clone(), key) {
                return Err(ConfigError::Invalid(format!(
                    "roles {other} and {key} share predicate {}",
                    iri.as_str()
                )));
            }
        }
        let prefix_ok = self.custom_prefix.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && self.custom_prefix.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
        if !prefix_ok {
            return Err(ConfigError::Invalid(format!("invalid custom prefix {:?}", self.custom_prefix)));
        }
        Ok(())
    }

    pub fn predicate(&self, role: FieldRole) -> &Iri {
        &self.terms[&role]
    }

    pub fn application_numbers(&self) -> Iri {
        join(&self.custom_ns, "applicationNumbers")
    }

    /// Annotation carrying the court's original importance label.
    pub fn importance_label(&self) -> Iri {
        join(&self.custom_ns, "importanceLabel")
    }

    fn bind_prefixes(&self, graph: &mut Graph) {
        graph.bind_prefix("rdf", Iri::from_static(rdf::NS));
        graph.bind_prefix("rdfs", Iri::from_static(rdfs::NS));
        graph.bind_prefix("owl", Iri::from_static(owl::NS));
        graph.bind_prefix("xsd", Iri::from_static(xsd::NS));
        graph.bind_prefix("dcterms", self.dcterms_ns.clone());
        graph.bind_prefix(self.custom_prefix.clone(), self.custom_ns.clone());
        graph.bind_prefix("wd", Iri::from_static(WIKIDATA_ENTITY_NS));
    }
}

fn add(graph: &mut Graph, s: &Iri, p: Iri, o: impl Into<Term>) {
    graph.insert(Triple::new(s.clone(), p, o).expect("IRI subject"));
}

/// Class and property declarations for the custom vocabulary.
pub fn emit_tbox(cfg: &VocabularyConfig) -> Graph {
    let mut g = Graph::new();
    cfg.bind_prefixes(&mut g);
    let classes = [
        (&cfg.classes.domestic_law, "Domestic law"),
        (&cfg.classes.international_law, "International law"),
        (&cfg.classes.strasbourg_case_law, "Strasbourg case-law"),
    ];
    for (class, label) in classes {
        add(&mut g, class, rdf::type_(), owl::class());
        add(&mut g, class, rdfs::label(), Literal::lang(label, "en").expect("valid tag"));
    }

    let domain = &cfg.classes.strasbourg_case_law;
    let properties: [(Iri, Iri, Option<Iri>, &[&str]); 6] = [
        (cfg.predicate(FieldRole::RespondentState).clone(), rdf::property(), None, &["respondentStates"]),
        (
            cfg.predicate(FieldRole::ConventionArticle).clone(),
            owl::datatype_property(),
            None,
            &["involvedArticles"],
        ),
        (
            cfg.predicate(FieldRole::UnanimousDecision).clone(),
            owl::datatype_property(),
            Some(xsd::boolean()),
            &["unanimousDecisionIndicators"],
        ),
        (
            cfg.predicate(FieldRole::ImportanceLevel).clone(),
            owl::datatype_property(),
            Some(xsd::integer()),
            &[],
        ),
        (cfg.application_numbers(), owl::datatype_property(), None, &[]),
        (cfg.importance_label(), owl::annotation_property(), None, &[]),
    ];
    for (property, kind, range, aliases) in properties {
        add(&mut g, &property, rdf::type_(), kind);
        add(&mut g, &property, rdfs::domain(), domain.clone());
        if let Some(range) = range {
            add(&mut g, &property, rdfs::range(), range);
        }
        let name = local_name(&property);
        for label in std::iter::once(name).chain(aliases.iter().copied()) {
            add(&mut g, &property, rdfs::label(), Literal::string(label));
        }
    }
    g
}

fn local_name(iri: &Iri) -> &str {
    let s = iri.as_str();
    s.rfind(['#', '/']).map(|i| &s[i + 1..]).unwrap_or(s)
}

/// The A-box triples for one case; the subject is the document URL.
pub fn case_to_triples(rec: &CaseRecord, cfg: &VocabularyConfig) -> Graph {
    let mut g = Graph::new();
    cfg.bind_prefixes(&mut g);
    let s = &rec.document_url;
    let p = |role| cfg.predicate(role).clone();

    add(&mut g, s, rdf::type_(), cfg.classes.strasbourg_case_law.clone());
    add(&mut g, s, p(FieldRole::Type), Literal::string(rec.doc_type.code()));
    add(&mut g, s, p(FieldRole::Date), Literal::typed(rec.date.format("%Y-%m-%d").to_string(), xsd::date()));
    add(&mut g, s, p(FieldRole::IsVersionOf), Literal::string(rec.ecli.to_string()));
    for c in &rec.contributors {
        add(&mut g, s, p(FieldRole::Contributor), Literal::string(c));
    }
    for state in &rec.respondent_states {
        let object: Term = match &state.iri {
            Some(iri) => iri.clone().into(),
            None => Literal::string(&state.name).into(),
        };
        add(&mut g, s, p(FieldRole::RespondentState), object);
    }
    if !rec.conclusion_abstract.is_empty() {
        add(&mut g, s, p(FieldRole::Abstract), Literal::string(&rec.conclusion_abstract));
    }
    if let Some(unanimous) = rec.unanimous {
        add(&mut g, s, p(FieldRole::UnanimousDecision), Literal::boolean(unanimous));
    }
    for article in &rec.convention_articles {
        add(&mut g, s, p(FieldRole::ConventionArticle), Literal::string(article));
    }
    for reference in &rec.references {
        add(&mut g, s, p(FieldRole::References), Literal::string(reference));
    }
    if let Some(level) = rec.importance {
        add(&mut g, s, p(FieldRole::ImportanceLevel), Literal::integer(level.canonical().into()));
        add(&mut g, s, cfg.importance_label(), Literal::string(level.label()));
    }
    if !rec.access_rights.is_empty() {
        add(&mut g, s, p(FieldRole::AccessRights), Literal::string(&rec.access_rights));
    }
    add(&mut g, s, p(FieldRole::Language), Literal::string(&rec.language));
    add(&mut g, s, p(FieldRole::Identifier), Literal::string(s.as_str()));
    for number in &rec.application_numbers {
        add(&mut g, s, cfg.application_numbers(), Literal::string(number.to_string()));
    }
    g
}

/// T-box plus every case graph, deduplicated. Independent of input order.
pub fn build_kg(records: &[CaseRecord], cfg: &VocabularyConfig) -> Graph {
    let cases = records
        .par_iter()
        .map(|rec| case_to_triples(rec, cfg))
        .reduce(Graph::new, |a, b| merge(&a, &b));
    merge(&emit_tbox(cfg), &cases)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct KgStats {
    pub triple_count: usize,
    pub distinct_predicates: usize,
    /// Subjects together with IRI and blank-node objects.
    pub distinct_entities: usize,
}

pub fn kg_stats(graph: &Graph) -> KgStats {
    let mut predicates = BTreeSet::new();
    let mut entities = BTreeSet::new();
    for t in graph {
        predicates.insert(t.predicate());
        entities.insert(t.subject());
        if !t.object().is_literal() {
            entities.insert(t.object());
        }
    }
    KgStats {
        triple_count: graph.len(),
        distinct_predicates: predicates.len(),
        distinct_entities: entities.len(),
    }
}

/// Entity counts under alternative definitions, for comparing against
/// published figures whose definition is not stated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntityCensus {
    pub subjects: usize,
    pub subjects_and_resource_objects: usize,
    pub resources_including_predicates: usize,
    pub resource_objects: usize,
    pub all_distinct_terms: usize,
    pub blank_nodes: usize,
}

pub fn entity_census(graph: &Graph) -> EntityCensus {
    let mut subjects = BTreeSet::new();
    let mut objects = BTreeSet::new();
    let mut literals = BTreeSet::new();
    let mut predicates = BTreeSet::new();
    let mut blanks: BTreeSet<&BlankNode> = BTreeSet::new();
    for t in graph {
        subjects.insert(t.subject().clone());
        predicates.insert(Term::Iri(t.predicate().clone()));
        match t.object() {
            Term::Literal(_) => {
                literals.insert(t.object().clone());
            }
            o => {
                objects.insert(o.clone());
            }
        }
        for term in [t.subject(), t.object()] {
            if let Term::BlankNode(b) = term {
                blanks.insert(b);
            }
        }
    }
    let resources: BTreeSet<Term> = subjects.union(&objects).cloned().collect();
    let with_predicates: BTreeSet<Term> = resources.union(&predicates).cloned().collect();
    EntityCensus {
        subjects: subjects.len(),
        subjects_and_resource_objects: resources.len(),
        resources_including_predicates: with_predicates.len(),
        resource_objects: objects.len(),
        all_distinct_terms: with_predicates.len() + literals.len(),
        blank_nodes: blanks.len(),
    }
}
