use serde::Deserialize;

use super::{CaseDraft, IngestContext, IngestError, ParsedCase};

/// Interchange form of a case record; keys mirror [`super::CaseRecord`].
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CaseJson {
    title: Option<String>,
    ecli: Option<String>,
    doc_type: Option<String>,
    date: Option<String>,
    #[serde(default)]
    application_numbers: Vec<String>,
    importance: Option<String>,
    #[serde(default)]
    respondent_states: Vec<String>,
    #[serde(default)]
    convention_articles: Vec<String>,
    unanimous: Option<bool>,
    language: Option<String>,
    conclusion_abstract: Option<String>,
    #[serde(default)]
    references: Vec<String>,
    #[serde(default)]
    contributors: Vec<String>,
    access_rights: Option<String>,
    document_url: Option<String>,
}

fn at(pointer: impl Into<String>) -> impl FnOnce(IngestError) -> IngestError {
    let pointer = pointer.into();
    move |source| IngestError::Schema {
        pointer,
        source: Box::new(source),
    }
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for segment in path.iter() {
        out.push('/');
        match segment {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

/// Parses the JSON interchange form. Errors point at the offending key.
pub fn parse_case_record_json(text: &str, ctx: &IngestContext) -> Result<ParsedCase, IngestError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: CaseJson = serde_path_to_error::deserialize(de).map_err(|e| IngestError::Json {
        pointer: pointer_of(e.path()),
        message: e.inner().to_string(),
    })?;

    let mut draft = CaseDraft::default();
    if let Some(v) = &raw.ecli {
        draft.set_ecli(v).map_err(at("/ecli"))?;
    }
    if let Some(v) = &raw.title {
        draft.set_title(v);
    }
    if let Some(v) = &raw.doc_type {
        draft.set_doc_type(v).map_err(at("/doc_type"))?;
    }
    if let Some(v) = &raw.date {
        draft.set_date(v).map_err(at("/date"))?;
    }
    for (i, v) in raw.application_numbers.iter().enumerate() {
        draft.add_application_number(v).map_err(at(format!("/application_numbers/{i}")))?;
    }
    if let Some(v) = &raw.importance {
        draft.set_importance(v, &ctx.importance).map_err(at("/importance"))?;
    }
    for v in &raw.respondent_states {
        draft.add_state(v, &ctx.states);
    }
    for v in &raw.convention_articles {
        draft.add_article(v);
    }
    if let Some(v) = raw.unanimous {
        draft.set_unanimous(v);
    }
    if let Some(v) = &raw.language {
        draft.set_language(v);
    }
    if let Some(v) = &raw.conclusion_abstract {
        draft.set_abstract(v);
    }
    for v in &raw.references {
        draft.add_reference(v);
    }
    for v in &raw.contributors {
        draft.add_contributor(v);
    }
    if let Some(v) = &raw.access_rights {
        draft.set_access_rights(v);
    }
    if let Some(v) = &raw.document_url {
        draft.set_document_url(v).map_err(at("/document_url"))?;
    }
    draft.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> IngestContext {
        IngestContext::default()
    }

    const FULL: &str = r#"{
        "ecli": "ECLI:CE:ECHR:2022:0210JUD007397516",
        "doc_type": "JUD",
        "date": "2022-02-10",
        "unanimous": true,
        "language": "ENG",
        "document_url": "https://hudoc.echr.coe.int/eng?i=001-215000"
    }"#;

    #[test]
    fn bogus_ecli_is_an_ecli_error() {
        let err = parse_case_record_json(r#"{"ecli": "bogus"}"#, &ctx()).unwrap_err();
        assert!(matches!(err.root(), IngestError::Ecli(_)), "{err}");
        assert!(matches!(err, IngestError::Schema { ref pointer, .. } if pointer == "/ecli"));
    }

    #[test]
    fn unanimous_flag() {
        let parsed = parse_case_record_json(FULL, &ctx()).unwrap();
        assert_eq!(parsed.record.unanimous, Some(true));
        assert_eq!(parsed.record.application_numbers[0].to_string(), "73975/16");
    }

    #[test]
    fn type_errors_carry_pointer() {
        let text = FULL.replace("\"unanimous\": true", "\"unanimous\": \"yes\"");
        let err = parse_case_record_json(&text, &ctx()).unwrap_err();
        assert!(matches!(err, IngestError::Json { ref pointer, .. } if pointer == "/unanimous"), "{err}");

        let text = FULL.replace("\"doc_type\"", "\"references\": [\"a\", 3], \"doc_type\"");
        let err = parse_case_record_json(&text, &ctx()).unwrap_err();
        assert!(matches!(err, IngestError::Json { ref pointer, .. } if pointer == "/references/1"), "{err}");
    }

    #[test]
    fn bad_application_number_pointer() {
        let text = FULL.replace("\"doc_type\"", "\"application_numbers\": [\"1/19\", \"x\"], \"doc_type\"");
        let err = parse_case_record_json(&text, &ctx()).unwrap_err();
        assert!(matches!(err, IngestError::Schema { ref pointer, .. } if pointer == "/application_numbers/1"), "{err}");
    }
}
