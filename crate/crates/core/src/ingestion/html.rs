use std::sync::OnceLock;

use regex::Regex;

use super::{CaseDraft, IngestContext, IngestError, IngestWarning, ParsedCase};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Title,
    Ecli,
    DocType,
    Date,
    ApplicationNumber,
    Importance,
    RespondentState,
    Article,
    Unanimous,
    Language,
    Conclusion,
    Reference,
    Contributor,
    AccessRights,
    DocumentUrl,
}

/// Accepted spellings of each case-detail heading, compared after
/// lowercasing and collapsing whitespace.
const ALIASES: &[(&str, Field)] = &[
    ("title", Field::Title),
    ("document title", Field::Title),
    ("case title", Field::Title),
    ("ecli", Field::Ecli),
    ("type", Field::DocType),
    ("document type", Field::DocType),
    ("date", Field::Date),
    ("judgment date", Field::Date),
    ("decision date", Field::Date),
    ("application no", Field::ApplicationNumber),
    ("application no.", Field::ApplicationNumber),
    ("application number", Field::ApplicationNumber),
    ("application number(s)", Field::ApplicationNumber),
    ("importance level", Field::Importance),
    ("importance", Field::Importance),
    ("respondent state", Field::RespondentState),
    ("respondent state(s)", Field::RespondentState),
    ("respondent states", Field::RespondentState),
    ("article", Field::Article),
    ("article(s)", Field::Article),
    ("articles", Field::Article),
    ("convention article", Field::Article),
    ("convention article(s)", Field::Article),
    ("unanimous", Field::Unanimous),
    ("unanimity", Field::Unanimous),
    ("language", Field::Language),
    ("language(s)", Field::Language),
    ("conclusion", Field::Conclusion),
    ("conclusion(s)", Field::Conclusion),
    ("abstract", Field::Conclusion),
    ("reference", Field::Reference),
    ("references", Field::Reference),
    ("strasbourg case-law", Field::Reference),
    ("domestic law", Field::Reference),
    ("international law", Field::Reference),
    ("representative", Field::Contributor),
    ("represented by", Field::Contributor),
    ("contributor", Field::Contributor),
    ("access rights", Field::AccessRights),
    ("access", Field::AccessRights),
    ("document url", Field::DocumentUrl),
    ("url", Field::DocumentUrl),
    ("link", Field::DocumentUrl),
];

fn field_for(name: &str) -> Option<Field> {
    let key = name.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase();
    ALIASES.iter().find(|(alias, _)| *alias == key).map(|&(_, f)| f)
}

fn pair_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?is)<dt\b[^>]*>(.*?)</dt>\s*<dd\b[^>]*>(.*?)</dd>").expect("static regex"))
}

fn tag_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?s)<[^>]*>").expect("static regex"))
}

fn text_of(fragment: &str) -> String {
    let stripped = tag_regex().replace_all(fragment, " ");
    html_escape::decode_html_entities(&stripped).trim().to_string()
}

/// Parses a case-details page written as `<dt>Field</dt><dd>value</dd>`
/// pairs. Multi-valued fields repeat the pair; unknown headings become
/// warnings.
pub fn parse_case_details_html(text: &str, ctx: &IngestContext) -> Result<ParsedCase, IngestError> {
    let mut draft = CaseDraft::default();
    let mut seen_scalar: Vec<Field> = Vec::new();
    for caps in pair_regex().captures_iter(text) {
        let name = text_of(&caps[1]);
        let value = text_of(&caps[2]);
        let Some(field) = field_for(&name) else {
            draft.warnings.push(IngestWarning {
                field: name,
                message: "unknown field ignored".into(),
            });
            continue;
        };
        let multi = matches!(
            field,
            Field::ApplicationNumber | Field::RespondentState | Field::Article | Field::Reference | Field::Contributor
        );
        if !multi {
            if seen_scalar.contains(&field) {
                draft.warnings.push(IngestWarning {
                    field: name.clone(),
                    message: "repeated single-valued field; last value wins".into(),
                });
            }
            seen_scalar.push(field);
        }
        if value.is_empty() && field != Field::Ecli {
            continue;
        }
        match field {
            Field::Title => draft.set_title(&value),
            Field::Ecli => draft.set_ecli(&value)?,
            Field::DocType => draft.set_doc_type(&value)?,
            Field::Date => draft.set_date(&value)?,
            Field::ApplicationNumber => draft.add_application_number(&value)?,
            Field::Importance => draft.set_importance(&value, &ctx.importance)?,
            Field::RespondentState => draft.add_state(&value, &ctx.states),
            Field::Article => draft.add_article(&value),
            Field::Unanimous => draft.set_unanimous_text(&value)?,
            Field::Language => draft.set_language(&value),
            Field::Conclusion => draft.set_abstract(&value),
            Field::Reference => draft.add_reference(&value),
            Field::Contributor => draft.add_contributor(&value),
            Field::AccessRights => draft.set_access_rights(&value),
            Field::DocumentUrl => draft.set_document_url(&value)?,
        }
    }
    draft.finish()
}
