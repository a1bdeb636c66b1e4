use std::collections::BTreeMap;
use std::sync::OnceLock;

use regex::Regex;
use serde::Serialize;

use super::LlmError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TemplateId {
    OntologySeed,
    OntologyExpand,
    KgGenerate,
    CqGenerate,
    CqAnswer,
}

impl TemplateId {
    pub const ALL: [TemplateId; 5] = [
        TemplateId::OntologySeed,
        TemplateId::OntologyExpand,
        TemplateId::KgGenerate,
        TemplateId::CqGenerate,
        TemplateId::CqAnswer,
    ];

    /// Directory name used for fixture lookups.
    pub fn id(self) -> &'static str {
        match self {
            TemplateId::OntologySeed => "ontology-seed",
            TemplateId::OntologyExpand => "ontology-expand",
            TemplateId::KgGenerate => "kg-generate",
            TemplateId::CqGenerate => "cq-generate",
            TemplateId::CqAnswer => "cq-answer",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PromptMode {
    ZeroShot,
    FewShot(Vec<(String, String)>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PromptTemplate {
    pub id: TemplateId,
    pub body: String,
    pub mode: PromptMode,
}

fn placeholder_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\{\{([a-z_]+)\}\}").expect("valid placeholder regex"))
}

const KG_EXAMPLE_INPUT: &str = "The applicant, Ms A., complained that the police of the respondent State \
failed to protect her from her former partner, who had beaten her repeatedly. The Court found a \
violation of Article 3 of the Convention.";

const KG_EXAMPLE_OUTPUT: &str = "@prefix ex: <http://example.org/kg/> .
@prefix onto: <http://example.org/onto#> .

ex:case-a a onto:LegalCase ;
    onto:hasApplicant ex:applicant-a .
ex:applicant-a a onto:Applicant .
ex:abuse-a a onto:Abuse ;
    onto:abuseType \"physical violence\" ;
    onto:frequency \"repeated\" .";

impl PromptTemplate {
    pub fn new(id: TemplateId, body: impl Into<String>, mode: PromptMode) -> Result<Self, LlmError> {
        if let PromptMode::FewShot(examples) = &mode {
            if examples.is_empty() {
                return Err(LlmError::Prompt(format!("{} is few-shot but has no examples", id.id())));
            }
        }
        Ok(PromptTemplate {
            id,
            body: body.into(),
            mode,
        })
    }

    /// Built-in template for `id`.
    pub fn builtin(id: TemplateId) -> Self {
        let (body, mode) = match id {
            TemplateId::OntologySeed => (
                "You are building an OWL ontology, written in Turtle, for court rulings on violence \
against women.\nStart from this schema:\n{{seed}}\n\nDeclare the foundational classes, object \
properties and datatype properties. Answer with Turtle only.",
                PromptMode::ZeroShot,
            ),
            TemplateId::OntologyExpand => (
                "Here is an ontology in Turtle:\n{{ontology}}\n\nRead the judgment below and declare any \
missing classes, object properties or datatype properties needed to describe it. Answer with \
Turtle only.\n\nJudgment:\n{{document}}",
                PromptMode::ZeroShot,
            ),
            TemplateId::KgGenerate => (
                "Describe the judgment as RDF in Turtle, using only the classes and properties of this \
ontology:\n{{ontology}}\n\n{{examples}}Judgment:\n{{document}}\n\nTurtle:",
                PromptMode::FewShot(vec![(KG_EXAMPLE_INPUT.to_string(), KG_EXAMPLE_OUTPUT.to_string())]),
            ),
            TemplateId::CqGenerate => (
                "List the competency questions that a knowledge graph built on this ontology should \
answer, one question per line:\n{{ontology}}",
                PromptMode::ZeroShot,
            ),
            TemplateId::CqAnswer => (
                "Answer the question using only the context below. If the context is empty, say so.\n\n\
Context:\n{{context}}\n\nQuestion: {{question}}\nAnswer:",
                PromptMode::ZeroShot,
            ),
        };
        PromptTemplate {
            id,
            body: body.to_string(),
            mode,
        }
    }

    pub fn placeholders(&self) -> Vec<String> {
        let mut names: Vec<String> = placeholder_re()
            .captures_iter(&self.body)
            .map(|c| c[1].to_string())
            .collect();
        names.dedup();
        names
    }

    /// Fills every `{{name}}`. The few-shot examples fill `{{examples}}`
    /// themselves; any other unfilled placeholder is an error.
    pub fn render(&self, values: &BTreeMap<&str, &str>) -> Result<String, LlmError> {
        let examples = match &self.mode {
            PromptMode::ZeroShot => String::new(),
            PromptMode::FewShot(pairs) => pairs
                .iter()
                .map(|(input, output)| format!("Example judgment:\n{input}\n\nExample Turtle:\n{output}\n\n"))
                .collect(),
        };
        let mut missing = None;
        let out = placeholder_re().replace_all(&self.body, |c: &regex::Captures<'_>| {
            let name = &c[1];
            match values.get(name) {
                Some(v) => v.to_string(),
                None if name == "examples" && matches!(self.mode, PromptMode::FewShot(_)) => examples.clone(),
                None => {
                    missing.get_or_insert_with(|| name.to_string());
                    String::new()
                }
            }
        });
        match missing {
            Some(name) => Err(LlmError::Prompt(format!("{}: placeholder {{{{{name}}}}} not filled", self.id.id()))),
            None => Ok(out.into_owned()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_render_with_their_placeholders() {
        for id in TemplateId::ALL {
            let t = PromptTemplate::builtin(id);
            let names = t.placeholders();
            let values: BTreeMap<&str, &str> = names
                .iter()
                .filter(|n| *n != "examples")
                .map(|n| (n.as_str(), "X"))
                .collect();
            let text = t.render(&values).unwrap();
            assert!(!text.contains("{{"), "{text}");
        }
        let kg = PromptTemplate::builtin(TemplateId::KgGenerate)
            .render(&BTreeMap::from([("ontology", "O"), ("document", "D")]))
            .unwrap();
        assert!(kg.contains("Example Turtle:"));
    }

    #[test]
    fn missing_placeholder_is_an_error() {
        let t = PromptTemplate::builtin(TemplateId::CqAnswer);
        let err = t.render(&BTreeMap::from([("question", "q")])).unwrap_err();
        assert!(err.to_string().contains("{{context}}"), "{err}");
    }

    #[test]
    fn few_shot_needs_examples() {
        assert!(PromptTemplate::new(TemplateId::KgGenerate, "{{document}}", PromptMode::FewShot(vec![])).is_err());
    }
}
