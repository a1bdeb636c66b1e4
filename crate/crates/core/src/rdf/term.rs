use std::fmt;

use super::vocab::{rdf, xsd};
use super::RdfError;

/// An absolute IRI.
///
/// The value always carries a scheme and never contains characters that
/// would need escaping inside `<...>` in Turtle or N-Triples.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, RdfError> {
        let value = value.into();
        validate_iri(&value)?;
        Ok(Iri(value))
    }

    /// Builds an IRI from a string already known to be valid.
    ///
    /// Panics when the value is not a valid IRI; intended for constants.
    pub fn from_static(value: &'static str) -> Self {
        Iri::new(value).expect("static IRI must be valid")
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl serde::Serialize for Iri {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> serde::Deserialize<'de> for Iri {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let value = String::deserialize(deserializer)?;
        Iri::new(value).map_err(serde::de::Error::custom)
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

fn validate_iri(value: &str) -> Result<(), RdfError> {
    let invalid = |reason: &str| RdfError::InvalidIri {
        value: value.to_string(),
        reason: reason.to_string(),
    };
    if value.is_empty() {
        return Err(invalid("empty"));
    }
    let colon = value.find(':').ok_or_else(|| invalid("missing scheme"))?;
    let scheme = &value[..colon];
    let mut chars = scheme.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return Err(invalid("scheme must start with a letter")),
    }
    if !chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.')) {
        return Err(invalid("invalid scheme character"));
    }
    if let Some(c) = value.chars().find(|&c| {
        c.is_whitespace()
            || c.is_control()
            || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\')
    }) {
        return Err(invalid(&format!("forbidden character {c:?}")));
    }
    Ok(())
}

/// A blank node, identified by a graph-scoped label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlankNode(String);

impl BlankNode {
    pub fn new(label: impl Into<String>) -> Result<Self, RdfError> {
        let label = label.into();
        if label.is_empty() || !label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(RdfError::InvalidBlankNode(label));
        }
        Ok(BlankNode(label))
    }

    pub fn label(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for BlankNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "_:{}", self.0)
    }
}

/// An RDF literal. Equality is structural over lexical form, datatype and
/// language tag; no value-space canonicalization happens.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    lexical: String,
    datatype: Iri,
    language: Option<String>,
}

impl Literal {
    /// A plain `xsd:string` literal.
    pub fn string(lexical: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: xsd::string(),
            language: None,
        }
    }

    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype,
            language: None,
        }
    }

    pub fn lang(lexical: impl Into<String>, language: impl Into<String>) -> Result<Self, RdfError> {
        let language = language.into();
        if !is_valid_langtag(&language) {
            return Err(RdfError::InvalidLanguageTag(language));
        }
        Ok(Literal {
            lexical: lexical.into(),
            datatype: rdf::lang_string(),
            language: Some(language),
        })
    }

    pub fn integer(value: i64) -> Self {
        Literal::typed(value.to_string(), xsd::integer())
    }

    pub fn boolean(value: bool) -> Self {
        Literal::typed(value.to_string(), xsd::boolean())
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &Iri {
        &self.datatype
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }

    /// True for `xsd:string` literals without a language tag.
    pub fn is_plain(&self) -> bool {
        self.language.is_none() && self.datatype.as_str() == xsd::STRING
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", escape_string(&self.lexical))?;
        if let Some(lang) = &self.language {
            write!(f, "@{lang}")
        } else if self.is_plain() {
            Ok(())
        } else {
            write!(f, "^^{}", self.datatype)
        }
    }
}

pub(crate) fn is_valid_langtag(tag: &str) -> bool {
    let mut parts = tag.split('-');
    let first = parts.next().unwrap_or("");
    !first.is_empty()
        && first.chars().all(|c| c.is_ascii_alphabetic())
        && parts.all(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_alphanumeric()))
}

/// Escapes a lexical form for a double-quoted Turtle / N-Triples string.
pub(crate) fn escape_string(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for c in value.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => out.push_str(&format!("\\u{:04X}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

/// Any RDF term. The derived ordering puts IRIs before blank nodes before
/// literals, and compares values lexicographically within a kind.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    BlankNode(BlankNode),
    Literal(Literal),
}

impl Term {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            _ => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(t) => t.fmt(f),
            Term::BlankNode(t) => t.fmt(f),
            Term::Literal(t) => t.fmt(f),
        }
    }
}

impl From<Iri> for Term {
    fn from(value: Iri) -> Self {
        Term::Iri(value)
    }
}

impl From<BlankNode> for Term {
    fn from(value: BlankNode) -> Self {
        Term::BlankNode(value)
    }
}

impl From<Literal> for Term {
    fn from(value: Literal) -> Self {
        Term::Literal(value)
    }
}

/// A subject-predicate-object statement.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    subject: Term,
    predicate: Iri,
    object: Term,
}

impl Triple {
    pub fn new(subject: impl Into<Term>, predicate: Iri, object: impl Into<Term>) -> Result<Self, RdfError> {
        let subject = subject.into();
        if subject.is_literal() {
            return Err(RdfError::LiteralSubject(subject.to_string()));
        }
        Ok(Triple {
            subject,
            predicate,
            object: object.into(),
        })
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Iri {
        &self.predicate
    }

    pub fn object(&self) -> &Term {
        &self.object
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iri_validation() {
        assert!(Iri::new("http://example.org/a").is_ok());
        assert!(Iri::new("urn:x").is_ok());
        assert!(Iri::new("").is_err());
        assert!(Iri::new("no-scheme").is_err());
        assert!(Iri::new("http://a b").is_err());
        assert!(Iri::new("http://a<b").is_err());
        assert!(Iri::new("1http://a").is_err());
    }

    #[test]
    fn blank_label_charset() {
        assert!(BlankNode::new("b0_x").is_ok());
        assert!(BlankNode::new("").is_err());
        assert!(BlankNode::new("a-b").is_err());
    }

    #[test]
    fn literal_kinds_are_distinct() {
        let plain = Literal::string("a");
        let tagged = Literal::lang("a", "en").unwrap();
        assert_ne!(plain, tagged);
        assert_eq!(tagged.datatype().as_str(), rdf::LANG_STRING);
        assert!(Literal::lang("a", "en-").is_err());
        assert_ne!(Literal::integer(1), Literal::typed("01", xsd::integer()));
    }

    #[test]
    fn term_kind_ordering() {
        let iri = Term::Iri(Iri::new("z:z").unwrap());
        let blank = Term::BlankNode(BlankNode::new("a").unwrap());
        let lit = Term::Literal(Literal::string("a"));
        assert!(iri < blank && blank < lit);
    }

    #[test]
    fn literal_subject_rejected() {
        let err = Triple::new(Literal::string("x"), Iri::new("p:p").unwrap(), Literal::string("y")).unwrap_err();
        assert!(err.to_string().contains("subject"));
    }
}
