use serde::Serialize;

use crate::rdf::vocab::xsd;
use crate::rdf::Term;

use super::{ResultSet, ResultsError, Variable};

/// Media type of [`serialize_results_json`] output.
pub const JSON_MEDIA_TYPE: &str = "application/sparql-results+json";
pub const CSV_MEDIA_TYPE: &str = "text/csv";

#[derive(Serialize)]
struct Head<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    vars: Option<Vec<&'a str>>,
}

#[derive(Serialize)]
struct Value<'a> {
    #[serde(rename = "type")]
    kind: &'static str,
    value: &'a str,
    #[serde(rename = "xml:lang", skip_serializing_if = "Option::is_none")]
    lang: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    datatype: Option<&'a str>,
}

#[derive(Serialize)]
struct Bindings {
    bindings: Vec<serde_json::Map<String, serde_json::Value>>,
}

#[derive(Serialize)]
struct SelectDoc<'a> {
    head: Head<'a>,
    results: Bindings,
}

#[derive(Serialize)]
struct AskDoc<'a> {
    head: Head<'a>,
    boolean: bool,
}

fn value_of(term: &Term) -> Value<'_> {
    match term {
        Term::Iri(iri) => Value {
            kind: "uri",
            value: iri.as_str(),
            lang: None,
            datatype: None,
        },
        Term::BlankNode(b) => Value {
            kind: "bnode",
            value: b.label(),
            lang: None,
            datatype: None,
        },
        Term::Literal(lit) => Value {
            kind: "literal",
            value: lit.lexical(),
            lang: lit.language(),
            datatype: (lit.language().is_none() && lit.datatype().as_str() != xsd::STRING)
                .then(|| lit.datatype().as_str()),
        },
    }
}

/// SPARQL 1.1 Query Results JSON. Variables are listed in projection order
/// and unbound variables are omitted from a binding.
pub fn serialize_results_json(results: &ResultSet) -> String {
    match results {
        ResultSet::Boolean(value) => serde_json::to_string(&AskDoc {
            head: Head { vars: None },
            boolean: *value,
        }),
        ResultSet::Bindings { vars, solutions } => {
            let bindings = solutions
                .iter()
                .map(|sol| {
                    vars.iter()
                        .filter_map(|v| {
                            let term = sol.get(v)?;
                            let value = serde_json::to_value(value_of(term)).expect("binding serializes");
                            Some((v.name().to_string(), value))
                        })
                        .collect()
                })
                .collect();
            serde_json::to_string(&SelectDoc {
                head: Head {
                    vars: Some(vars.iter().map(Variable::name).collect()),
                },
                results: Bindings { bindings },
            })
        }
    }
    .expect("result documents serialize")
}

/// SPARQL 1.1 CSV results: IRIs and literals as their plain value, blank
/// nodes as `_:label`, unbound as an empty cell.
pub fn serialize_results_csv(results: &ResultSet) -> Result<String, ResultsError> {
    let ResultSet::Bindings { vars, solutions } = results else {
        return Err(ResultsError::BooleanAsCsv);
    };
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    let io = |e: csv::Error| ResultsError::Csv(e.to_string());
    writer.write_record(vars.iter().map(Variable::name)).map_err(io)?;
    for sol in solutions {
        let row: Vec<String> = vars
            .iter()
            .map(|v| match sol.get(v) {
                None => String::new(),
                Some(Term::Iri(iri)) => iri.as_str().to_string(),
                Some(Term::BlankNode(b)) => b.to_string(),
                Some(Term::Literal(lit)) => lit.lexical().to_string(),
            })
            .collect();
        writer.write_record(&row).map_err(io)?;
    }
    let bytes = writer.into_inner().map_err(|e| ResultsError::Csv(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| ResultsError::Csv(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::{Iri, Literal};
    use crate::sparql::Solution;

    fn one(var: &str, term: Term) -> ResultSet {
        let mut sol = Solution::new();
        sol.insert(Variable::new(var), term);
        ResultSet::Bindings {
            vars: vec![Variable::new(var)],
            solutions: vec![sol],
        }
    }

    #[test]
    fn boolean_json() {
        assert_eq!(serialize_results_json(&ResultSet::Boolean(true)), r#"{"head":{},"boolean":true}"#);
    }

    #[test]
    fn iri_binding() {
        let json = serialize_results_json(&one("s", Term::Iri(Iri::new("http://x/a").unwrap())));
        assert_eq!(
            json,
            r#"{"head":{"vars":["s"]},"results":{"bindings":[{"s":{"type":"uri","value":"http://x/a"}}]}}"#
        );
    }

    #[test]
    fn literal_shapes() {
        let json = serialize_results_json(&one("o", Term::Literal(Literal::lang("chat", "fr").unwrap())));
        assert!(json.contains(r#"{"type":"literal","value":"chat","xml:lang":"fr"}"#), "{json}");
        let json = serialize_results_json(&one("o", Term::Literal(Literal::integer(5))));
        assert!(json.contains(r#""datatype":"http://www.w3.org/2001/XMLSchema#integer""#), "{json}");
        let json = serialize_results_json(&one("o", Term::Literal(Literal::string("x"))));
        assert!(!json.contains("datatype"), "{json}");
    }

    #[test]
    fn csv_forms() {
        let empty = ResultSet::Bindings {
            vars: vec![Variable::new("a"), Variable::new("b")],
            solutions: vec![],
        };
        assert_eq!(serialize_results_csv(&empty).unwrap(), "a,b\r\n");
        let csv = serialize_results_csv(&one("o", Term::Literal(Literal::string("x, y")))).unwrap();
        assert_eq!(csv, "o\r\n\"x, y\"\r\n");
        assert_eq!(serialize_results_csv(&ResultSet::Boolean(true)), Err(ResultsError::BooleanAsCsv));
    }
}
