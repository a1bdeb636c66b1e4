//! Line-oriented N-Triples reader and writer.

use super::lexer::Cursor;
use super::{BlankNode, Graph, Iri, Literal, RdfError, Term, Triple};

/// Parses an N-Triples document; errors carry the 1-based line number.
pub fn parse_ntriples(text: &str) -> Result<Graph, RdfError> {
    let mut graph = Graph::new();
    for (idx, line) in text.lines().enumerate() {
        if let Some(triple) = parse_line(line, idx + 1)? {
            graph.insert(triple);
        }
    }
    Ok(graph)
}

fn parse_line(line: &str, number: usize) -> Result<Option<Triple>, RdfError> {
    let mut cur = Cursor::with_line(line, number);
    cur.skip_ws();
    if cur.is_eof() {
        return Ok(None);
    }
    let subject = match cur.peek() {
        Some('<') => Term::Iri(iri(&mut cur)?),
        Some('_') => blank(&mut cur)?,
        _ => return Err(cur.error("expected subject IRI or blank node")),
    };
    cur.skip_ws();
    if cur.peek() != Some('<') {
        return Err(cur.error("expected predicate IRI"));
    }
    let predicate = iri(&mut cur)?;
    cur.skip_ws();
    let object = match cur.peek() {
        Some('<') => Term::Iri(iri(&mut cur)?),
        Some('_') => blank(&mut cur)?,
        Some('"') => {
            let lexical = cur.string(false)?;
            if cur.peek() == Some('@') {
                let tag = cur.langtag()?;
                Term::Literal(Literal::lang(lexical, tag).map_err(|e| cur.error(e.to_string()))?)
            } else if cur.starts_with("^^") {
                cur.advance(2);
                Term::Literal(Literal::typed(lexical, iri(&mut cur)?))
            } else {
                Term::Literal(Literal::string(lexical))
            }
        }
        _ => return Err(cur.error("expected object")),
    };
    cur.skip_ws();
    if !cur.eat('.') {
        return Err(cur.error("expected '.' at end of statement"));
    }
    cur.skip_ws();
    if !cur.is_eof() {
        return Err(cur.error("unexpected content after statement"));
    }
    Triple::new(subject, predicate, object).map(Some)
}

fn iri(cur: &mut Cursor<'_>) -> Result<Iri, RdfError> {
    let start = cur.pos();
    let raw = cur.iriref()?;
    Iri::new(raw).map_err(|e| cur.error_at(start, e.to_string()))
}

fn blank(cur: &mut Cursor<'_>) -> Result<Term, RdfError> {
    let start = cur.pos();
    let label = cur.blank_label()?;
    BlankNode::new(label)
        .map(Term::BlankNode)
        .map_err(|e| cur.error_at(start, e.to_string()))
}

/// One statement per line in (subject, predicate, object) order.
pub fn serialize_ntriples(graph: &Graph) -> String {
    let mut out = String::new();
    for triple in graph {
        out.push_str(&triple.to_string());
        out.push('\n');
    }
    out
}
