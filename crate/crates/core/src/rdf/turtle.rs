//! Turtle reader and writer.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use regex::Regex;

use super::lexer::Cursor;
use super::term::escape_string;
use super::vocab::{rdf, xsd};
use super::{BlankNode, Graph, Iri, Literal, RdfError, Term, Triple};

/// Parses a Turtle document.
pub fn parse_turtle(text: &str) -> Result<Graph, RdfError> {
    TurtleParser::new(text).parse()
}

struct TurtleParser<'a> {
    cur: Cursor<'a>,
    prefixes: BTreeMap<String, Iri>,
    base: Option<String>,
    graph: Graph,
    reserved_labels: HashSet<String>,
    next_anon: usize,
}

impl<'a> TurtleParser<'a> {
    fn new(text: &'a str) -> Self {
        // Labels written explicitly anywhere in the document; generated
        // labels for `[]` and collections must avoid all of them.
        let re = Regex::new(r"_:([A-Za-z0-9_]+)").expect("static regex");
        let reserved_labels = re.captures_iter(text).map(|c| c[1].to_string()).collect();
        TurtleParser {
            cur: Cursor::new(text),
            prefixes: BTreeMap::new(),
            base: None,
            graph: Graph::new(),
            reserved_labels,
            next_anon: 0,
        }
    }

    fn parse(mut self) -> Result<Graph, RdfError> {
        loop {
            self.cur.skip_ws();
            if self.cur.is_eof() {
                break;
            }
            self.statement()?;
        }
        for (prefix, ns) in std::mem::take(&mut self.prefixes) {
            self.graph.bind_prefix(prefix, ns);
        }
        Ok(self.graph)
    }

    fn keyword(&self, word: &str) -> bool {
        let rest = self.cur.rest();
        rest.len() >= word.len()
            && rest[..word.len()].eq_ignore_ascii_case(word)
            && rest[word.len()..]
                .chars()
                .next()
                .map_or(true, |c| c.is_whitespace() || c == '<' || c == '#')
    }

    fn statement(&mut self) -> Result<(), RdfError> {
        if self.cur.starts_with("@prefix") {
            self.cur.advance("@prefix".len());
            self.prefix_decl()?;
            self.cur.skip_ws();
            return self.cur.expect('.');
        }
        if self.cur.starts_with("@base") {
            self.cur.advance("@base".len());
            self.base_decl()?;
            self.cur.skip_ws();
            return self.cur.expect('.');
        }
        if self.keyword("PREFIX") {
            self.cur.advance("PREFIX".len());
            return self.prefix_decl();
        }
        if self.keyword("BASE") {
            self.cur.advance("BASE".len());
            return self.base_decl();
        }
        self.triples()?;
        self.cur.skip_ws();
        self.cur.expect('.')
    }

    fn prefix_decl(&mut self) -> Result<(), RdfError> {
        self.cur.skip_ws();
        let start = self.cur.pos();
        let len = self.cur.rest().find(':').ok_or_else(|| self.cur.error("expected prefix name"))?;
        let name = &self.cur.rest()[..len];
        if !(name.is_empty() || is_pn_prefix(name)) {
            return Err(self.cur.error_at(start, format!("invalid prefix name {name:?}")));
        }
        let name = name.to_string();
        self.cur.advance(len + 1);
        self.cur.skip_ws();
        let iri = self.iri_ref()?;
        self.prefixes.insert(name, iri);
        Ok(())
    }

    fn base_decl(&mut self) -> Result<(), RdfError> {
        self.cur.skip_ws();
        let iri = self.iri_ref()?;
        self.base = Some(iri.into_string());
        Ok(())
    }

    fn iri_ref(&mut self) -> Result<Iri, RdfError> {
        let start = self.cur.pos();
        let raw = self.cur.iriref()?;
        let resolved = self.resolve(&raw).map_err(|m| self.cur.error_at(start, m))?;
        Iri::new(resolved).map_err(|e| self.cur.error_at(start, e.to_string()))
    }

    fn resolve(&self, raw: &str) -> Result<String, String> {
        if has_scheme(raw) {
            return Ok(raw.to_string());
        }
        let base = self.base.as_deref().ok_or_else(|| format!("relative IRI {raw:?} without @base"))?;
        Ok(if raw.is_empty() {
            base.to_string()
        } else if raw.starts_with('#') {
            format!("{}{raw}", base.split('#').next().unwrap_or(base))
        } else if raw.starts_with("//") {
            let scheme = &base[..base.find(':').unwrap_or(0)];
            format!("{scheme}:{raw}")
        } else if raw.starts_with('/') {
            let after_scheme = base.find("://").map(|i| i + 3).unwrap_or(0);
            let authority_end = base[after_scheme..].find('/').map_or(base.len(), |i| after_scheme + i);
            format!("{}{raw}", &base[..authority_end])
        } else {
            let dir_end = base.rfind('/').map_or(base.len(), |i| i + 1);
            format!("{}{raw}", &base[..dir_end])
        })
    }

    fn fresh_blank(&mut self) -> BlankNode {
        loop {
            let label = format!("anon{}", self.next_anon);
            self.next_anon += 1;
            if !self.reserved_labels.contains(&label) {
                return BlankNode::new(label).expect("generated label is valid");
            }
        }
    }

    fn triples(&mut self) -> Result<(), RdfError> {
        if self.cur.peek() == Some('[') {
            let subject = self.blank_property_list()?;
            self.cur.skip_ws();
            if self.cur.peek() != Some('.') {
                self.predicate_object_list(&subject)?;
            }
            return Ok(());
        }
        let subject = self.subject()?;
        self.cur.skip_ws();
        self.predicate_object_list(&subject)
    }

    fn subject(&mut self) -> Result<Term, RdfError> {
        match self.cur.peek() {
            Some('<') => Ok(Term::Iri(self.iri_ref()?)),
            Some('_') if self.cur.starts_with("_:") => self.blank(),
            Some('(') => self.collection(),
            Some('"' | '\'') => Err(self.cur.error("literal cannot be a subject")),
            Some(_) => Ok(Term::Iri(self.prefixed_name()?)),
            None => Err(self.cur.error("expected subject, found end of input")),
        }
    }

    fn blank(&mut self) -> Result<Term, RdfError> {
        let start = self.cur.pos();
        let label = self.cur.blank_label()?;
        // Turtle allows '.' and '-' inside labels; this model does not.
        if matches!(self.cur.peek(), Some('-')) || (self.cur.peek() == Some('.') && self.cur.peek_nth(1).is_some_and(|c| c.is_ascii_alphanumeric())) {
            return Err(self.cur.error_at(start, "blank node labels are limited to [A-Za-z0-9_]"));
        }
        Ok(Term::BlankNode(BlankNode::new(label).map_err(|e| self.cur.error_at(start, e.to_string()))?))
    }

    fn predicate_object_list(&mut self, subject: &Term) -> Result<(), RdfError> {
        loop {
            let predicate = self.verb()?;
            self.cur.skip_ws();
            self.object_list(subject, &predicate)?;
            self.cur.skip_ws();
            if !self.cur.eat(';') {
                return Ok(());
            }
            loop {
                self.cur.skip_ws();
                if !self.cur.eat(';') {
                    break;
                }
            }
            // A trailing ';' may directly precede the terminator.
            if matches!(self.cur.peek(), Some('.' | ']') | None) {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> Result<Iri, RdfError> {
        if self.cur.peek() == Some('a')
            && self.cur.peek_nth(1).map_or(true, |c| c.is_whitespace() || matches!(c, '<' | '"' | '\'' | '[' | '(' | '_'))
        {
            self.cur.bump();
            return Ok(rdf::type_());
        }
        match self.cur.peek() {
            Some('<') => self.iri_ref(),
            Some(_) => self.prefixed_name(),
            None => Err(self.cur.error("expected predicate, found end of input")),
        }
    }

    fn object_list(&mut self, subject: &Term, predicate: &Iri) -> Result<(), RdfError> {
        loop {
            let object = self.object()?;
            let triple = Triple::new(subject.clone(), predicate.clone(), object).map_err(|e| self.cur.error(e.to_string()))?;
            self.graph.insert(triple);
            self.cur.skip_ws();
            if !self.cur.eat(',') {
                return Ok(());
            }
            self.cur.skip_ws();
        }
    }

    fn object(&mut self) -> Result<Term, RdfError> {
        match self.cur.peek() {
            Some('<') => Ok(Term::Iri(self.iri_ref()?)),
            Some('_') if self.cur.starts_with("_:") => self.blank(),
            Some('[') => self.blank_property_list(),
            Some('(') => self.collection(),
            Some('"' | '\'') => self.literal(),
            Some('.') if !self.cur.peek_nth(1).is_some_and(|c| c.is_ascii_digit()) => Err(self.cur.error("expected object")),
            Some(c) if c.is_ascii_digit() || matches!(c, '+' | '-' | '.') => self.numeric(),
            Some(_) if self.boolean_keyword().is_some() => {
                let value = self.boolean_keyword().expect("checked");
                self.cur.advance(if value { 4 } else { 5 });
                Ok(Term::Literal(Literal::boolean(value)))
            }
            Some('.' | ';' | ',' | ']') | None => Err(self.cur.error("expected object")),
            Some(_) => Ok(Term::Iri(self.prefixed_name()?)),
        }
    }

    fn boolean_keyword(&self) -> Option<bool> {
        let rest = self.cur.rest();
        let ends = |n: usize| rest[n..].chars().next().map_or(true, |c| !(is_pn_char(c) || c == ':'));
        if rest.starts_with("true") && ends(4) {
            Some(true)
        } else if rest.starts_with("false") && ends(5) {
            Some(false)
        } else {
            None
        }
    }

    fn blank_property_list(&mut self) -> Result<Term, RdfError> {
        self.cur.expect('[')?;
        let node = Term::BlankNode(self.fresh_blank());
        self.cur.skip_ws();
        if !self.cur.eat(']') {
            self.predicate_object_list(&node)?;
            self.cur.skip_ws();
            self.cur.expect(']')?;
        }
        Ok(node)
    }

    fn collection(&mut self) -> Result<Term, RdfError> {
        self.cur.expect('(')?;
        let mut items = Vec::new();
        loop {
            self.cur.skip_ws();
            if self.cur.eat(')') {
                break;
            }
            items.push(self.object()?);
        }
        let mut head = Term::Iri(rdf::nil());
        for item in items.into_iter().rev() {
            let node = Term::BlankNode(self.fresh_blank());
            self.graph.insert(Triple::new(node.clone(), rdf::first(), item).expect("blank subject"));
            self.graph.insert(Triple::new(node.clone(), rdf::rest(), head).expect("blank subject"));
            head = node;
        }
        Ok(head)
    }

    fn literal(&mut self) -> Result<Term, RdfError> {
        let lexical = self.cur.string(true)?;
        if self.cur.peek() == Some('@') {
            let tag = self.cur.langtag()?;
            return Ok(Term::Literal(Literal::lang(lexical, tag).map_err(|e| self.cur.error(e.to_string()))?));
        }
        if self.cur.starts_with("^^") {
            self.cur.advance(2);
            let datatype = if self.cur.peek() == Some('<') {
                self.iri_ref()?
            } else {
                self.prefixed_name()?
            };
            return Ok(Term::Literal(Literal::typed(lexical, datatype)));
        }
        Ok(Term::Literal(Literal::string(lexical)))
    }

    fn numeric(&mut self) -> Result<Term, RdfError> {
        let start = self.cur.pos();
        let rest = self.cur.rest();
        let bytes = rest.as_bytes();
        let mut i = 0;
        if matches!(bytes.first(), Some(b'+' | b'-')) {
            i += 1;
        }
        let int_start = i;
        while bytes.get(i).is_some_and(u8::is_ascii_digit) {
            i += 1;
        }
        let int_digits = i - int_start;
        let mut datatype = xsd::INTEGER;
        if bytes.get(i) == Some(&b'.') && bytes.get(i + 1).is_some_and(u8::is_ascii_digit) {
            i += 1;
            while bytes.get(i).is_some_and(u8::is_ascii_digit) {
                i += 1;
            }
            datatype = xsd::DECIMAL;
        } else if int_digits == 0 {
            return Err(self.cur.error_at(start, "malformed number"));
        }
        if matches!(bytes.get(i), Some(b'e' | b'E')) {
            let mut j = i + 1;
            if matches!(bytes.get(j), Some(b'+' | b'-')) {
                j += 1;
            }
            let exp_start = j;
            while bytes.get(j).is_some_and(u8::is_ascii_digit) {
                j += 1;
            }
            if j == exp_start {
                return Err(self.cur.error_at(start, "malformed exponent"));
            }
            i = j;
            datatype = xsd::DOUBLE;
        }
        let lexical = rest[..i].to_string();
        self.cur.advance(i);
        Ok(Term::Literal(Literal::typed(lexical, Iri::new(datatype).expect("xsd IRI"))))
    }

    fn prefixed_name(&mut self) -> Result<Iri, RdfError> {
        let start = self.cur.pos();
        let rest = self.cur.rest();
        let colon = rest
            .find(|c: char| !(is_pn_char(c) || c == '.'))
            .filter(|&i| rest[i..].starts_with(':'))
            .ok_or_else(|| {
                let found: String = rest.chars().take(12).collect();
                self.cur.error_at(start, format!("unexpected token {found:?}"))
            })?;
        let prefix = &rest[..colon];
        if !(prefix.is_empty() || is_pn_prefix(prefix)) {
            return Err(self.cur.error_at(start, format!("invalid prefix {prefix:?}")));
        }
        let namespace = self.prefixes.get(prefix).cloned().ok_or_else(|| {
            let (line, column) = self.cur.location(start);
            RdfError::UndefinedPrefix {
                prefix: prefix.to_string(),
                line,
                column,
            }
        })?;
        self.cur.advance(colon + 1);
        let local = self.local_name()?;
        Iri::new(format!("{}{}", namespace.as_str(), local)).map_err(|e| self.cur.error_at(start, e.to_string()))
    }

    fn local_name(&mut self) -> Result<String, RdfError> {
        let mut out = String::new();
        let mut raw_len = 0;
        let mut last_raw_dot_run = 0;
        let rest = self.cur.rest();
        let mut chars = rest.char_indices().peekable();
        while let Some(&(i, c)) = chars.peek() {
            if c == '\\' {
                let next = rest[i + 1..].chars().next();
                match next {
                    Some(e) if "_~.-!$&'()*+,;=/?#@%".contains(e) => {
                        out.push(e);
                        chars.next();
                        chars.next();
                        raw_len = i + 1 + e.len_utf8();
                        last_raw_dot_run = 0;
                        continue;
                    }
                    _ => return Err(self.cur.error_at(self.cur.pos() + i, "invalid local name escape")),
                }
            }
            if c == '%' {
                let hex = rest.get(i + 1..i + 3).unwrap_or("");
                if hex.len() == 2 && hex.chars().all(|h| h.is_ascii_hexdigit()) {
                    out.push('%');
                    out.push_str(hex);
                    chars.next();
                    chars.next();
                    chars.next();
                    raw_len = i + 3;
                    last_raw_dot_run = 0;
                    continue;
                }
                return Err(self.cur.error_at(self.cur.pos() + i, "invalid percent escape"));
            }
            if is_pn_char(c) || c == ':' || (c == '.' && !out.is_empty()) {
                out.push(c);
                chars.next();
                raw_len = i + c.len_utf8();
                last_raw_dot_run = if c == '.' { last_raw_dot_run + 1 } else { 0 };
                continue;
            }
            break;
        }
        // Trailing dots belong to the statement terminator.
        out.truncate(out.len() - last_raw_dot_run);
        self.cur.advance(raw_len - last_raw_dot_run);
        Ok(out)
    }
}

fn has_scheme(raw: &str) -> bool {
    match raw.find(':') {
        Some(i) if i > 0 => {
            let scheme = &raw[..i];
            scheme.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && scheme.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
        }
        _ => false,
    }
}

fn is_pn_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-' || c == '\u{B7}'
}

fn is_pn_prefix(name: &str) -> bool {
    name.chars().next().is_some_and(char::is_alphabetic)
        && !name.ends_with('.')
        && name.chars().all(|c| is_pn_char(c) || c == '.')
}

fn is_simple_local(local: &str) -> bool {
    let mut chars = local.chars();
    match chars.next() {
        None => true,
        Some(c) if c.is_ascii_alphanumeric() || c == '_' => chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-'),
        Some(_) => false,
    }
}

/// Writes a term, abbreviating IRIs with the longest matching prefix.
pub(crate) struct Abbreviator<'g> {
    prefixes: Vec<(&'g str, &'g str)>,
}

impl<'g> Abbreviator<'g> {
    pub fn new(prefixes: &'g BTreeMap<String, Iri>) -> Self {
        let mut prefixes: Vec<(&str, &str)> = prefixes
            .iter()
            .filter(|(p, _)| p.is_empty() || is_pn_prefix(p))
            .map(|(p, ns)| (p.as_str(), ns.as_str()))
            .collect();
        prefixes.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(b.0)));
        Abbreviator { prefixes }
    }

    pub fn iri(&self, iri: &Iri) -> String {
        for (prefix, ns) in &self.prefixes {
            if let Some(local) = iri.as_str().strip_prefix(ns) {
                if is_simple_local(local) {
                    return format!("{prefix}:{local}");
                }
            }
        }
        iri.to_string()
    }

    pub fn term(&self, term: &Term) -> String {
        match term {
            Term::Iri(iri) => self.iri(iri),
            Term::BlankNode(b) => b.to_string(),
            Term::Literal(lit) => {
                let quoted = format!("\"{}\"", escape_string(lit.lexical()));
                if let Some(lang) = lit.language() {
                    format!("{quoted}@{lang}")
                } else if lit.is_plain() {
                    quoted
                } else {
                    format!("{quoted}^^{}", self.iri(lit.datatype()))
                }
            }
        }
    }
}

/// Serializes a graph as Turtle with deterministic statement order.
pub fn serialize_turtle(graph: &Graph) -> String {
    let mut out = String::new();
    for (prefix, ns) in graph.prefixes() {
        let _ = writeln!(out, "@prefix {prefix}: {ns} .");
    }
    if !graph.prefixes().is_empty() && !graph.is_empty() {
        out.push('\n');
    }
    let abbrev = Abbreviator::new(graph.prefixes());
    let rdf_type = rdf::type_();
    let mut triples = graph.iter().peekable();
    while let Some(first) = triples.next() {
        let subject = first.subject();
        let _ = write!(out, "{}", abbrev.term(subject));
        let mut current = first;
        let mut first_pred = true;
        loop {
            let predicate = current.predicate();
            let verb = if *predicate == rdf_type { "a".to_string() } else { abbrev.iri(predicate) };
            if first_pred {
                let _ = write!(out, " {verb} {}", abbrev.term(current.object()));
            } else {
                let _ = write!(out, " ;\n    {verb} {}", abbrev.term(current.object()));
            }
            first_pred = false;
            while let Some(next) = triples.next_if(|t| t.subject() == subject && t.predicate() == predicate) {
                let _ = write!(out, ", {}", abbrev.term(next.object()));
            }
            match triples.next_if(|t| t.subject() == subject) {
                Some(next) => current = next,
                None => break,
            }
        }
        out.push_str(" .\n");
    }
    out
}
