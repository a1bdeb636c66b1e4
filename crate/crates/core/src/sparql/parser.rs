use std::collections::BTreeMap;

use crate::rdf::vocab::{rdf, xsd};
use crate::rdf::{Iri, Literal, Term};

use super::ast::*;
use super::QueryError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Var(String),
    Iri(String),
    PName(String, String),
    Blank(String),
    Str(String),
    LangTag(String),
    Integer(String),
    Decimal(String),
    Double(String),
    Word(String),
    Punct(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: usize,
}

const PUNCT: &[&str] = &[
    "^^", "&&", "||", "!=", "<=", ">=", "{", "}", "(", ")", ".", ";", ",", "*", "=", "<", ">", "!", "/", "|", "^",
    "+", "-", "[", "]",
];

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn err(&self, pos: usize, message: impl Into<String>) -> QueryError {
        syntax(self.src, pos, message)
    }

    fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                _ => break,
            }
        }
    }

    fn tokens(mut self) -> Result<Vec<Token>, QueryError> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            let pos = self.pos;
            let Some(c) = self.peek() else {
                out.push(Token { tok: Tok::Eof, pos });
                return Ok(out);
            };
            let tok = match c {
                '?' | '$' => {
                    self.bump();
                    let name = self.name_chars();
                    if name.is_empty() {
                        return Err(self.err(pos, "expected variable name"));
                    }
                    Tok::Var(name)
                }
                '<' => match self.try_iriref() {
                    Some(iri) => Tok::Iri(iri),
                    None => self.punct(pos)?,
                },
                '"' | '\'' => Tok::Str(self.string(pos)?),
                '@' => {
                    self.bump();
                    let start = self.pos;
                    while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '-') {
                        self.bump();
                    }
                    let tag = &self.src[start..self.pos];
                    if tag.is_empty() {
                        return Err(self.err(pos, "expected language tag"));
                    }
                    Tok::LangTag(tag.to_string())
                }
                '_' if self.rest().starts_with("_:") => {
                    self.pos += 2;
                    let label = self.name_chars();
                    if label.is_empty() {
                        return Err(self.err(pos, "expected blank node label"));
                    }
                    Tok::Blank(label)
                }
                c if c.is_ascii_digit() => self.number(),
                '.' if self.rest()[1..].starts_with(|c: char| c.is_ascii_digit()) => self.number(),
                ':' => {
                    self.bump();
                    Tok::PName(String::new(), self.local_name())
                }
                c if c.is_alphabetic() || c == '_' => {
                    let start = self.pos;
                    while matches!(self.peek(), Some(c) if c.is_alphanumeric() || c == '_' || c == '-' || c == '.') {
                        self.bump();
                    }
                    // a trailing dot belongs to the surrounding syntax
                    while self.src[start..self.pos].ends_with('.') {
                        self.pos -= 1;
                    }
                    let word = self.src[start..self.pos].to_string();
                    if self.peek() == Some(':') {
                        self.bump();
                        Tok::PName(word, self.local_name())
                    } else {
                        Tok::Word(word)
                    }
                }
                _ => self.punct(pos)?,
            };
            out.push(Token { tok, pos });
        }
    }

    fn name_chars(&mut self) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_alphanumeric() || c == '_') {
            self.bump();
        }
        self.src[start..self.pos].to_string()
    }

    fn local_name(&mut self) -> String {
        let mut out = String::new();
        loop {
            match self.peek() {
                Some(c) if c.is_alphanumeric() || matches!(c, '_' | '-' | ':') => {
                    out.push(c);
                    self.bump();
                }
                Some('.') if self.rest()[1..].starts_with(|c: char| c.is_alphanumeric() || c == '_' || c == '-') => {
                    out.push('.');
                    self.bump();
                }
                Some('\\') => {
                    self.bump();
                    if let Some(c) = self.bump() {
                        out.push(c);
                    }
                }
                Some('%') => {
                    let hex = self.rest().get(1..3).unwrap_or("");
                    match u8::from_str_radix(hex, 16) {
                        Ok(_) if hex.len() == 2 => {
                            out.push_str(&self.rest()[..3]);
                            self.pos += 3;
                        }
                        _ => break,
                    }
                }
                _ => break,
            }
        }
        out
    }

    fn try_iriref(&mut self) -> Option<String> {
        let rest = self.rest();
        let mut out = String::new();
        let mut chars = rest.char_indices().skip(1);
        while let Some((i, c)) = chars.next() {
            match c {
                '>' => {
                    self.pos += i + 1;
                    return Some(out);
                }
                '\\' => {
                    let (_, kind) = chars.next()?;
                    let len = match kind {
                        'u' => 4,
                        'U' => 8,
                        _ => return None,
                    };
                    let hex: String = (0..len).filter_map(|_| chars.next().map(|(_, c)| c)).collect();
                    out.push(u32::from_str_radix(&hex, 16).ok().and_then(char::from_u32)?);
                }
                c if c.is_whitespace() || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`') => return None,
                c => out.push(c),
            }
        }
        None
    }

    fn punct(&mut self, pos: usize) -> Result<Tok, QueryError> {
        for p in PUNCT {
            if self.rest().starts_with(p) {
                self.pos += p.len();
                return Ok(Tok::Punct(p));
            }
        }
        Err(self.err(pos, format!("unexpected character {:?}", self.peek().unwrap_or(' '))))
    }

    fn number(&mut self) -> Tok {
        let start = self.pos;
        let digits = |lx: &mut Self| {
            while matches!(lx.peek(), Some(c) if c.is_ascii_digit()) {
                lx.bump();
            }
        };
        digits(self);
        let mut decimal = false;
        if self.peek() == Some('.') && self.rest()[1..].starts_with(|c: char| c.is_ascii_digit()) {
            self.bump();
            digits(self);
            decimal = true;
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let save = self.pos;
            self.bump();
            if matches!(self.peek(), Some('+' | '-')) {
                self.bump();
            }
            if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                digits(self);
                return Tok::Double(self.src[start..self.pos].to_string());
            }
            self.pos = save;
        }
        let text = self.src[start..self.pos].to_string();
        if decimal {
            Tok::Decimal(text)
        } else {
            Tok::Integer(text)
        }
    }

    fn string(&mut self, pos: usize) -> Result<String, QueryError> {
        let quote = self.bump().expect("caller saw a quote");
        let long = self.rest().starts_with(&format!("{quote}{quote}"));
        if long {
            self.pos += 2;
        }
        let mut out = String::new();
        loop {
            let Some(c) = self.bump() else {
                return Err(self.err(pos, "unterminated string"));
            };
            match c {
                c if c == quote => {
                    if !long {
                        return Ok(out);
                    }
                    if self.rest().starts_with(&format!("{quote}{quote}")) {
                        self.pos += 2;
                        return Ok(out);
                    }
                    out.push(c);
                }
                '\n' | '\r' if !long => return Err(self.err(pos, "line break in string")),
                '\\' => {
                    let esc = self.pos;
                    match self.bump() {
                        Some('t') => out.push('\t'),
                        Some('n') => out.push('\n'),
                        Some('r') => out.push('\r'),
                        Some('b') => out.push('\u{8}'),
                        Some('f') => out.push('\u{c}'),
                        Some('"') => out.push('"'),
                        Some('\'') => out.push('\''),
                        Some('\\') => out.push('\\'),
                        Some(k @ ('u' | 'U')) => {
                            let len = if k == 'u' { 4 } else { 8 };
                            let hex = self.rest().get(..len).unwrap_or("");
                            let ch = u32::from_str_radix(hex, 16)
                                .ok()
                                .filter(|_| hex.len() == len)
                                .and_then(char::from_u32)
                                .ok_or_else(|| self.err(esc, "invalid unicode escape"))?;
                            self.pos += len;
                            out.push(ch);
                        }
                        _ => return Err(self.err(esc, "invalid escape sequence")),
                    }
                }
                c => out.push(c),
            }
        }
    }
}

fn location(src: &str, pos: usize) -> (usize, usize) {
    let before = &src[..pos.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().unwrap_or("").chars().count() + 1;
    (line, column)
}

fn syntax(src: &str, pos: usize, message: impl Into<String>) -> QueryError {
    let (line, column) = location(src, pos);
    QueryError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

const UNSUPPORTED: &[&str] = &[
    "UNION", "MINUS", "GRAPH", "SERVICE", "BIND", "VALUES", "GROUP", "HAVING", "CONSTRUCT", "DESCRIBE", "INSERT",
    "DELETE", "LOAD", "CLEAR", "DROP", "CREATE", "FROM", "EXISTS", "NOT", "REDUCED", "WITH", "COUNT", "SUM", "AVG",
    "MIN", "MAX", "SAMPLE", "GROUP_CONCAT", "IN", "AS",
];

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<Token>,
    idx: usize,
    prefixes: BTreeMap<String, Iri>,
    base: Option<Iri>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.idx].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.idx + n).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn pos(&self) -> usize {
        self.tokens[self.idx].pos
    }

    fn next(&mut self) -> Tok {
        let tok = self.tokens[self.idx].tok.clone();
        if self.idx + 1 < self.tokens.len() {
            self.idx += 1;
        }
        tok
    }

    fn err(&self, message: impl Into<String>) -> QueryError {
        syntax(self.src, self.pos(), message)
    }

    fn unsupported(&self, feature: impl Into<String>) -> QueryError {
        let (line, column) = location(self.src, self.pos());
        QueryError::Unsupported {
            feature: feature.into(),
            line,
            column,
        }
    }

    fn describe(tok: &Tok) -> String {
        match tok {
            Tok::Var(v) => format!("?{v}"),
            Tok::Iri(i) => format!("<{i}>"),
            Tok::PName(p, l) => format!("{p}:{l}"),
            Tok::Blank(b) => format!("_:{b}"),
            Tok::Str(s) => format!("{s:?}"),
            Tok::LangTag(t) => format!("@{t}"),
            Tok::Integer(n) | Tok::Decimal(n) | Tok::Double(n) => n.clone(),
            Tok::Word(w) => w.clone(),
            Tok::Punct(p) => format!("'{p}'"),
            Tok::Eof => "end of input".to_string(),
        }
    }

    fn is_word(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Word(w) if w.eq_ignore_ascii_case(word))
    }

    fn eat_word(&mut self, word: &str) -> bool {
        if self.is_word(word) {
            self.next();
            true
        } else {
            false
        }
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: &str) -> Result<(), QueryError> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            self.check_unsupported()?;
            Err(self.err(format!("expected '{p}', found {}", Self::describe(self.peek()))))
        }
    }

    /// Fails with an unsupported-feature error when the next token is a
    /// keyword outside the subset.
    fn check_unsupported(&self) -> Result<(), QueryError> {
        if let Tok::Word(w) = self.peek() {
            let upper = w.to_ascii_uppercase();
            if UNSUPPORTED.contains(&upper.as_str()) {
                return Err(self.unsupported(upper));
            }
        }
        Ok(())
    }

    fn resolve(&self, iri: &str) -> Result<Iri, QueryError> {
        let absolute = match (&self.base, iri.contains(':')) {
            (Some(base), false) => join_base(base.as_str(), iri),
            _ => iri.to_string(),
        };
        Iri::new(absolute).map_err(|e| self.err(e.to_string()))
    }

    fn expand(&self, prefix: &str, local: &str) -> Result<Iri, QueryError> {
        let ns = self.prefixes.get(prefix).ok_or_else(|| {
            let (line, column) = location(self.src, self.pos());
            QueryError::UndefinedPrefix {
                prefix: prefix.to_string(),
                line,
                column,
            }
        })?;
        Iri::new(format!("{}{local}", ns.as_str())).map_err(|e| self.err(e.to_string()))
    }

    fn query(mut self) -> Result<Query, QueryError> {
        loop {
            if self.eat_word("PREFIX") {
                let Tok::PName(prefix, local) = self.next() else {
                    return Err(self.err("expected prefix name"));
                };
                if !local.is_empty() {
                    return Err(self.err("prefix declaration must end with ':'"));
                }
                let Tok::Iri(iri) = self.next() else {
                    return Err(self.err("expected IRI after prefix name"));
                };
                let iri = self.resolve(&iri)?;
                self.prefixes.insert(prefix, iri);
            } else if self.eat_word("BASE") {
                let Tok::Iri(iri) = self.next() else {
                    return Err(self.err("expected IRI after BASE"));
                };
                self.base = Some(self.resolve(&iri)?);
            } else {
                break;
            }
        }

        let form = if self.eat_word("SELECT") {
            let distinct = self.eat_word("DISTINCT");
            let projection = if self.eat_punct("*") {
                Projection::All
            } else {
                let mut vars = Vec::new();
                loop {
                    match self.peek().clone() {
                        Tok::Var(v) => {
                            self.next();
                            vars.push(Variable::new(v));
                        }
                        Tok::Punct("(") => return Err(self.unsupported("projection expression")),
                        _ => break,
                    }
                }
                if vars.is_empty() {
                    self.check_unsupported()?;
                    return Err(self.err("expected '*' or variables after SELECT"));
                }
                Projection::Variables(vars)
            };
            QueryForm::Select { distinct, projection }
        } else if self.eat_word("ASK") {
            QueryForm::Ask
        } else {
            self.check_unsupported()?;
            return Err(self.err(format!("expected SELECT or ASK, found {}", Self::describe(self.peek()))));
        };

        self.check_unsupported()?;
        self.eat_word("WHERE");
        let pattern = self.group()?;

        let mut order_by = Vec::new();
        self.check_unsupported()?;
        if self.eat_word("ORDER") {
            if !self.eat_word("BY") {
                return Err(self.err("expected BY after ORDER"));
            }
            loop {
                let descending = if self.is_word("ASC") || self.is_word("DESC") {
                    let desc = self.is_word("DESC");
                    self.next();
                    self.expect_punct("(")?;
                    let e = self.expression()?;
                    self.expect_punct(")")?;
                    order_by.push(OrderCondition {
                        expression: e,
                        descending: desc,
                    });
                    continue;
                } else {
                    false
                };
                let expression = match self.peek() {
                    Tok::Var(_) => self.primary()?,
                    Tok::Punct("(") => self.primary()?,
                    Tok::Word(_) if matches!(self.peek_at(1), Tok::Punct("(")) => self.primary()?,
                    _ => break,
                };
                order_by.push(OrderCondition { expression, descending });
            }
            if order_by.is_empty() {
                return Err(self.err("expected ordering condition"));
            }
        }

        let mut limit = None;
        let mut offset = None;
        for _ in 0..2 {
            if self.eat_word("LIMIT") {
                limit = Some(self.count()?);
            } else if self.eat_word("OFFSET") {
                offset = Some(self.count()?);
            }
        }
        self.check_unsupported()?;
        if *self.peek() != Tok::Eof {
            return Err(self.err(format!("unexpected {}", Self::describe(self.peek()))));
        }
        Ok(Query {
            prefixes: self.prefixes,
            form,
            pattern,
            order_by,
            limit,
            offset,
        })
    }

    fn count(&mut self) -> Result<usize, QueryError> {
        match self.next() {
            Tok::Integer(n) => n.parse().map_err(|_| self.err("integer out of range")),
            other => Err(self.err(format!("expected non-negative integer, found {}", Self::describe(&other)))),
        }
    }

    fn group(&mut self) -> Result<GroupPattern, QueryError> {
        self.expect_punct("{")?;
        let mut elements = Vec::new();
        loop {
            self.check_unsupported()?;
            if self.eat_punct("}") {
                break;
            }
            if self.eat_word("FILTER") {
                let expr = if self.is_punct("(") {
                    self.bracketted()?
                } else {
                    self.check_unsupported()?;
                    self.call()?
                };
                elements.push(GroupElement::Filter(expr));
            } else if self.eat_word("OPTIONAL") {
                elements.push(GroupElement::Optional(self.group()?));
            } else if self.is_punct("{") {
                if matches!(self.peek_at(1), Tok::Word(w) if w.eq_ignore_ascii_case("SELECT")) {
                    self.next();
                    return Err(self.unsupported("subquery"));
                }
                let inner = self.group()?;
                self.check_unsupported()?;
                elements.push(GroupElement::Group(inner));
            } else if *self.peek() == Tok::Eof {
                return Err(self.err("unterminated group, expected '}'"));
            } else {
                self.triples_block(&mut elements)?;
                if !self.eat_punct(".") && !self.is_punct("}") {
                    self.check_unsupported()?;
                    if !matches!(self.peek(), Tok::Word(w) if w.eq_ignore_ascii_case("FILTER") || w.eq_ignore_ascii_case("OPTIONAL"))
                        && !self.is_punct("{")
                    {
                        return Err(self.err(format!("expected '.' or '}}', found {}", Self::describe(self.peek()))));
                    }
                }
            }
            self.eat_punct(".");
        }
        Ok(GroupPattern { elements })
    }

    fn triples_block(&mut self, out: &mut Vec<GroupElement>) -> Result<(), QueryError> {
        if self.is_punct("[") || self.is_punct("(") {
            return Err(self.unsupported("blank node property list or collection"));
        }
        let subject = self.term_pattern(false)?;
        if let TermPattern::Term(t) = &subject {
            if t.is_literal() {
                return Err(self.err("literal in subject position"));
            }
        }
        loop {
            let predicate = if self.eat_word("a") {
                TermPattern::Term(Term::Iri(rdf::type_()))
            } else {
                match self.peek() {
                    Tok::Var(_) | Tok::Iri(_) | Tok::PName(..) => self.term_pattern(false)?,
                    Tok::Punct("^") => return Err(self.unsupported("property path")),
                    _ => {
                        self.check_unsupported()?;
                        return Err(self.err(format!("expected predicate, found {}", Self::describe(self.peek()))));
                    }
                }
            };
            if matches!(self.peek(), Tok::Punct("/" | "|" | "^" | "*" | "+")) {
                return Err(self.unsupported("property path"));
            }
            loop {
                let object = self.term_pattern(true)?;
                out.push(GroupElement::Triple(TriplePattern {
                    subject: subject.clone(),
                    predicate: predicate.clone(),
                    object,
                }));
                if !self.eat_punct(",") {
                    break;
                }
            }
            if !self.eat_punct(";") {
                return Ok(());
            }
            while self.eat_punct(";") {}
            if self.is_punct(".") || self.is_punct("}") {
                return Ok(());
            }
        }
    }

    fn term_pattern(&mut self, allow_literal: bool) -> Result<TermPattern, QueryError> {
        match self.peek().clone() {
            Tok::Var(v) => {
                self.next();
                Ok(TermPattern::Variable(Variable::new(v)))
            }
            Tok::Blank(label) => {
                self.next();
                Ok(TermPattern::Variable(Variable::hidden(&label)))
            }
            Tok::Punct("[") => Err(self.unsupported("blank node property list")),
            Tok::Punct("(") => Err(self.unsupported("collection")),
            _ => {
                let term = self.constant()?;
                if term.is_literal() && !allow_literal {
                    return Err(self.err("literal not allowed here"));
                }
                Ok(TermPattern::Term(term))
            }
        }
    }

    /// An IRI, prefixed name or literal.
    fn constant(&mut self) -> Result<Term, QueryError> {
        let sign = match self.peek() {
            Tok::Punct(p @ ("-" | "+")) => {
                let sign = if *p == "-" { "-" } else { "" };
                if !matches!(self.peek_at(1), Tok::Integer(_) | Tok::Decimal(_) | Tok::Double(_)) {
                    return Err(self.err("expected number after sign"));
                }
                self.next();
                sign
            }
            _ => "",
        };
        let term = match self.peek().clone() {
            Tok::Iri(iri) => Term::Iri(self.resolve(&iri)?),
            Tok::PName(p, l) => Term::Iri(self.expand(&p, &l)?),
            Tok::Integer(n) => Term::Literal(Literal::typed(format!("{sign}{n}"), xsd::integer())),
            Tok::Decimal(n) => Term::Literal(Literal::typed(format!("{sign}{n}"), xsd::decimal())),
            Tok::Double(n) => Term::Literal(Literal::typed(format!("{sign}{n}"), xsd::double())),
            Tok::Word(w) if w == "true" || w == "false" => Term::Literal(Literal::typed(w, xsd::boolean())),
            Tok::Str(s) => {
                self.next();
                return self.literal_suffix(s);
            }
            other => {
                self.check_unsupported()?;
                return Err(self.err(format!("expected term, found {}", Self::describe(&other))));
            }
        };
        self.next();
        Ok(term)
    }

    fn literal_suffix(&mut self, lexical: String) -> Result<Term, QueryError> {
        match self.peek().clone() {
            Tok::LangTag(tag) => {
                let lit = Literal::lang(lexical, tag).map_err(|e| self.err(e.to_string()))?;
                self.next();
                Ok(Term::Literal(lit))
            }
            Tok::Punct("^^") => {
                self.next();
                let datatype = match self.peek().clone() {
                    Tok::Iri(iri) => self.resolve(&iri)?,
                    Tok::PName(p, l) => self.expand(&p, &l)?,
                    _ => return Err(self.err("expected datatype IRI after '^^'")),
                };
                self.next();
                Ok(Term::Literal(Literal::typed(lexical, datatype)))
            }
            _ => Ok(Term::Literal(Literal::string(lexical))),
        }
    }

    fn bracketted(&mut self) -> Result<Expression, QueryError> {
        self.expect_punct("(")?;
        let e = self.expression()?;
        self.expect_punct(")")?;
        Ok(e)
    }

    fn expression(&mut self) -> Result<Expression, QueryError> {
        let mut left = self.and_expr()?;
        while self.eat_punct("||") {
            let right = self.and_expr()?;
            left = Expression::Or(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn and_expr(&mut self) -> Result<Expression, QueryError> {
        let mut left = self.relational()?;
        while self.eat_punct("&&") {
            let right = self.relational()?;
            left = Expression::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn relational(&mut self) -> Result<Expression, QueryError> {
        let left = self.unary()?;
        let op = match self.peek() {
            Tok::Punct("=") => CompareOp::Eq,
            Tok::Punct("!=") => CompareOp::Ne,
            Tok::Punct("<") => CompareOp::Lt,
            Tok::Punct(">") => CompareOp::Gt,
            Tok::Punct("<=") => CompareOp::Le,
            Tok::Punct(">=") => CompareOp::Ge,
            Tok::Word(w) if w.eq_ignore_ascii_case("IN") || w.eq_ignore_ascii_case("NOT") => {
                return Err(self.unsupported(w.to_ascii_uppercase()))
            }
            Tok::Punct("*" | "/") => return Err(self.unsupported("arithmetic")),
            Tok::Punct("+" | "-") => return Err(self.unsupported("arithmetic")),
            _ => return Ok(left),
        };
        self.next();
        let right = self.unary()?;
        Ok(Expression::Compare(op, Box::new(left), Box::new(right)))
    }

    fn unary(&mut self) -> Result<Expression, QueryError> {
        if self.eat_punct("!") {
            return Ok(Expression::Not(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expression, QueryError> {
        match self.peek().clone() {
            Tok::Punct("(") => self.bracketted(),
            Tok::Var(v) => {
                self.next();
                Ok(Expression::Variable(Variable::new(v)))
            }
            Tok::Word(w) if w != "true" && w != "false" => self.call(),
            _ => Ok(Expression::Constant(self.constant()?)),
        }
    }

    fn call(&mut self) -> Result<Expression, QueryError> {
        let Tok::Word(name) = self.peek().clone() else {
            return Err(self.err(format!("expected expression, found {}", Self::describe(self.peek()))));
        };
        let upper = name.to_ascii_uppercase();
        if !matches!(upper.as_str(), "REGEX" | "STR" | "LANG" | "DATATYPE" | "BOUND") {
            return if matches!(self.peek_at(1), Tok::Punct("(")) || UNSUPPORTED.contains(&upper.as_str()) {
                Err(self.unsupported(upper))
            } else {
                Err(self.err(format!("expected expression, found {name}")))
            };
        }
        self.next();
        self.expect_punct("(")?;
        let e = match upper.as_str() {
            "BOUND" => match self.next() {
                Tok::Var(v) => Expression::Bound(Variable::new(v)),
                _ => return Err(self.err("BOUND expects a variable")),
            },
            "REGEX" => {
                let text = self.expression()?;
                self.expect_punct(",")?;
                let pattern = self.expression()?;
                let flags = if self.eat_punct(",") {
                    Some(Box::new(self.expression()?))
                } else {
                    None
                };
                Expression::Regex(Box::new(text), Box::new(pattern), flags)
            }
            _ => {
                let arg = Box::new(self.expression()?);
                match upper.as_str() {
                    "STR" => Expression::Str(arg),
                    "LANG" => Expression::Lang(arg),
                    _ => Expression::Datatype(arg),
                }
            }
        };
        self.expect_punct(")")?;
        Ok(e)
    }
}

fn join_base(base: &str, relative: &str) -> String {
    if relative.is_empty() {
        return base.to_string();
    }
    if relative.starts_with('#') {
        let stem = base.split('#').next().unwrap_or(base);
        return format!("{stem}{relative}");
    }
    match base.rfind('/') {
        Some(i) => format!("{}{relative}", &base[..=i]),
        None => format!("{base}{relative}"),
    }
}

/// Parses a query in the supported SPARQL subset.
pub fn parse_query(text: &str) -> Result<Query, QueryError> {
    let tokens = Lexer { src: text, pos: 0 }.tokens()?;
    Parser {
        src: text,
        tokens,
        idx: 0,
        prefixes: BTreeMap::new(),
        base: None,
    }
    .query()
}
