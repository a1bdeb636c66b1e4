use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::time::Instant;

use regex::{Regex, RegexBuilder};

use crate::rdf::vocab::xsd;
use crate::rdf::{Graph, Iri, Literal, Term, Triple};

use super::ast::*;
use super::EvalError;

/// One row of variable bindings.
pub type Solution = BTreeMap<Variable, Term>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResultSet {
    Bindings { vars: Vec<Variable>, solutions: Vec<Solution> },
    Boolean(bool),
}

impl ResultSet {
    pub fn len(&self) -> usize {
        match self {
            ResultSet::Bindings { solutions, .. } => solutions.len(),
            ResultSet::Boolean(_) => 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Positional lookup tables built once per evaluation.
struct Index<'g> {
    triples: Vec<&'g Triple>,
    by_subject: HashMap<&'g Term, Vec<usize>>,
    by_predicate: HashMap<&'g Iri, Vec<usize>>,
    by_object: HashMap<&'g Term, Vec<usize>>,
}

impl<'g> Index<'g> {
    fn new(graph: &'g Graph) -> Self {
        let triples: Vec<&Triple> = graph.iter().collect();
        let mut by_subject: HashMap<&Term, Vec<usize>> = HashMap::new();
        let mut by_predicate: HashMap<&Iri, Vec<usize>> = HashMap::new();
        let mut by_object: HashMap<&Term, Vec<usize>> = HashMap::new();
        for (i, t) in triples.iter().enumerate() {
            by_subject.entry(t.subject()).or_default().push(i);
            by_predicate.entry(t.predicate()).or_default().push(i);
            by_object.entry(t.object()).or_default().push(i);
        }
        Index {
            triples,
            by_subject,
            by_predicate,
            by_object,
        }
    }

    /// Smallest candidate list given the bound positions, or None to scan all.
    fn candidates(&self, s: Option<&Term>, p: Option<&Term>, o: Option<&Term>) -> Option<&[usize]> {
        const EMPTY: &[usize] = &[];
        let lists = [
            s.map(|s| self.by_subject.get(s)),
            p.map(|p| p.as_iri().and_then(|iri| self.by_predicate.get(iri))),
            o.map(|o| self.by_object.get(o)),
        ];
        lists
            .into_iter()
            .flatten()
            .map(|list| list.map(Vec::as_slice).unwrap_or(EMPTY))
            .min_by_key(|list| list.len())
    }
}

struct Evaluator<'g> {
    index: Index<'g>,
    deadline: Option<Instant>,
    steps: RefCell<u64>,
    regexes: RefCell<HashMap<(String, String), Option<Regex>>>,
}

fn resolve<'a>(tp: &'a TermPattern, sol: &'a Solution) -> Option<&'a Term> {
    match tp {
        TermPattern::Term(t) => Some(t),
        TermPattern::Variable(v) => sol.get(v),
    }
}

fn bind(sol: &mut Solution, tp: &TermPattern, value: &Term) -> bool {
    match tp {
        TermPattern::Term(t) => t == value,
        TermPattern::Variable(v) => match sol.get(v) {
            Some(existing) => existing == value,
            None => {
                sol.insert(v.clone(), value.clone());
                true
            }
        },
    }
}

fn compatible(a: &Solution, b: &Solution) -> bool {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    small.iter().all(|(k, v)| large.get(k).map_or(true, |w| w == v))
}

fn merged(a: &Solution, b: &Solution) -> Solution {
    let mut out = a.clone();
    for (k, v) in b {
        out.entry(k.clone()).or_insert_with(|| v.clone());
    }
    out
}

impl<'g> Evaluator<'g> {
    fn tick(&self) -> Result<(), EvalError> {
        let mut steps = self.steps.borrow_mut();
        *steps += 1;
        if *steps % 1024 == 1 {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    return Err(EvalError::Timeout);
                }
            }
        }
        Ok(())
    }

    fn group(&self, group: &GroupPattern) -> Result<Vec<Solution>, EvalError> {
        let (solutions, filters) = self.group_unfiltered(group)?;
        Ok(solutions
            .into_iter()
            .filter(|sol| filters.iter().all(|f| self.holds(f, sol)))
            .collect())
    }

    /// Evaluates a group and returns its top-level filters separately, so an
    /// OPTIONAL can use them as its join condition.
    fn group_unfiltered<'a>(&self, group: &'a GroupPattern) -> Result<(Vec<Solution>, Vec<&'a Expression>), EvalError> {
        let mut acc = vec![Solution::new()];
        let mut pending: Vec<&TriplePattern> = Vec::new();
        let mut filters = Vec::new();
        for element in &group.elements {
            match element {
                GroupElement::Triple(tp) => pending.push(tp),
                GroupElement::Filter(f) => filters.push(f),
                GroupElement::Optional(sub) => {
                    acc = self.bgp(&std::mem::take(&mut pending), acc)?;
                    acc = self.left_join(acc, sub)?;
                }
                GroupElement::Group(sub) => {
                    acc = self.bgp(&std::mem::take(&mut pending), acc)?;
                    let right = self.group(sub)?;
                    let mut joined = Vec::new();
                    for left in &acc {
                        for r in &right {
                            self.tick()?;
                            if compatible(left, r) {
                                joined.push(merged(left, r));
                            }
                        }
                    }
                    acc = joined;
                }
            }
        }
        acc = self.bgp(&pending, acc)?;
        Ok((acc, filters))
    }

    fn left_join(&self, left: Vec<Solution>, sub: &GroupPattern) -> Result<Vec<Solution>, EvalError> {
        let (right, filters) = self.group_unfiltered(sub)?;
        let mut out = Vec::with_capacity(left.len());
        for l in left {
            let before = out.len();
            for r in &right {
                self.tick()?;
                if compatible(&l, r) {
                    let m = merged(&l, r);
                    if filters.iter().all(|f| self.holds(f, &m)) {
                        out.push(m);
                    }
                }
            }
            if out.len() == before {
                out.push(l);
            }
        }
        Ok(out)
    }

    fn bgp(&self, patterns: &[&TriplePattern], seeds: Vec<Solution>) -> Result<Vec<Solution>, EvalError> {
        if patterns.is_empty() {
            return Ok(seeds);
        }
        let mut out = Vec::new();
        for seed in seeds {
            let mut remaining: Vec<&TriplePattern> = patterns.to_vec();
            self.extend(&mut remaining, seed, &mut out)?;
        }
        Ok(out)
    }

    fn extend(&self, remaining: &mut Vec<&TriplePattern>, sol: Solution, out: &mut Vec<Solution>) -> Result<(), EvalError> {
        if remaining.is_empty() {
            out.push(sol);
            return Ok(());
        }
        // the pattern with the fewest unbound variables goes first
        let unbound = |tp: &TriplePattern| {
            tp.positions()
                .into_iter()
                .filter(|p| matches!(p, TermPattern::Variable(v) if !sol.contains_key(v)))
                .count()
        };
        let pick = (0..remaining.len()).min_by_key(|&i| unbound(remaining[i])).expect("non-empty");
        let tp = remaining.remove(pick);
        let (s, p, o) = (resolve(&tp.subject, &sol), resolve(&tp.predicate, &sol), resolve(&tp.object, &sol));
        let mut try_triple = |t: &Triple, out: &mut Vec<Solution>| -> Result<(), EvalError> {
            self.tick()?;
            let mut next = sol.clone();
            let predicate = Term::Iri(t.predicate().clone());
            if bind(&mut next, &tp.subject, t.subject())
                && bind(&mut next, &tp.predicate, &predicate)
                && bind(&mut next, &tp.object, t.object())
            {
                self.extend(remaining, next, out)?;
            }
            Ok(())
        };
        match self.index.candidates(s, p, o) {
            Some(list) => {
                for &i in list {
                    try_triple(self.index.triples[i], out)?;
                }
            }
            None => {
                for t in &self.index.triples {
                    try_triple(t, out)?;
                }
            }
        }
        remaining.insert(pick, tp);
        Ok(())
    }

    fn holds(&self, expr: &Expression, sol: &Solution) -> bool {
        matches!(self.eval(expr, sol).and_then(|t| effective_boolean(&t)), Ok(true))
    }

    fn eval(&self, expr: &Expression, sol: &Solution) -> Result<Term, ExprError> {
        Ok(match expr {
            Expression::Variable(v) => sol.get(v).cloned().ok_or(ExprError)?,
            Expression::Constant(t) => t.clone(),
            Expression::Or(a, b) => {
                let left = self.eval(a, sol).and_then(|t| effective_boolean(&t));
                let right = self.eval(b, sol).and_then(|t| effective_boolean(&t));
                match (left, right) {
                    (Ok(true), _) | (_, Ok(true)) => boolean(true),
                    (Ok(false), Ok(false)) => boolean(false),
                    _ => return Err(ExprError),
                }
            }
            Expression::And(a, b) => {
                let left = self.eval(a, sol).and_then(|t| effective_boolean(&t));
                let right = self.eval(b, sol).and_then(|t| effective_boolean(&t));
                match (left, right) {
                    (Ok(false), _) | (_, Ok(false)) => boolean(false),
                    (Ok(true), Ok(true)) => boolean(true),
                    _ => return Err(ExprError),
                }
            }
            Expression::Not(a) => boolean(!effective_boolean(&self.eval(a, sol)?)?),
            Expression::Compare(op, a, b) => {
                let (a, b) = (self.eval(a, sol)?, self.eval(b, sol)?);
                boolean(compare(*op, &a, &b)?)
            }
            Expression::Bound(v) => boolean(sol.contains_key(v)),
            Expression::Str(a) => match self.eval(a, sol)? {
                Term::Iri(iri) => Term::Literal(Literal::string(iri.as_str())),
                Term::Literal(lit) => Term::Literal(Literal::string(lit.lexical())),
                Term::BlankNode(_) => return Err(ExprError),
            },
            Expression::Lang(a) => match self.eval(a, sol)? {
                Term::Literal(lit) => Term::Literal(Literal::string(lit.language().unwrap_or(""))),
                _ => return Err(ExprError),
            },
            Expression::Datatype(a) => match self.eval(a, sol)? {
                Term::Literal(lit) => Term::Iri(lit.datatype().clone()),
                _ => return Err(ExprError),
            },
            Expression::Regex(text, pattern, flags) => {
                let text = string_value(&self.eval(text, sol)?)?;
                let pattern = simple_string(&self.eval(pattern, sol)?)?;
                let flags = match flags {
                    Some(f) => simple_string(&self.eval(f, sol)?)?,
                    None => String::new(),
                };
                let regex = self.regex(pattern, flags)?;
                boolean(regex.is_match(&text))
            }
        })
    }

    fn regex(&self, pattern: String, flags: String) -> Result<Regex, ExprError> {
        let mut cache = self.regexes.borrow_mut();
        let entry = cache.entry((pattern, flags)).or_insert_with_key(|(pattern, flags)| {
            let mut builder = RegexBuilder::new(pattern);
            for f in flags.chars() {
                match f {
                    'i' => builder.case_insensitive(true),
                    's' => builder.dot_matches_new_line(true),
                    'm' => builder.multi_line(true),
                    'x' => builder.ignore_whitespace(true),
                    _ => return None,
                };
            }
            builder.build().ok()
        });
        entry.clone().ok_or(ExprError)
    }
}

/// Marker for a FILTER expression error; the row is dropped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct ExprError;

fn boolean(value: bool) -> Term {
    Term::Literal(Literal::boolean(value))
}

pub(crate) fn numeric_value(term: &Term) -> Option<Result<f64, ExprError>> {
    let lit = term.as_literal()?;
    if !xsd::NUMERIC.contains(&lit.datatype().as_str()) {
        return None;
    }
    Some(lit.lexical().trim().parse::<f64>().map_err(|_| ExprError))
}

fn effective_boolean(term: &Term) -> Result<bool, ExprError> {
    let lit = term.as_literal().ok_or(ExprError)?;
    if lit.datatype().as_str() == xsd::BOOLEAN {
        return Ok(matches!(lit.lexical(), "true" | "1"));
    }
    if let Some(n) = numeric_value(term) {
        return Ok(n.map(|n| n != 0.0 && !n.is_nan()).unwrap_or(false));
    }
    if lit.is_plain() || lit.language().is_some() {
        return Ok(!lit.lexical().is_empty());
    }
    Err(ExprError)
}

fn string_value(term: &Term) -> Result<String, ExprError> {
    match term {
        Term::Literal(lit) if lit.is_plain() || lit.language().is_some() => Ok(lit.lexical().to_string()),
        _ => Err(ExprError),
    }
}

fn simple_string(term: &Term) -> Result<String, ExprError> {
    match term {
        Term::Literal(lit) if lit.is_plain() => Ok(lit.lexical().to_string()),
        _ => Err(ExprError),
    }
}

pub(crate) fn compare(op: CompareOp, a: &Term, b: &Term) -> Result<bool, ExprError> {
    let ordering = match (numeric_value(a), numeric_value(b)) {
        (Some(x), Some(y)) => {
            let (x, y) = (x?, y?);
            match x.partial_cmp(&y) {
                Some(o) => o,
                None => return Ok(op == CompareOp::Ne),
            }
        }
        _ => a.cmp(b),
    };
    Ok(match op {
        CompareOp::Eq => ordering == Ordering::Equal,
        CompareOp::Ne => ordering != Ordering::Equal,
        CompareOp::Lt => ordering == Ordering::Less,
        CompareOp::Gt => ordering == Ordering::Greater,
        CompareOp::Le => ordering != Ordering::Greater,
        CompareOp::Ge => ordering != Ordering::Less,
    })
}

/// Ordering used by ORDER BY: unbound first, numerics by value, everything
/// else by term order.
pub(crate) fn order_terms(a: Option<&Term>, b: Option<&Term>) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (Some(a), Some(b)) => match (numeric_value(a), numeric_value(b)) {
            (Some(Ok(x)), Some(Ok(y))) => x.partial_cmp(&y).unwrap_or(Ordering::Equal).then_with(|| a.cmp(b)),
            _ => a.cmp(b),
        },
    }
}

/// Evaluates a parsed query. Returns [`EvalError::Timeout`] once `deadline`
/// passes.
pub fn evaluate_with_deadline(query: &Query, graph: &Graph, deadline: Option<Instant>) -> Result<ResultSet, EvalError> {
    let ev = Evaluator {
        index: Index::new(graph),
        deadline,
        steps: RefCell::new(0),
        regexes: RefCell::new(HashMap::new()),
    };
    let mut solutions = ev.group(&query.pattern)?;

    if let QueryForm::Ask = query.form {
        return Ok(ResultSet::Boolean(!solutions.is_empty()));
    }

    if !query.order_by.is_empty() {
        let keys: Vec<Vec<Option<Term>>> = solutions
            .iter()
            .map(|sol| {
                query
                    .order_by
                    .iter()
                    .map(|c| ev.eval(&c.expression, sol).ok())
                    .collect()
            })
            .collect();
        let mut order: Vec<usize> = (0..solutions.len()).collect();
        order.sort_by(|&i, &j| {
            for (n, cond) in query.order_by.iter().enumerate() {
                let o = order_terms(keys[i][n].as_ref(), keys[j][n].as_ref());
                let o = if cond.descending { o.reverse() } else { o };
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        });
        let mut slots: Vec<Option<Solution>> = solutions.into_iter().map(Some).collect();
        solutions = order.into_iter().map(|i| slots[i].take().expect("each index once")).collect();
    }

    let vars = query.projected_variables();
    let mut projected: Vec<Solution> = solutions
        .into_iter()
        .map(|sol| sol.into_iter().filter(|(k, _)| vars.contains(k)).collect())
        .collect();

    if let QueryForm::Select { distinct: true, .. } = query.form {
        let mut seen = HashSet::new();
        projected.retain(|sol| seen.insert(sol.clone()));
    }

    let offset = query.offset.unwrap_or(0);
    let limit = query.limit.unwrap_or(usize::MAX);
    let solutions = projected.into_iter().skip(offset).take(limit).collect();
    Ok(ResultSet::Bindings { vars, solutions })
}

pub fn evaluate(query: &Query, graph: &Graph) -> Result<ResultSet, EvalError> {
    evaluate_with_deadline(query, graph, None)
}

#[cfg(test)]
mod tests {
    use super::super::parse_query;
    use super::*;
    use crate::rdf::parse_turtle;

    const DATA: &str = r#"
        @prefix ex: <http://ex.org/> .
        ex:a ex:age 30 ; ex:name "Ann"@en ; a ex:Person .
        ex:b ex:age 4 ; ex:name "Bob" ; a ex:Person .
        ex:c ex:age 100 ; a ex:Person .
        ex:d ex:name "Dee" .
    "#;

    fn run(q: &str) -> ResultSet {
        let g = parse_turtle(DATA).unwrap();
        evaluate(&parse_query(q).unwrap(), &g).unwrap()
    }

    fn column(r: &ResultSet, var: &str) -> Vec<String> {
        let ResultSet::Bindings { solutions, .. } = r else { panic!() };
        solutions
            .iter()
            .map(|s| s.get(&Variable::new(var)).map(|t| t.to_string()).unwrap_or_default())
            .collect()
    }

    #[test]
    fn empty_graph() {
        let g = Graph::new();
        let r = evaluate(&parse_query("SELECT * { ?s ?p ?o }").unwrap(), &g).unwrap();
        assert!(r.is_empty());
        let r = evaluate(&parse_query("ASK { ?s ?p ?o }").unwrap(), &g).unwrap();
        assert_eq!(r, ResultSet::Boolean(false));
    }

    #[test]
    fn numeric_order_not_lexical() {
        let r = run("PREFIX ex: <http://ex.org/> SELECT ?s { ?s ex:age ?n } ORDER BY ?n");
        assert_eq!(column(&r, "s"), ["<http://ex.org/b>", "<http://ex.org/a>", "<http://ex.org/c>"]);
        let r = run("PREFIX ex: <http://ex.org/> SELECT ?s { ?s ex:age ?n } ORDER BY DESC(?n) LIMIT 1");
        assert_eq!(column(&r, "s"), ["<http://ex.org/c>"]);
    }

    #[test]
    fn optional_keeps_rows() {
        let r = run("PREFIX ex: <http://ex.org/> SELECT ?s ?name { ?s a ex:Person OPTIONAL { ?s ex:name ?name } } ORDER BY ?s");
        assert_eq!(column(&r, "name"), ["\"Ann\"@en", "\"Bob\"", ""]);
    }

    #[test]
    fn optional_filter_is_join_condition() {
        let r = run(
            "PREFIX ex: <http://ex.org/> SELECT ?s ?name { ?s a ex:Person \
             OPTIONAL { ?s ex:name ?name FILTER(LANG(?name) = \"en\") } } ORDER BY ?s",
        );
        assert_eq!(column(&r, "name"), ["\"Ann\"@en", "", ""]);
    }

    #[test]
    fn filter_errors_drop_rows() {
        // REGEX over an IRI is a type error, so every row is rejected
        let r = run("SELECT ?s { ?s ?p ?o FILTER(REGEX(?s, \"ex\")) }");
        assert!(r.is_empty());
        let r = run("SELECT ?s { ?s ?p ?o FILTER(REGEX(STR(?s), \"/A$\", \"i\")) }");
        assert_eq!(r.len(), 3);
        let r = run("PREFIX ex: <http://ex.org/> SELECT ?s { ?s ex:age ?n FILTER(!BOUND(?x) && ?n > 10) }");
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn distinct_and_offset() {
        let r = run("SELECT DISTINCT ?p { ?s ?p ?o } ORDER BY ?p");
        assert_eq!(r.len(), 3);
        let r = run("SELECT DISTINCT ?p { ?s ?p ?o } ORDER BY ?p OFFSET 1 LIMIT 1");
        assert_eq!(column(&r, "p"), ["<http://ex.org/name>"]);
    }

    #[test]
    fn datatype_and_str() {
        let r = run("SELECT ?o { ?s ?p ?o FILTER(DATATYPE(?o) = <http://www.w3.org/2001/XMLSchema#integer>) }");
        assert_eq!(r.len(), 3);
        let r = run("SELECT ?o { ?s ?p ?o FILTER(STR(?o) = \"Ann\") }");
        assert_eq!(r.len(), 1);
    }

    #[test]
    fn deadline_in_the_past_times_out() {
        let g = parse_turtle(DATA).unwrap();
        let q = parse_query("SELECT * { ?a ?b ?c . ?d ?e ?f . ?g ?h ?i }").unwrap();
        let err = evaluate_with_deadline(&q, &g, Some(Instant::now())).unwrap_err();
        assert_eq!(err, EvalError::Timeout);
    }

    #[test]
    fn nested_group_joins() {
        let r = run("PREFIX ex: <http://ex.org/> SELECT ?s { ?s a ex:Person { ?s ex:name ?n } }");
        assert_eq!(r.len(), 2);
    }
}
