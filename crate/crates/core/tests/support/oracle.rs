//! Brute-force reference for the SPARQL subset: random (graph, query)
//! instances and an evaluator that tries every variable-to-term assignment.
//! Shared by the core property tests and the acceptance suite.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use legalkg_core::rdf::{BlankNode, Graph, Iri, Literal, Term, Triple};
use rand::seq::SliceRandom;
use rand::Rng;

const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
const XSD_DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";

pub fn iri_pool() -> Vec<Term> {
    ["a", "b", "c", "p", "q"]
        .iter()
        .map(|n| Term::Iri(Iri::new(format!("http://ex.org/{n}")).unwrap()))
        .collect()
}

pub fn literal_pool() -> Vec<Term> {
    vec![
        Term::Literal(Literal::string("a")),
        Term::Literal(Literal::string("ab")),
        Term::Literal(Literal::lang("a", "en").unwrap()),
        Term::Literal(Literal::typed("1", Iri::new(XSD_INTEGER).unwrap())),
        Term::Literal(Literal::typed("2", Iri::new(XSD_INTEGER).unwrap())),
        Term::Literal(Literal::typed("1.5", Iri::new(XSD_DECIMAL).unwrap())),
    ]
}

pub fn random_graph(rng: &mut impl Rng, max_triples: usize) -> Graph {
    let iris = iri_pool();
    let blanks: Vec<Term> = ["b0", "b1"].iter().map(|l| Term::BlankNode(BlankNode::new(*l).unwrap())).collect();
    let literals = literal_pool();
    let mut g = Graph::new();
    let n = rng.gen_range(0..=max_triples).max(rng.gen_range(0..=max_triples));
    for _ in 0..n {
        let s = if rng.gen_bool(0.15) { blanks.choose(rng) } else { iris[..3].choose(rng) }.unwrap().clone();
        let predicates = if rng.gen_bool(0.85) { &iris[3..] } else { &iris[..] };
        let p = match predicates.choose(rng).unwrap() {
            Term::Iri(i) => i.clone(),
            _ => unreachable!(),
        };
        let o = match rng.gen_range(0..10) {
            0..=3 => iris.choose(rng).unwrap().clone(),
            4 => blanks.choose(rng).unwrap().clone(),
            _ => literals.choose(rng).unwrap().clone(),
        };
        g.insert(Triple::new(s, p, o).unwrap());
    }
    g
}

#[derive(Debug, Clone, PartialEq)]
pub enum Slot {
    Var(usize),
    Const(Term),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pattern(pub Slot, pub Slot, pub Slot);

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Op {
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Filter {
    Cmp(Op, Slot, Slot),
    Bound(usize),
    StartsWith(usize, String),
    Contains(usize, String),
    LangIs(usize, String),
    Not(Box<Filter>),
    And(Box<Filter>, Box<Filter>),
    Or(Box<Filter>, Box<Filter>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub required: Vec<Pattern>,
    pub filters: Vec<Filter>,
    pub optional: Option<(Vec<Pattern>, Vec<Filter>)>,
    /// `None` projects every variable, like `SELECT *`.
    pub projection: Option<Vec<usize>>,
    pub distinct: bool,
}

fn var_name(v: usize) -> String {
    format!("?v{v}")
}

fn slot_text(slot: &Slot) -> String {
    match slot {
        Slot::Var(v) => var_name(*v),
        Slot::Const(t) => t.to_string(),
    }
}

fn filter_text(f: &Filter) -> String {
    match f {
        Filter::Cmp(op, a, b) => {
            let op = match op {
                Op::Eq => "=",
                Op::Ne => "!=",
                Op::Lt => "<",
                Op::Gt => ">",
                Op::Le => "<=",
                Op::Ge => ">=",
            };
            format!("({} {op} {})", slot_text(a), slot_text(b))
        }
        Filter::Bound(v) => format!("BOUND({})", var_name(*v)),
        Filter::StartsWith(v, s) => format!("REGEX(STR({}), \"^{s}\")", var_name(*v)),
        Filter::Contains(v, s) => format!("REGEX(STR({}), \"{s}\")", var_name(*v)),
        Filter::LangIs(v, s) => format!("(LANG({}) = \"{s}\")", var_name(*v)),
        Filter::Not(inner) => format!("!({})", filter_text(inner)),
        Filter::And(a, b) => format!("({} && {})", filter_text(a), filter_text(b)),
        Filter::Or(a, b) => format!("({} || {})", filter_text(a), filter_text(b)),
    }
}

fn group_text(patterns: &[Pattern], filters: &[Filter]) -> String {
    let mut out = String::new();
    for Pattern(s, p, o) in patterns {
        out.push_str(&format!("{} {} {} . ", slot_text(s), slot_text(p), slot_text(o)));
    }
    for f in filters {
        out.push_str(&format!("FILTER({}) ", filter_text(f)));
    }
    out
}

fn pattern_vars(patterns: &[Pattern]) -> Vec<usize> {
    let mut vars = Vec::new();
    for Pattern(s, p, o) in patterns {
        for slot in [s, p, o] {
            if let Slot::Var(v) = slot {
                if !vars.contains(v) {
                    vars.push(*v);
                }
            }
        }
    }
    vars
}

impl Query {
    pub fn required_vars(&self) -> Vec<usize> {
        pattern_vars(&self.required)
    }

    /// Variables bound only inside the OPTIONAL group.
    pub fn optional_only_vars(&self) -> Vec<usize> {
        let required = self.required_vars();
        self.optional
            .as_ref()
            .map(|(p, _)| pattern_vars(p).into_iter().filter(|v| !required.contains(v)).collect())
            .unwrap_or_default()
    }

    pub fn all_vars(&self) -> Vec<usize> {
        let mut vars = self.required_vars();
        vars.extend(self.optional_only_vars());
        vars
    }

    pub fn projected(&self) -> Vec<usize> {
        self.projection.clone().unwrap_or_else(|| self.all_vars())
    }

    pub fn to_sparql(&self) -> String {
        let head = match &self.projection {
            None => "*".to_string(),
            Some(vars) => vars.iter().map(|v| var_name(*v)).collect::<Vec<_>>().join(" "),
        };
        let distinct = if self.distinct { "DISTINCT " } else { "" };
        let mut body = String::new();
        for Pattern(s, p, o) in &self.required {
            body.push_str(&format!("{} {} {} . ", slot_text(s), slot_text(p), slot_text(o)));
        }
        if let Some((patterns, filters)) = &self.optional {
            body.push_str(&format!("OPTIONAL {{ {}}} ", group_text(patterns, filters)));
        }
        for f in &self.filters {
            body.push_str(&format!("FILTER({}) ", filter_text(f)));
        }
        format!("SELECT {distinct}{head} WHERE {{ {body}}}")
    }
}

fn random_slot(rng: &mut impl Rng, vars: &[usize], position: usize) -> Slot {
    let iris = iri_pool();
    let var_chance = if position == 1 { 0.15 } else { 0.75 };
    if rng.gen_bool(var_chance) {
        return Slot::Var(*vars.choose(rng).unwrap());
    }
    match position {
        2 if rng.gen_bool(0.4) => Slot::Const(literal_pool().choose(rng).unwrap().clone()),
        0 => Slot::Const(iris[..3].choose(rng).unwrap().clone()),
        1 => Slot::Const(iris[3..].choose(rng).unwrap().clone()),
        _ => Slot::Const(iris.choose(rng).unwrap().clone()),
    }
}

fn random_pattern(rng: &mut impl Rng, vars: &[usize]) -> Pattern {
    Pattern(random_slot(rng, vars, 0), random_slot(rng, vars, 1), random_slot(rng, vars, 2))
}

fn random_operand(rng: &mut impl Rng, vars: &[usize]) -> Slot {
    if rng.gen_bool(0.5) {
        Slot::Var(*vars.choose(rng).unwrap())
    } else {
        let mut pool = literal_pool();
        pool.extend(iri_pool());
        Slot::Const(pool.choose(rng).unwrap().clone())
    }
}

fn random_filter(rng: &mut impl Rng, vars: &[usize], depth: usize) -> Filter {
    let v = *vars.choose(rng).unwrap();
    match rng.gen_range(0..if depth == 0 { 9 } else { 6 }) {
        0 | 1 => {
            let op = *[Op::Eq, Op::Ne, Op::Lt, Op::Gt, Op::Le, Op::Ge].choose(rng).unwrap();
            Filter::Cmp(op, Slot::Var(v), random_operand(rng, vars))
        }
        2 => Filter::Bound(v),
        3 => Filter::StartsWith(v, ["a", "1", "http"].choose(rng).unwrap().to_string()),
        4 => Filter::Contains(v, ["b", "x", "org/c"].choose(rng).unwrap().to_string()),
        5 => Filter::LangIs(v, ["en", ""].choose(rng).unwrap().to_string()),
        6 => Filter::Not(Box::new(random_filter(rng, vars, depth + 1))),
        7 => Filter::And(
            Box::new(random_filter(rng, vars, depth + 1)),
            Box::new(random_filter(rng, vars, depth + 1)),
        ),
        _ => Filter::Or(
            Box::new(random_filter(rng, vars, depth + 1)),
            Box::new(random_filter(rng, vars, depth + 1)),
        ),
    }
}

/// At most 4 triple patterns, 2 filters and 1 OPTIONAL group.
pub fn random_query(rng: &mut impl Rng) -> Query {
    let required_vars: Vec<usize> = (0..rng.gen_range(1..=3)).collect();
    let with_optional = rng.gen_bool(0.4);
    let most = if with_optional { 3 } else { 4 };
    let n_required = rng.gen_range(1..=most).min(rng.gen_range(1..=most));
    let required: Vec<Pattern> = (0..n_required).map(|_| random_pattern(rng, &required_vars)).collect();
    let optional = with_optional.then(|| {
        let mut vars = required_vars.clone();
        vars.push(3);
        let mut p = random_pattern(rng, &vars);
        if rng.gen_bool(0.7) {
            p.2 = Slot::Var(3);
        }
        let filters = if rng.gen_bool(0.3) { vec![random_filter(rng, &vars, 0)] } else { vec![] };
        (vec![p], filters)
    });
    let mut query = Query {
        required,
        filters: Vec::new(),
        optional,
        projection: None,
        distinct: rng.gen_bool(0.3),
    };
    let all = query.all_vars();
    if !all.is_empty() {
        let budget = 2 - query.optional.as_ref().map_or(0, |(_, f)| f.len());
        for _ in 0..rng.gen_range(0..=budget) {
            query.filters.push(random_filter(rng, &all, 0));
        }
        if rng.gen_bool(0.5) {
            let mut projected: Vec<usize> = all.iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
            if projected.is_empty() {
                projected.push(all[0]);
            }
            query.projection = Some(projected);
        }
    }
    query
}

pub type Assignment = BTreeMap<usize, Term>;

fn numeric(t: &Term) -> Option<f64> {
    match t {
        Term::Literal(l) if [XSD_INTEGER, XSD_DECIMAL].contains(&l.datatype().as_str()) => l.lexical().parse().ok(),
        _ => None,
    }
}

fn resolve<'a>(slot: &'a Slot, mu: &'a Assignment) -> Option<&'a Term> {
    match slot {
        Slot::Var(v) => mu.get(v),
        Slot::Const(t) => Some(t),
    }
}

/// `None` is a FILTER error.
fn truth(f: &Filter, mu: &Assignment) -> Option<bool> {
    match f {
        Filter::Cmp(op, a, b) => {
            let (a, b) = (resolve(a, mu)?, resolve(b, mu)?);
            let ord = match (numeric(a), numeric(b)) {
                (Some(x), Some(y)) => x.partial_cmp(&y)?,
                _ => a.cmp(b),
            };
            Some(match op {
                Op::Eq => ord == Ordering::Equal,
                Op::Ne => ord != Ordering::Equal,
                Op::Lt => ord == Ordering::Less,
                Op::Gt => ord == Ordering::Greater,
                Op::Le => ord != Ordering::Greater,
                Op::Ge => ord != Ordering::Less,
            })
        }
        Filter::Bound(v) => Some(mu.contains_key(v)),
        Filter::StartsWith(v, s) | Filter::Contains(v, s) => {
            let text = match mu.get(v)? {
                Term::Iri(i) => i.as_str().to_string(),
                Term::Literal(l) => l.lexical().to_string(),
                Term::BlankNode(_) => return None,
            };
            Some(match f {
                Filter::StartsWith(..) => text.starts_with(s.as_str()),
                _ => text.contains(s.as_str()),
            })
        }
        Filter::LangIs(v, s) => match mu.get(v)? {
            Term::Literal(l) => Some(l.language().unwrap_or("") == s),
            _ => None,
        },
        Filter::Not(inner) => truth(inner, mu).map(|b| !b),
        Filter::And(a, b) => match (truth(a, mu), truth(b, mu)) {
            (Some(false), _) | (_, Some(false)) => Some(false),
            (Some(true), Some(true)) => Some(true),
            _ => None,
        },
        Filter::Or(a, b) => match (truth(a, mu), truth(b, mu)) {
            (Some(true), _) | (_, Some(true)) => Some(true),
            (Some(false), Some(false)) => Some(false),
            _ => None,
        },
    }
}

fn holds(patterns: &[Pattern], mu: &Assignment, graph: &Graph) -> bool {
    patterns.iter().all(|Pattern(s, p, o)| {
        let (Some(s), Some(Term::Iri(p)), Some(o)) = (resolve(s, mu), resolve(p, mu), resolve(o, mu)) else {
            return false;
        };
        match Triple::new(s.clone(), p.clone(), o.clone()) {
            Ok(t) => graph.contains(&t),
            Err(_) => false,
        }
    })
}

/// Every assignment of `vars` to terms of `domain`, extending `base`.
fn assignments(vars: &[usize], domain: &[Term], base: &Assignment) -> Vec<Assignment> {
    let mut out = vec![base.clone()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|mu| {
                domain.iter().map(move |t| {
                    let mut next = mu.clone();
                    next.insert(*v, t.clone());
                    next
                })
            })
            .collect();
    }
    out
}

/// Solutions restricted to the projected variables, in no particular order.
pub fn brute_force(query: &Query, graph: &Graph) -> Vec<Assignment> {
    let domain: Vec<Term> = graph
        .iter()
        .flat_map(|t| [t.subject().clone(), Term::Iri(t.predicate().clone()), t.object().clone()])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let required: Vec<Assignment> = assignments(&query.required_vars(), &domain, &Assignment::new())
        .into_iter()
        .filter(|mu| holds(&query.required, mu, graph))
        .collect();
    let joined: Vec<Assignment> = match &query.optional {
        None => required,
        Some((patterns, filters)) => {
            let extra = query.optional_only_vars();
            required
                .into_iter()
                .flat_map(|mu| {
                    let ext: Vec<Assignment> = assignments(&extra, &domain, &mu)
                        .into_iter()
                        .filter(|m| holds(patterns, m, graph))
                        .filter(|m| filters.iter().all(|f| truth(f, m) == Some(true)))
                        .collect();
                    if ext.is_empty() {
                        vec![mu]
                    } else {
                        ext
                    }
                })
                .collect()
        }
    };
    let projected = query.projected();
    let mut out: Vec<Assignment> = joined
        .into_iter()
        .filter(|mu| query.filters.iter().all(|f| truth(f, mu) == Some(true)))
        .map(|mu| mu.into_iter().filter(|(v, _)| projected.contains(v)).collect())
        .collect();
    if query.distinct {
        let mut seen = BTreeSet::new();
        out.retain(|mu| seen.insert(mu.clone()));
    }
    out
}

/// Sorted multiset form used for comparisons.
pub fn canonical(mut solutions: Vec<Assignment>) -> Vec<Assignment> {
    solutions.sort();
    solutions
}

/// Converts evaluator output keyed by `?vN` names into oracle assignments.
pub fn from_named(solutions: Vec<BTreeMap<String, Term>>) -> Vec<Assignment> {
    solutions
        .into_iter()
        .map(|sol| {
            sol.into_iter()
                .map(|(name, t)| (name.trim_start_matches('v').parse::<usize>().expect("oracle variable"), t))
                .collect()
        })
        .collect()
}
