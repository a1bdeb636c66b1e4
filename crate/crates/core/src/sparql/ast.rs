use std::collections::BTreeMap;
use std::fmt;

use crate::rdf::{Iri, Term};

/// A query variable, stored without its `?`/`$` sigil.
///
/// Blank nodes written in a query pattern become hidden variables whose
/// name starts with `_:`; they are never projected by `SELECT *`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(String);

impl Variable {
    pub fn new(name: impl Into<String>) -> Self {
        Variable(name.into())
    }

    pub(crate) fn hidden(label: &str) -> Self {
        Variable(format!("_:{label}"))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn is_hidden(&self) -> bool {
        self.0.starts_with("_:")
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_hidden() {
            f.write_str(&self.0)
        } else {
            write!(f, "?{}", self.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermPattern {
    Variable(Variable),
    Term(Term),
}

impl TermPattern {
    pub fn as_variable(&self) -> Option<&Variable> {
        match self {
            TermPattern::Variable(v) => Some(v),
            TermPattern::Term(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriplePattern {
    pub subject: TermPattern,
    pub predicate: TermPattern,
    pub object: TermPattern,
}

impl TriplePattern {
    pub fn positions(&self) -> [&TermPattern; 3] {
        [&self.subject, &self.predicate, &self.object]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareOp {
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expression {
    Variable(Variable),
    Constant(Term),
    Or(Box<Expression>, Box<Expression>),
    And(Box<Expression>, Box<Expression>),
    Not(Box<Expression>),
    Compare(CompareOp, Box<Expression>, Box<Expression>),
    Regex(Box<Expression>, Box<Expression>, Option<Box<Expression>>),
    Str(Box<Expression>),
    Lang(Box<Expression>),
    Datatype(Box<Expression>),
    Bound(Variable),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupElement {
    Triple(TriplePattern),
    Filter(Expression),
    Optional(GroupPattern),
    /// A nested `{ ... }` block, joined with its surroundings.
    Group(GroupPattern),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroupPattern {
    pub elements: Vec<GroupElement>,
}

impl GroupPattern {
    /// Variables in order of first appearance, hidden ones excluded.
    pub fn visible_variables(&self) -> Vec<Variable> {
        let mut out = Vec::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut Vec<Variable>) {
        for element in &self.elements {
            match element {
                GroupElement::Triple(tp) => {
                    for v in tp.positions().into_iter().filter_map(TermPattern::as_variable) {
                        if !v.is_hidden() && !out.contains(v) {
                            out.push(v.clone());
                        }
                    }
                }
                GroupElement::Optional(g) | GroupElement::Group(g) => g.collect_variables(out),
                GroupElement::Filter(_) => {}
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Projection {
    All,
    Variables(Vec<Variable>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryForm {
    Select { distinct: bool, projection: Projection },
    Ask,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderCondition {
    pub expression: Expression,
    pub descending: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub prefixes: BTreeMap<String, Iri>,
    pub form: QueryForm,
    pub pattern: GroupPattern,
    pub order_by: Vec<OrderCondition>,
    pub limit: Option<usize>,
    pub offset: Option<usize>,
}

impl Query {
    /// Output columns of a SELECT query; empty for ASK.
    pub fn projected_variables(&self) -> Vec<Variable> {
        match &self.form {
            QueryForm::Select {
                projection: Projection::Variables(vars),
                ..
            } => vars.clone(),
            QueryForm::Select {
                projection: Projection::All,
                ..
            } => self.pattern.visible_variables(),
            QueryForm::Ask => Vec::new(),
        }
    }
}
