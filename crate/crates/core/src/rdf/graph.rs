use std::collections::{BTreeMap, BTreeSet};

use super::{Iri, Term, Triple};

/// A set of triples plus the prefix bindings used when serializing it.
///
/// Equality compares triples only; prefix maps are presentation.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    triples: BTreeSet<Triple>,
    prefixes: BTreeMap<String, Iri>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.triples == other.triples
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a triple, returning `true` when it was not already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        self.triples.insert(triple)
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Triples in (subject, predicate, object) term order.
    pub fn iter(&self) -> impl Iterator<Item = &Triple> + '_ {
        self.triples.iter()
    }

    pub fn prefixes(&self) -> &BTreeMap<String, Iri> {
        &self.prefixes
    }

    /// Binds a prefix, replacing any previous binding for the same name.
    pub fn bind_prefix(&mut self, prefix: impl Into<String>, namespace: Iri) {
        self.prefixes.insert(prefix.into(), namespace);
    }

    /// Adds every triple of `other`. Prefixes already bound here win.
    pub fn extend_from(&mut self, other: &Graph) {
        self.triples.extend(other.triples.iter().cloned());
        for (prefix, ns) in &other.prefixes {
            self.prefixes.entry(prefix.clone()).or_insert_with(|| ns.clone());
        }
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        self.triples.remove(triple)
    }

    /// Triples with the given subject.
    pub fn triples_for_subject<'a>(&'a self, subject: &'a Term) -> impl Iterator<Item = &'a Triple> + 'a {
        self.triples.iter().filter(move |t| t.subject() == subject)
    }

    /// Objects of `(subject, predicate, ?)`.
    pub fn objects<'a>(&'a self, subject: &'a Term, predicate: &'a Iri) -> impl Iterator<Item = &'a Term> + 'a {
        self.triples_for_subject(subject)
            .filter(move |t| t.predicate() == predicate)
            .map(Triple::object)
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        Graph {
            triples: iter.into_iter().collect(),
            prefixes: BTreeMap::new(),
        }
    }
}

impl Extend<Triple> for Graph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        self.triples.extend(iter);
    }
}

impl<'a> IntoIterator for &'a Graph {
    type Item = &'a Triple;
    type IntoIter = std::collections::btree_set::Iter<'a, Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}

/// Set union of two graphs; `first`'s prefix bindings win on conflict.
pub fn merge(first: &Graph, second: &Graph) -> Graph {
    let mut out = first.clone();
    out.extend_from(second);
    out
}
