//! Term algebra: IRIs, literals, variables, lists and quoted graphs, plus the
//! triple/graph/binding types built on top of them.
//!
//! Every type here derives its ordering from the canonical term order, so any
//! collection of terms iterates the same way on every run. The class rank is
//! `Iri < Literal < Variable < List < Graph`; numbers compare by value.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use bigdecimal::BigDecimal;
use thiserror::Error;

/// An arbitrary-precision decimal, always stored in normalized form so that
/// `1`, `1.0` and `01` are structurally identical (and hash identically).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Decimal(BigDecimal);

impl Decimal {
    pub fn new(value: BigDecimal) -> Self {
        Decimal(value.normalized())
    }

    pub fn zero() -> Self {
        Decimal::from(0)
    }

    pub fn as_big(&self) -> &BigDecimal {
        &self.0
    }

    pub fn is_negative(&self) -> bool {
        self.0 < 0
    }
}

impl From<i64> for Decimal {
    fn from(value: i64) -> Self {
        Decimal::new(BigDecimal::from(value))
    }
}

impl FromStr for Decimal {
    type Err = bigdecimal::ParseBigDecimalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BigDecimal::from_str(s).map(Decimal::new)
    }
}

impl std::ops::Add for &Decimal {
    type Output = Decimal;

    fn add(self, rhs: &Decimal) -> Decimal {
        Decimal::new(&self.0 + &rhs.0)
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.to_plain_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Literal {
    Number(Decimal),
    Text(Arc<str>),
    Boolean(bool),
}

/// A node in the data fabric. Variant declaration order is the canonical
/// class rank, so the derived `Ord` is the canonical order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Arc<str>),
    Literal(Literal),
    Variable(Arc<str>),
    List(Arc<[Term]>),
    Graph(Arc<Graph>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("invalid IRI {0:?}: must be non-empty and contain no whitespace")]
    InvalidIri(String),
    #[error("invalid variable name {0:?}")]
    InvalidVariable(String),
    #[error("unbound variable ?{0}")]
    UnboundVariable(String),
}

pub fn is_valid_iri(text: &str) -> bool {
    !text.is_empty() && !text.chars().any(|c| c.is_whitespace() || c == '<' || c == '>' || c == '"')
}

pub fn is_valid_variable_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Term {
    /// Builds an IRI term. Callers pass expanded text; see [`Term::try_iri`]
    /// for the checked variant.
    pub fn iri(text: impl AsRef<str>) -> Term {
        debug_assert!(is_valid_iri(text.as_ref()), "invalid IRI {:?}", text.as_ref());
        Term::Iri(Arc::from(text.as_ref()))
    }

    pub fn try_iri(text: impl AsRef<str>) -> Result<Term, TermError> {
        if is_valid_iri(text.as_ref()) {
            Ok(Term::Iri(Arc::from(text.as_ref())))
        } else {
            Err(TermError::InvalidIri(text.as_ref().to_string()))
        }
    }

    pub fn var(name: impl AsRef<str>) -> Term {
        debug_assert!(is_valid_variable_name(name.as_ref()));
        Term::Variable(Arc::from(name.as_ref()))
    }

    pub fn try_var(name: impl AsRef<str>) -> Result<Term, TermError> {
        if is_valid_variable_name(name.as_ref()) {
            Ok(Term::Variable(Arc::from(name.as_ref())))
        } else {
            Err(TermError::InvalidVariable(name.as_ref().to_string()))
        }
    }

    pub fn number(value: impl Into<Decimal>) -> Term {
        Term::Literal(Literal::Number(value.into()))
    }

    pub fn text(value: impl AsRef<str>) -> Term {
        Term::Literal(Literal::Text(Arc::from(value.as_ref())))
    }

    pub fn boolean(value: bool) -> Term {
        Term::Literal(Literal::Boolean(value))
    }

    pub fn list(items: impl IntoIterator<Item = Term>) -> Term {
        Term::List(items.into_iter().collect::<Vec<_>>().into())
    }

    pub fn graph(graph: Graph) -> Term {
        Term::Graph(Arc::new(graph))
    }

    pub fn as_iri(&self) -> Option<&str> {
        match self {
            Term::Iri(text) => Some(text),
            _ => None,
        }
    }

    pub fn as_number(&self) -> Option<&Decimal> {
        match self {
            Term::Literal(Literal::Number(n)) => Some(n),
            _ => None,
        }
    }

    pub fn as_graph(&self) -> Option<&Graph> {
        match self {
            Term::Graph(g) => Some(g),
            _ => None,
        }
    }

    pub fn is_variable(&self) -> bool {
        matches!(self, Term::Variable(_))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Iri(_) | Term::Literal(_) => true,
            Term::Variable(_) => false,
            Term::List(items) => items.iter().all(Term::is_ground),
            Term::Graph(g) => g.is_ground(),
        }
    }

    /// Collects every variable name occurring in this term, recursing into
    /// lists and quoted graphs.
    pub fn collect_variables(&self, out: &mut BTreeSet<Arc<str>>) {
        match self {
            Term::Iri(_) | Term::Literal(_) => {}
            Term::Variable(name) => {
                out.insert(name.clone());
            }
            Term::List(items) => items.iter().for_each(|t| t.collect_variables(out)),
            Term::Graph(g) => g.iter().for_each(|t| t.collect_variables(out)),
        }
    }

    /// Replaces bound variables, leaving unbound ones in place.
    pub fn substitute_partial(&self, binding: &Bindings) -> Term {
        match self {
            Term::Iri(_) | Term::Literal(_) => self.clone(),
            Term::Variable(name) => binding.get(name).cloned().unwrap_or_else(|| self.clone()),
            Term::List(items) => Term::list(items.iter().map(|t| t.substitute_partial(binding))),
            Term::Graph(g) => Term::graph(g.substitute_partial(binding)),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::n3::render_term(self, &Default::default()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Self {
        Triple { subject, predicate, object }
    }

    pub fn is_ground(&self) -> bool {
        self.subject.is_ground() && self.predicate.is_ground() && self.object.is_ground()
    }

    pub fn collect_variables(&self, out: &mut BTreeSet<Arc<str>>) {
        self.subject.collect_variables(out);
        self.predicate.collect_variables(out);
        self.object.collect_variables(out);
    }

    pub fn substitute_partial(&self, binding: &Bindings) -> Triple {
        Triple::new(
            self.subject.substitute_partial(binding),
            self.predicate.substitute_partial(binding),
            self.object.substitute_partial(binding),
        )
    }

    pub fn terms(&self) -> [&Term; 3] {
        [&self.subject, &self.predicate, &self.object]
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.subject, self.predicate, self.object)
    }
}

/// A duplicate-free set of triples iterated in canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Graph {
    triples: BTreeSet<Triple>,
}

impl Graph {
    pub fn new() -> Self {
        Graph::default()
    }

    /// Returns true when the triple was not already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        self.triples.insert(triple)
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        self.triples.remove(triple)
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

    pub fn iter(&self) -> impl Iterator<Item = &Triple> + '_ {
        self.triples.iter()
    }

    pub fn union(&self, other: &Graph) -> Graph {
        let mut out = self.clone();
        out.extend(other.iter().cloned());
        out
    }

    pub fn subtract(&self, other: &Graph) -> Graph {
        self.iter().filter(|t| !other.contains(t)).cloned().collect()
    }

    pub fn is_subset(&self, other: &Graph) -> bool {
        self.triples.is_subset(&other.triples)
    }

    pub fn is_ground(&self) -> bool {
        self.iter().all(Triple::is_ground)
    }

    pub fn variables(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        for t in self.iter() {
            t.collect_variables(&mut out);
        }
        out
    }

    pub fn substitute_partial(&self, binding: &Bindings) -> Graph {
        self.iter().map(|t| t.substitute_partial(binding)).collect()
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        Graph { triples: iter.into_iter().collect() }
    }
}

impl Extend<Triple> for Graph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        self.triples.extend(iter)
    }
}

impl IntoIterator for Graph {
    type Item = Triple;
    type IntoIter = std::collections::btree_set::IntoIter<Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.into_iter()
    }
}

impl<'a> IntoIterator for &'a Graph {
    type Item = &'a Triple;
    type IntoIter = std::collections::btree_set::Iter<'a, Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}

/// Variable name to ground term.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bindings(BTreeMap<Arc<str>, Term>);

impl Bindings {
    pub fn new() -> Self {
        Bindings::default()
    }

    pub fn get(&self, name: &str) -> Option<&Term> {
        self.0.get(name)
    }

    /// Binds `name`; the value must be ground.
    pub fn insert(&mut self, name: Arc<str>, value: Term) {
        debug_assert!(value.is_ground());
        self.0.insert(name, value);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Arc<str>, &Term)> + '_ {
        self.0.iter()
    }

    /// Keeps only the listed variables.
    pub fn restrict(&self, names: &BTreeSet<Arc<str>>) -> Bindings {
        Bindings(self.0.iter().filter(|(k, _)| names.contains(*k)).map(|(k, v)| (k.clone(), v.clone())).collect())
    }
}

impl FromIterator<(Arc<str>, Term)> for Bindings {
    fn from_iter<I: IntoIterator<Item = (Arc<str>, Term)>>(iter: I) -> Self {
        Bindings(iter.into_iter().collect())
    }
}

pub fn graph_union(a: &Graph, b: &Graph) -> Graph {
    a.union(b)
}

pub fn graph_subtract(a: &Graph, b: &Graph) -> Graph {
    a.subtract(b)
}

/// Grounds `pattern` under `binding`. Fails on the first unbound variable in
/// canonical (name) order.
pub fn substitute(pattern: &Graph, binding: &Bindings) -> Result<Graph, TermError> {
    if let Some(name) = pattern.variables().into_iter().find(|v| binding.get(v).is_none()) {
        return Err(TermError::UnboundVariable(name.to_string()));
    }
    Ok(pattern.substitute_partial(binding))
}

pub fn substitute_term(term: &Term, binding: &Bindings) -> Result<Term, TermError> {
    let mut vars = BTreeSet::new();
    term.collect_variables(&mut vars);
    if let Some(name) = vars.into_iter().find(|v| binding.get(v).is_none()) {
        return Err(TermError::UnboundVariable(name.to_string()));
    }
    Ok(term.substitute_partial(binding))
}
