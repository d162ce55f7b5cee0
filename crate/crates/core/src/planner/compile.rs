//! Turns service-description statements into [`Action`]s and mutex
//! declarations.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{Action, Catalog, MutexDeclaration};
use crate::n3::{Document, Statement};
use crate::term::{Decimal, Graph, Literal, Term, Triple};
use crate::vocab::WST;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{subject} (line {line}): {message}")]
pub struct CompileError {
    pub subject: String,
    pub line: usize,
    pub message: String,
}

const ACTION_KEYS: [&str; 8] = ["variant", "from", "to", "precondition", "absent", "weight", "provider", "description"];
const MUTEX_KEYS: [&str; 2] = ["left", "right"];

fn wst_key(t: &Triple) -> Option<&str> {
    t.predicate.as_iri()?.strip_prefix(WST)
}

struct Fields<'a> {
    statement: &'a Statement,
    subject: &'a Term,
}

impl<'a> Fields<'a> {
    fn error(&self, message: impl Into<String>) -> CompileError {
        CompileError { subject: self.subject.to_string(), line: self.statement.position.line, message: message.into() }
    }

    fn all(&self, key: &str) -> Vec<&'a Term> {
        self.statement.triples().iter().filter(|t| wst_key(t) == Some(key)).map(|t| &t.object).collect()
    }

    fn at_most_one(&self, key: &str) -> Result<Option<&'a Term>, CompileError> {
        match self.all(key).as_slice() {
            [] => Ok(None),
            [one] => Ok(Some(*one)),
            _ => Err(self.error(format!("more than one wst:{key}"))),
        }
    }

    fn graph(&self, key: &str, required: bool) -> Result<Option<Graph>, CompileError> {
        match self.at_most_one(key)? {
            Some(Term::Graph(g)) => Ok(Some((**g).clone())),
            Some(other) => Err(self.error(format!("wst:{key} must be a quoted graph, found {other}"))),
            None if required => Err(self.error(format!("missing wst:{key}"))),
            None => Ok(None),
        }
    }

    fn text(&self, key: &str) -> Result<Option<String>, CompileError> {
        match self.at_most_one(key)? {
            Some(Term::Literal(Literal::Text(s))) => Ok(Some(s.to_string())),
            Some(other) => Err(self.error(format!("wst:{key} must be a string, found {other}"))),
            None => Ok(None),
        }
    }
}

fn compile_action(statement: &Statement) -> Result<Action, CompileError> {
    let subject = &statement.triples()[0].subject;
    let fields = Fields { statement, subject };
    if subject.as_iri().is_none() {
        return Err(fields.error("action id must be an IRI"));
    }
    for t in statement.triples() {
        if let Some(key) = wst_key(t) {
            if !ACTION_KEYS.contains(&key) {
                return Err(fields.error(format!("unexpected property wst:{key} in an action description")));
            }
        }
    }
    let from_state = fields.graph("from", true)?.unwrap_or_default();
    let to_state = fields.graph("to", true)?.unwrap_or_default();
    let mut preconditions = Graph::new();
    for term in fields.all("precondition") {
        match term {
            Term::Graph(g) => preconditions.extend(g.iter().cloned()),
            other => return Err(fields.error(format!("wst:precondition must be a quoted graph, found {other}"))),
        }
    }
    let mut absent_guards = Vec::new();
    for term in fields.all("absent") {
        match term {
            Term::Graph(g) => absent_guards.push((**g).clone()),
            other => return Err(fields.error(format!("wst:absent must be a quoted graph, found {other}"))),
        }
    }
    let weight = match fields.at_most_one("weight")? {
        Some(Term::Literal(Literal::Number(w))) if w.is_negative() => {
            return Err(fields.error(format!("negative weight {w}")));
        }
        Some(Term::Literal(Literal::Number(w))) => w.clone(),
        Some(other) => return Err(fields.error(format!("wst:weight must be a number, found {other}"))),
        None => Decimal::from(1),
    };

    let mut bound: BTreeSet<_> = from_state.variables();
    bound.extend(preconditions.variables());
    if let Some(free) = to_state.variables().into_iter().find(|v| !bound.contains(v)) {
        return Err(fields.error(format!("wst:to variable ?{free} is not bound by wst:from or wst:precondition")));
    }
    let provider = match fields.at_most_one("provider")? {
        Some(Term::Variable(v)) if !bound.contains(v) => {
            return Err(fields.error(format!("provider variable ?{v} is not bound by wst:from or wst:precondition")));
        }
        Some(p @ (Term::Variable(_) | Term::Iri(_))) => Some(p.clone()),
        Some(other) => return Err(fields.error(format!("wst:provider must be an IRI or a variable, found {other}"))),
        None => None,
    };

    Ok(Action {
        id: subject.clone(),
        variant: fields.text("variant")?.unwrap_or_default(),
        from_state,
        to_state,
        preconditions,
        absent_guards,
        weight,
        provider,
        description: fields.text("description")?,
    })
}

fn is_action_statement(statement: &Statement) -> bool {
    statement.triples().iter().any(|t| wst_key(t).is_some_and(|k| ACTION_KEYS.contains(&k)))
}

fn is_mutex_statement(statement: &Statement) -> bool {
    statement.triples().iter().any(|t| wst_key(t).is_some_and(|k| MUTEX_KEYS.contains(&k)))
}

/// One action per description statement, sorted by `(id, variant)`.
pub fn compile_actions(doc: &Document) -> Result<Catalog, CompileError> {
    let mut actions: Vec<Action> = Vec::new();
    for statement in doc.statements.iter().filter(|s| is_action_statement(s)) {
        let action = compile_action(statement)?;
        if actions.iter().any(|a| a.id == action.id && a.variant == action.variant) {
            return Err(CompileError {
                subject: action.id.to_string(),
                line: statement.position.line,
                message: format!("duplicate description for variant {:?}", action.variant),
            });
        }
        actions.push(action);
    }
    Ok(Catalog::new(actions))
}

/// `wst:mutex_1 wst:left { ... }; wst:right { ... } .` declarations.
pub fn compile_mutexes(doc: &Document) -> Result<Vec<MutexDeclaration>, CompileError> {
    let mut out = Vec::new();
    for statement in doc.statements.iter().filter(|s| is_mutex_statement(s)) {
        let subject = &statement.triples()[0].subject;
        let fields = Fields { statement, subject };
        if is_action_statement(statement) {
            return Err(fields.error("a statement cannot be both an action and a mutex"));
        }
        let left = fields.graph("left", true)?.unwrap_or_default();
        let right = fields.graph("right", true)?.unwrap_or_default();
        if left.is_empty() || right.is_empty() {
            return Err(fields.error("mutex sides must contain at least one triple"));
        }
        out.push(MutexDeclaration { id: subject.clone(), left, right });
    }
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}
