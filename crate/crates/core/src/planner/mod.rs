//! Weighted state transition planning.
//!
//! An [`Action`] replaces its `from_state` with its `to_state` when its
//! preconditions hold and none of its absent guards match. Planning is a
//! depth-first enumeration of every action sequence that leads from the
//! current [`State`] to a state whose closure entails the [`Goal`].

mod compile;
mod conflict;
mod search;
mod validate;

use thiserror::Error;

use crate::infer::{self, Index, InferError, Limits};
use crate::n3::Rule;
use crate::term::{substitute, Bindings, Decimal, Graph, Term, TermError};

pub use compile::{compile_actions, compile_mutexes, CompileError};
pub use conflict::{detect_conflicts, ConflictReport, Interference, MutexConflict, MutexDeclaration};
pub use search::{generate_paths, PlanOutcome};
pub use validate::{validate_path, InvalidReason, Validation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error(transparent)]
    Infer(#[from] InferError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("unknown action {id} ({variant:?})")]
    UnknownAction { id: String, variant: String },
    #[error("state must be ground, found {0}")]
    NonGroundState(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Action {
    pub id: Term,
    pub variant: String,
    pub from_state: Graph,
    pub to_state: Graph,
    pub preconditions: Graph,
    pub absent_guards: Vec<Graph>,
    pub weight: Decimal,
    pub provider: Option<Term>,
    pub description: Option<String>,
}

impl Action {
    /// A weight-1 action with no guards or provider.
    pub fn new(id: Term, variant: impl Into<String>, from_state: Graph, to_state: Graph) -> Action {
        Action {
            id,
            variant: variant.into(),
            from_state,
            to_state,
            preconditions: Graph::new(),
            absent_guards: Vec::new(),
            weight: Decimal::from(1),
            provider: None,
            description: None,
        }
    }

    /// `from_state ∪ preconditions`, the pattern that selects bindings.
    pub fn trigger(&self) -> Graph {
        self.from_state.union(&self.preconditions)
    }

    pub fn provider_for(&self, binding: &Bindings) -> Option<Term> {
        match &self.provider {
            Some(Term::Variable(name)) => binding.get(name).cloned(),
            other => other.clone(),
        }
    }
}

/// Actions sorted by `(id, variant)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Catalog {
    actions: Vec<Action>,
}

impl Catalog {
    pub fn new(mut actions: Vec<Action>) -> Catalog {
        actions.sort_by(|a, b| (&a.id, &a.variant).cmp(&(&b.id, &b.variant)));
        Catalog { actions }
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn get(&self, id: &Term, variant: &str) -> Option<&Action> {
        self.actions.iter().find(|a| &a.id == id && a.variant == variant)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub dynamic: Graph,
    pub label: Option<String>,
}

impl State {
    pub fn new(dynamic: Graph) -> Result<State, PlanError> {
        if let Some(t) = dynamic.iter().find(|t| !t.is_ground()) {
            return Err(PlanError::NonGroundState(t.to_string()));
        }
        Ok(State { dynamic, label: None })
    }

    pub fn labelled(mut self, label: impl Into<String>) -> State {
        self.label = Some(label.into());
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Goal {
    pub id: Option<Term>,
    pub pattern: Graph,
    pub absent: Vec<Graph>,
}

impl Goal {
    pub fn new(pattern: Graph) -> Goal {
        Goal { id: None, pattern, absent: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub action: Term,
    pub variant: String,
    pub binding: Bindings,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub steps: Vec<Step>,
    /// Deduplicated, in order of first contribution; `care:Not_Needed` when
    /// no step contributes one.
    pub providers: Vec<Term>,
    pub total_weight: Decimal,
    pub terminal_state: Graph,
}

impl Path {
    pub(crate) fn sort_key(&self) -> (&Decimal, &[Step], &[Term]) {
        (&self.total_weight, &self.steps, &self.providers)
    }

    /// Builds a path from executed steps, deriving providers and weight.
    pub fn from_steps(steps: Vec<Step>, catalog: &Catalog, terminal_state: Graph) -> Result<Path, PlanError> {
        let mut providers: Vec<Term> = Vec::new();
        let mut total_weight = Decimal::zero();
        for step in &steps {
            let action = catalog.get(&step.action, &step.variant).ok_or_else(|| unknown(step))?;
            total_weight = &total_weight + &action.weight;
            if let Some(p) = action.provider_for(&step.binding) {
                if !providers.contains(&p) {
                    providers.push(p);
                }
            }
        }
        if providers.is_empty() {
            providers.push(Term::iri(crate::vocab::NOT_NEEDED));
        }
        Ok(Path { steps, providers, total_weight, terminal_state })
    }

    pub fn action_ids(&self) -> impl Iterator<Item = &Term> + '_ {
        self.steps.iter().map(|s| &s.action)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlanConfig {
    pub max_depth: usize,
    pub max_paths: usize,
    pub allow_state_revisit: bool,
}

impl Default for PlanConfig {
    fn default() -> Self {
        PlanConfig { max_depth: 8, max_paths: 1_000, allow_state_revisit: false }
    }
}

pub(crate) fn unknown(step: &Step) -> PlanError {
    PlanError::UnknownAction { id: step.action.to_string(), variant: step.variant.clone() }
}

/// Closure of a dynamic state together with the static background.
pub(crate) fn close_state(dynamic: &Graph, background: &Graph, rules: &[Rule]) -> Result<Graph, InferError> {
    Ok(infer::forward_close(&dynamic.union(background), rules, Limits::default())?.graph)
}

pub(crate) fn applicable_in(action: &Action, index: &Index<'_>) -> Result<Vec<Bindings>, InferError> {
    infer::match_indexed(&action.trigger(), index, &action.absent_guards, &Bindings::new())
}

pub(crate) fn goal_met(goal: &Goal, index: &Index<'_>) -> Result<bool, InferError> {
    Ok(!infer::match_indexed(&goal.pattern, index, &goal.absent, &Bindings::new())?.is_empty())
}

/// Bindings under which `action` can fire in `state`, checked against the
/// closure of the state plus background.
pub fn applicable(
    action: &Action,
    state: &State,
    background: &Graph,
    rules: &[Rule],
) -> Result<Vec<Bindings>, PlanError> {
    let closure = close_state(&state.dynamic, background, rules)?;
    Ok(applicable_in(action, &Index::new(&closure))?)
}

/// `(dynamic − from_state·b) ∪ to_state·b`.
pub fn apply(action: &Action, binding: &Bindings, state: &State) -> Result<State, PlanError> {
    let removed = substitute(&action.from_state, binding)?;
    let added = substitute(&action.to_state, binding)?;
    Ok(State { dynamic: state.dynamic.subtract(&removed).union(&added), label: None })
}
