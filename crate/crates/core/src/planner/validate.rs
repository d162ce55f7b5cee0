use std::fmt;

use super::{apply, close_state, goal_met, unknown, Catalog, Goal, Path, PlanError, State};
use crate::infer::{match_indexed, Index};
use crate::n3::Rule;
use crate::term::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InvalidReason {
    FromStateUnmatched,
    PreconditionFailed,
    AbsentGuardViolated,
    GoalUnmet,
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InvalidReason::FromStateUnmatched => "from-state unmatched",
            InvalidReason::PreconditionFailed => "precondition failed",
            InvalidReason::AbsentGuardViolated => "absent-guard violated",
            InvalidReason::GoalUnmet => "goal unmet at end",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validation {
    Valid,
    /// `step` is 1-based; a goal failure reports the last step (0 for an
    /// empty path).
    Invalid {
        step: usize,
        reason: InvalidReason,
    },
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validation::Valid)
    }
}

impl fmt::Display for Validation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Validation::Valid => f.write_str("valid"),
            Validation::Invalid { step, reason } => write!(f, "invalid at step {step}: {reason}"),
        }
    }
}

/// Replays `path` from `state`. Step bindings may be partial (paths read
/// from s-expression files carry none); missing variables are filled with
/// the first canonical solution.
pub fn validate_path(
    path: &Path,
    state: &State,
    goal: &Goal,
    catalog: &Catalog,
    background: &Graph,
    rules: &[Rule],
) -> Result<Validation, PlanError> {
    let actions = path
        .steps
        .iter()
        .map(|s| catalog.get(&s.action, &s.variant).ok_or_else(|| unknown(s)))
        .collect::<Result<Vec<_>, _>>()?;

    let mut current = State { dynamic: state.dynamic.clone(), label: None };
    for (k, (step, action)) in path.steps.iter().zip(actions).enumerate() {
        let closure = close_state(&current.dynamic, background, rules)?;
        let index = Index::new(&closure);
        let fail = |reason| Ok(Validation::Invalid { step: k + 1, reason });
        if match_indexed(&action.from_state, &index, &[], &step.binding)?.is_empty() {
            return fail(InvalidReason::FromStateUnmatched);
        }
        let trigger = action.trigger();
        if match_indexed(&trigger, &index, &[], &step.binding)?.is_empty() {
            return fail(InvalidReason::PreconditionFailed);
        }
        let solutions = match_indexed(&trigger, &index, &action.absent_guards, &step.binding)?;
        let Some(binding) = solutions.into_iter().next() else {
            return fail(InvalidReason::AbsentGuardViolated);
        };
        current = apply(action, &binding, &current)?;
    }
    let closure = close_state(&current.dynamic, background, rules)?;
    if !goal_met(goal, &Index::new(&closure))? {
        return Ok(Validation::Invalid { step: path.steps.len(), reason: InvalidReason::GoalUnmet });
    }
    Ok(Validation::Valid)
}
