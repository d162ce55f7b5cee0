use std::collections::HashMap;
use std::sync::Arc;

use super::{applicable_in, apply, close_state, goal_met, Catalog, Goal, Path, PlanConfig, PlanError, State, Step};
use crate::infer::Index;
use crate::n3::Rule;
use crate::term::Graph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanOutcome {
    pub paths: Vec<Path>,
    /// More paths existed than `max_paths`.
    pub truncated: bool,
}

struct Search<'a> {
    catalog: &'a Catalog,
    background: &'a Graph,
    rules: &'a [Rule],
    goal: &'a Goal,
    config: PlanConfig,
    closures: HashMap<Graph, Arc<Graph>>,
    found: Vec<Path>,
}

impl Search<'_> {
    fn closure(&mut self, dynamic: &Graph) -> Result<Arc<Graph>, PlanError> {
        if let Some(hit) = self.closures.get(dynamic) {
            return Ok(hit.clone());
        }
        let closure = Arc::new(close_state(dynamic, self.background, self.rules)?);
        self.closures.insert(dynamic.clone(), closure.clone());
        Ok(closure)
    }

    /// `ancestors` holds every state on the branch, the current one last.
    fn explore(&mut self, steps: &mut Vec<Step>, ancestors: &mut Vec<Graph>) -> Result<(), PlanError> {
        let current = ancestors.last().expect("branch has a root").clone();
        let closure = self.closure(&current)?;
        let index = Index::new(&closure);
        if goal_met(self.goal, &index)? {
            self.found.push(Path::from_steps(steps.clone(), self.catalog, current)?);
            return Ok(());
        }
        if steps.len() >= self.config.max_depth {
            return Ok(());
        }
        let state = State { dynamic: current, label: None };
        for action in self.catalog.actions() {
            for binding in applicable_in(action, &index)? {
                let next = apply(action, &binding, &state)?.dynamic;
                if !self.config.allow_state_revisit && ancestors.contains(&next) {
                    continue;
                }
                steps.push(Step { action: action.id.clone(), variant: action.variant.clone(), binding });
                ancestors.push(next);
                self.explore(steps, ancestors)?;
                ancestors.pop();
                steps.pop();
            }
        }
        Ok(())
    }
}

/// Enumerates every action sequence of at most `max_depth` steps that ends
/// in the first state on its branch whose closure entails the goal.
///
/// Paths are ordered by total weight, then step sequence, then providers.
pub fn generate_paths(
    state: &State,
    goal: &Goal,
    catalog: &Catalog,
    background: &Graph,
    rules: &[Rule],
    config: PlanConfig,
) -> Result<PlanOutcome, PlanError> {
    let mut search = Search { catalog, background, rules, goal, config, closures: HashMap::new(), found: Vec::new() };
    search.explore(&mut Vec::new(), &mut vec![state.dynamic.clone()])?;
    let mut paths = search.found;
    paths.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    let truncated = paths.len() > config.max_paths;
    paths.truncate(config.max_paths);
    Ok(PlanOutcome { paths, truncated })
}
