//! Lockstep conflict detection between concurrent carepaths.
//!
//! Every path is simulated on its own from the shared start state. At each
//! time index the per-path states are unioned (a finished path keeps its
//! terminal state) and checked against the declared mutexes. Separately,
//! a triple deleted by one path's step `k` that another path's step `k + 1`
//! needs in its from-state is reported as deletion interference.

use std::collections::BTreeSet;

use super::{apply, close_state, unknown, Catalog, Path, PlanError, State};
use crate::infer::{match_indexed, Index};
use crate::n3::Rule;
use crate::term::{substitute, Bindings, Graph, Term, Triple};

/// Two patterns that must never hold together. Variables shared between
/// the sides join them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutexDeclaration {
    pub id: Term,
    pub left: Graph,
    pub right: Graph,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MutexConflict {
    pub index: usize,
    pub mutex: Term,
    pub binding: Bindings,
    /// Paths whose state at `index` holds part of the matched triples.
    pub paths: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Interference {
    /// Step index of the deletion.
    pub index: usize,
    pub deleter: usize,
    pub victim: usize,
    /// 1-based step of the victim that needs the triple.
    pub victim_step: usize,
    pub triple: Triple,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConflictReport {
    pub mutex: Vec<MutexConflict>,
    pub interference: Vec<Interference>,
}

impl ConflictReport {
    pub fn is_empty(&self) -> bool {
        self.mutex.is_empty() && self.interference.is_empty()
    }
}

struct Timeline {
    /// `states[k]` is the dynamic state after `k` steps.
    states: Vec<Graph>,
    /// Ground from/to per step.
    from: Vec<Graph>,
    to: Vec<Graph>,
}

impl Timeline {
    fn at(&self, k: usize) -> &Graph {
        &self.states[k.min(self.states.len() - 1)]
    }
}

fn simulate(path: &Path, state: &State, catalog: &Catalog) -> Result<Timeline, PlanError> {
    let mut current = State { dynamic: state.dynamic.clone(), label: None };
    let mut timeline = Timeline { states: vec![current.dynamic.clone()], from: Vec::new(), to: Vec::new() };
    for step in &path.steps {
        let action = catalog.get(&step.action, &step.variant).ok_or_else(|| unknown(step))?;
        timeline.from.push(substitute(&action.from_state, &step.binding)?);
        timeline.to.push(substitute(&action.to_state, &step.binding)?);
        current = apply(action, &step.binding, &current)?;
        timeline.states.push(current.dynamic.clone());
    }
    Ok(timeline)
}

pub fn detect_conflicts(
    paths: &[Path],
    state: &State,
    catalog: &Catalog,
    mutexes: &[MutexDeclaration],
    background: &Graph,
    rules: &[Rule],
) -> Result<ConflictReport, PlanError> {
    let timelines = paths.iter().map(|p| simulate(p, state, catalog)).collect::<Result<Vec<_>, _>>()?;
    let horizon = paths.iter().map(|p| p.steps.len()).max().unwrap_or(0);
    let mut report = ConflictReport::default();

    for k in 0..=horizon {
        if mutexes.is_empty() {
            break;
        }
        let mut union = Graph::new();
        for timeline in &timelines {
            union.extend(timeline.at(k).iter().cloned());
        }
        let closure = close_state(&union, background, rules)?;
        let index = Index::new(&closure);
        let mut found = BTreeSet::new();
        for mutex in mutexes {
            let joint = mutex.left.union(&mutex.right);
            for binding in match_indexed(&joint, &index, &[], &Bindings::new())? {
                let matched = joint.substitute_partial(&binding);
                let contributors = timelines
                    .iter()
                    .enumerate()
                    .filter(|(_, tl)| matched.iter().any(|t| tl.at(k).contains(t)))
                    .map(|(i, _)| i)
                    .collect();
                found.insert(MutexConflict { index: k, mutex: mutex.id.clone(), binding, paths: contributors });
            }
        }
        report.mutex.extend(found);
    }

    let mut interference = BTreeSet::new();
    for (a, deleter) in timelines.iter().enumerate() {
        for k in 1..=deleter.from.len() {
            let deleted = deleter.from[k - 1].subtract(&deleter.to[k - 1]);
            for (b, victim) in timelines.iter().enumerate() {
                if a == b || victim.from.len() < k + 1 {
                    continue;
                }
                for t in deleted.iter().filter(|t| victim.from[k].contains(t)) {
                    interference.insert(Interference {
                        index: k,
                        deleter: a,
                        victim: b,
                        victim_step: k + 1,
                        triple: t.clone(),
                    });
                }
            }
        }
    }
    report.interference = interference.into_iter().collect();
    Ok(report)
}
