//! Semi-naive forward chaining.
//!
//! Each round only considers rule instances that use at least one triple
//! derived in the previous round. For a premise with conjuncts `c0..cn`, the
//! round evaluates `n` variants; variant `j` matches `cj` against the delta,
//! conjuncts before `j` against the old facts and those after `j` against
//! everything, so every new instance is enumerated exactly once.

use std::collections::BTreeSet;

use super::{match_indexed, solve, split_builtins, Conjunct, Index, InferError};
use crate::n3::Rule;
use crate::term::{substitute, Bindings, Graph, Triple};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_firings: usize,
    pub max_triples: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_firings: 10_000, max_triples: 100_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    pub graph: Graph,
    /// Triples added on top of the input facts.
    pub derived: usize,
    /// Rule instances fired.
    pub firings: usize,
}

struct CompiledRule<'r> {
    plain: Vec<&'r Triple>,
    builtins: Vec<&'r Triple>,
    conclusion: &'r Graph,
}

pub fn forward_close(facts: &Graph, rules: &[Rule], limits: Limits) -> Result<Closure, InferError> {
    let compiled: Vec<CompiledRule<'_>> = rules
        .iter()
        .map(|r| {
            let (plain, builtins) = split_builtins(&r.premise);
            CompiledRule { plain, builtins, conclusion: &r.conclusion }
        })
        .collect();

    let mut all = facts.clone();
    let mut delta = facts.clone();
    let mut firings = 0usize;
    let mut first_round = true;

    while !delta.is_empty() || first_round {
        let old = all.subtract(&delta);
        let (all_ix, delta_ix, old_ix) = (Index::new(&all), Index::new(&delta), Index::new(&old));
        let mut fresh = Graph::new();

        for rule in &compiled {
            let mut solutions = BTreeSet::new();
            if rule.plain.is_empty() {
                if first_round {
                    solve(&[], &rule.builtins, Bindings::new(), &mut solutions)?;
                }
            } else {
                for j in 0..rule.plain.len() {
                    let conjuncts: Vec<Conjunct<'_>> = rule
                        .plain
                        .iter()
                        .enumerate()
                        .map(|(i, t)| {
                            let ix = match i.cmp(&j) {
                                std::cmp::Ordering::Less => &old_ix,
                                std::cmp::Ordering::Equal => &delta_ix,
                                std::cmp::Ordering::Greater => &all_ix,
                            };
                            (*t, ix)
                        })
                        .collect();
                    solve(&conjuncts, &rule.builtins, Bindings::new(), &mut solutions)?;
                }
            }
            for binding in &solutions {
                firings += 1;
                if firings > limits.max_firings {
                    return Err(InferError::StepLimit(limits.max_firings));
                }
                for t in substitute(rule.conclusion, binding)? {
                    if !all.contains(&t) {
                        fresh.insert(t);
                    }
                }
            }
        }

        first_round = false;
        if all.len() + fresh.len() > limits.max_triples {
            return Err(InferError::SizeLimit(limits.max_triples));
        }
        all.extend(fresh.iter().cloned());
        delta = fresh;
    }

    let derived = all.len() - facts.len();
    Ok(Closure { graph: all, derived, firings })
}

/// True iff `pattern` has a solution in the closure of `store` under `rules`.
pub fn entails(store: &Graph, rules: &[Rule], pattern: &Graph) -> Result<bool, InferError> {
    let closure = forward_close(store, rules, Limits::default())?;
    let index = Index::new(&closure.graph);
    Ok(!match_indexed(pattern, &index, &[], &Bindings::new())?.is_empty())
}
