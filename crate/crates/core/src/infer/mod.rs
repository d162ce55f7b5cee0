//! Pattern matching over ground graphs and forward chaining to a fixpoint.

mod builtins;
mod closure;

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::term::{Bindings, Graph, Term, TermError, Triple};

pub use builtins::{eval_builtin, Builtin, BuiltinOutcome};
pub use closure::{entails, forward_close, Closure, Limits};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InferError {
    #[error("builtin triple cannot be evaluated, arguments still unbound: {0}")]
    NonEvaluableBuiltin(String),
    #[error("{builtin}: non-numeric argument {value}")]
    NonNumeric { builtin: String, value: String },
    #[error("{builtin}: {detail}")]
    BadArguments { builtin: String, detail: String },
    #[error("{builtin}: unbound subject")]
    UnboundSubject { builtin: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a builtin predicate")]
    NotABuiltin(String),
    #[error("rule firing limit of {0} exceeded")]
    StepLimit(usize),
    #[error("closure size limit of {0} triples exceeded")]
    SizeLimit(usize),
    #[error(transparent)]
    Term(#[from] TermError),
}

/// A conjunctive query: `pattern` must match `store`, and no graph in
/// `absent` may match under the resulting bindings.
#[derive(Debug, Clone, Copy)]
pub struct MatchProblem<'a> {
    pub pattern: &'a Graph,
    pub store: &'a Graph,
    pub absent: &'a [Graph],
}

/// Predicate-keyed view of a ground graph.
#[derive(Debug, Default)]
pub struct Index<'g> {
    by_predicate: HashMap<&'g Term, Vec<&'g Triple>>,
    all: Vec<&'g Triple>,
}

impl<'g> Index<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        let mut by_predicate: HashMap<&Term, Vec<&Triple>> = HashMap::new();
        for t in graph.iter() {
            by_predicate.entry(&t.predicate).or_default().push(t);
        }
        Index { by_predicate, all: graph.iter().collect() }
    }

    fn candidates(&self, predicate: &Term) -> &[&'g Triple] {
        if predicate.is_ground() {
            self.by_predicate.get(predicate).map(Vec::as_slice).unwrap_or(&[])
        } else {
            &self.all
        }
    }
}

/// Unifies a pattern term against a ground term, extending `binding`.
fn unify(pattern: &Term, ground: &Term, binding: &mut Bindings) -> bool {
    match pattern {
        Term::Variable(name) => match binding.get(name) {
            Some(bound) => bound == ground,
            None => {
                binding.insert(name.clone(), ground.clone());
                true
            }
        },
        Term::List(items) => match ground {
            Term::List(values) if values.len() == items.len() => {
                items.iter().zip(values.iter()).all(|(p, g)| unify(p, g, binding))
            }
            _ => false,
        },
        // Quoted graphs match by equality once bound variables are filled in.
        Term::Graph(g) if !g.is_ground() => ground.as_graph().is_some_and(|h| g.substitute_partial(binding) == *h),
        other => other == ground,
    }
}

fn unify_triple(pattern: &Triple, ground: &Triple, binding: &Bindings) -> Option<Bindings> {
    let mut next = binding.clone();
    (unify(&pattern.subject, &ground.subject, &mut next)
        && unify(&pattern.predicate, &ground.predicate, &mut next)
        && unify(&pattern.object, &ground.object, &mut next))
    .then_some(next)
}

fn bound_positions(t: &Triple, binding: &Bindings) -> usize {
    t.terms().into_iter().filter(|term| term.substitute_partial(binding).is_ground()).count()
}

/// Splits a pattern into store-matched triples and builtin triples.
pub(crate) fn split_builtins(pattern: &Graph) -> (Vec<&Triple>, Vec<&Triple>) {
    pattern.iter().partition(|t| Builtin::from_term(&t.predicate).is_none())
}

/// One conjunct with the index it must be matched against.
pub(crate) type Conjunct<'a> = (&'a Triple, &'a Index<'a>);

/// Enumerates solutions of `conjuncts` (then `builtins`) extending `binding`.
pub(crate) fn solve(
    conjuncts: &[Conjunct<'_>],
    builtins: &[&Triple],
    binding: Bindings,
    out: &mut BTreeSet<Bindings>,
) -> Result<(), InferError> {
    let mut remaining: Vec<usize> = (0..conjuncts.len()).collect();
    solve_rec(conjuncts, &mut remaining, builtins, binding, out)
}

fn solve_rec(
    conjuncts: &[Conjunct<'_>],
    remaining: &mut Vec<usize>,
    builtins: &[&Triple],
    binding: Bindings,
    out: &mut BTreeSet<Bindings>,
) -> Result<(), InferError> {
    if remaining.is_empty() {
        if let Some(done) = run_builtins(builtins, binding)? {
            out.insert(done);
        }
        return Ok(());
    }
    // Most-instantiated conjunct first; ties by position.
    let slot = (0..remaining.len())
        .max_by(|&a, &b| {
            bound_positions(conjuncts[remaining[a]].0, &binding)
                .cmp(&bound_positions(conjuncts[remaining[b]].0, &binding))
                .then(b.cmp(&a))
        })
        .expect("non-empty");
    let chosen = remaining.remove(slot);
    let (pattern, index) = conjuncts[chosen];
    let predicate = pattern.predicate.substitute_partial(&binding);
    for candidate in index.candidates(&predicate) {
        if let Some(next) = unify_triple(pattern, candidate, &binding) {
            solve_rec(conjuncts, remaining, builtins, next, out)?;
        }
    }
    remaining.insert(slot, chosen);
    Ok(())
}

/// Evaluates builtins in any order their arguments allow. Returns `None`
/// when a guard fails.
fn run_builtins(builtins: &[&Triple], mut binding: Bindings) -> Result<Option<Bindings>, InferError> {
    let mut pending: Vec<&Triple> = builtins.to_vec();
    while !pending.is_empty() {
        let ready = pending.iter().position(|t| {
            let builtin = Builtin::from_term(&t.predicate).expect("builtin triple");
            builtin.ready(&t.subject.substitute_partial(&binding), &t.object.substitute_partial(&binding))
        });
        let Some(i) = ready else {
            return Err(InferError::NonEvaluableBuiltin(pending[0].substitute_partial(&binding).to_string()));
        };
        let t = pending.remove(i);
        let outcome = eval_builtin(
            &t.predicate,
            &t.subject.substitute_partial(&binding),
            &t.object.substitute_partial(&binding),
        )?;
        match outcome {
            BuiltinOutcome::Holds(true) => {}
            BuiltinOutcome::Holds(false) => return Ok(None),
            BuiltinOutcome::Bind(name, value) => binding.insert(name, value),
        }
    }
    Ok(Some(binding))
}

/// Solutions of `pattern` against an already indexed store.
pub fn match_indexed(
    pattern: &Graph,
    index: &Index<'_>,
    absent: &[Graph],
    seed: &Bindings,
) -> Result<Vec<Bindings>, InferError> {
    let (plain, builtins) = split_builtins(pattern);
    let conjuncts: Vec<Conjunct<'_>> = plain.iter().map(|t| (*t, index)).collect();
    let mut found = BTreeSet::new();
    solve(&conjuncts, &builtins, seed.clone(), &mut found)?;
    let mut out = Vec::with_capacity(found.len());
    'solutions: for b in found {
        for guard in absent {
            let guard = guard.substitute_partial(&b);
            if !match_indexed(&guard, index, &[], &Bindings::new())?.is_empty() {
                continue 'solutions;
            }
        }
        out.push(b);
    }
    Ok(out)
}

/// All bindings under which the pattern holds in the store and every absent
/// guard has no solution; deduplicated and canonically sorted.
pub fn match_pattern(problem: MatchProblem<'_>) -> Result<Vec<Bindings>, InferError> {
    let index = Index::new(problem.store);
    match_indexed(problem.pattern, &index, problem.absent, &Bindings::new())
}
