//! Deliberately naive reference implementations: linear scans, no indexes,
//! no join ordering, no semi-naive deltas. Only the shared data types are
//! reused from the library.

use std::collections::{BTreeMap, BTreeSet};

use wstl_core::{Action, Catalog, Decimal, Goal, Graph, Rule, Term, Triple};

const MATH: &str = "http://www.w3.org/2000/10/swap/math#";
const NOT_NEEDED: &str = "http://example.org/care#Not_Needed";

pub type Assignment = BTreeMap<String, Term>;

pub fn resolve(term: &Term, a: &Assignment) -> Term {
    match term {
        Term::Variable(name) => a.get(&**name).cloned().unwrap_or_else(|| term.clone()),
        Term::List(items) => Term::list(items.iter().map(|t| resolve(t, a))),
        Term::Graph(g) => Term::graph(resolve_graph(g, a)),
        other => other.clone(),
    }
}

pub fn resolve_graph(g: &Graph, a: &Assignment) -> Graph {
    g.iter().map(|t| Triple::new(resolve(&t.subject, a), resolve(&t.predicate, a), resolve(&t.object, a))).collect()
}

fn unify(pattern: &Term, ground: &Term, a: &mut Assignment) -> bool {
    match pattern {
        Term::Variable(name) => match a.get(&**name) {
            Some(bound) => bound == ground,
            None => {
                a.insert(name.to_string(), ground.clone());
                true
            }
        },
        Term::List(items) => match ground {
            Term::List(values) => {
                items.len() == values.len() && items.iter().zip(values.iter()).all(|(p, g)| unify(p, g, a))
            }
            _ => false,
        },
        Term::Graph(_) => resolve(pattern, a) == *ground,
        _ => pattern == ground,
    }
}

fn builtin_name(t: &Triple) -> Option<&str> {
    t.predicate
        .as_iri()?
        .strip_prefix(MATH)
        .filter(|n| matches!(*n, "notGreaterThan" | "greaterThan" | "lessThan" | "notLessThan" | "sum"))
}

/// Evaluates a builtin whose arguments are bound; `None` when not ready.
fn eval(name: &str, s: &Term, o: &Term, a: &mut Assignment) -> Option<bool> {
    if name == "sum" {
        let Term::List(items) = s else { return Some(false) };
        let nums: Option<Vec<&Decimal>> = items.iter().map(Term::as_number).collect();
        let total = nums?.into_iter().fold(Decimal::zero(), |acc, n| &acc + n);
        return match o {
            Term::Variable(v) => {
                a.insert(v.to_string(), Term::number(total));
                Some(true)
            }
            other => Some(other.as_number() == Some(&total)),
        };
    }
    let (x, y) = (s.as_number()?, o.as_number()?);
    Some(match name {
        "notGreaterThan" => x <= y,
        "greaterThan" => x > y,
        "lessThan" => x < y,
        _ => x >= y,
    })
}

fn extend(plain: &[&Triple], facts: &Graph, a: Assignment, out: &mut Vec<Assignment>) {
    let Some((first, rest)) = plain.split_first() else {
        out.push(a);
        return;
    };
    for fact in facts.iter() {
        let mut next = a.clone();
        if unify(&first.subject, &fact.subject, &mut next)
            && unify(&first.predicate, &fact.predicate, &mut next)
            && unify(&first.object, &fact.object, &mut next)
        {
            extend(rest, facts, next, out);
        }
    }
}

/// All assignments under which `pattern` holds in `facts`.
pub fn solutions(pattern: &Graph, facts: &Graph) -> BTreeSet<Assignment> {
    let (builtins, plain): (Vec<&Triple>, Vec<&Triple>) = pattern.iter().partition(|t| builtin_name(t).is_some());
    let mut partial = Vec::new();
    extend(&plain, facts, Assignment::new(), &mut partial);
    let mut out = BTreeSet::new();
    'next: for mut a in partial {
        let mut pending = builtins.clone();
        while !pending.is_empty() {
            let before = pending.len();
            let mut i = 0;
            while i < pending.len() {
                let t = pending[i];
                let s = resolve(&t.subject, &a);
                let o = resolve(&t.object, &a);
                match eval(builtin_name(t).unwrap(), &s, &o, &mut a) {
                    Some(true) => {
                        pending.remove(i);
                    }
                    Some(false) => continue 'next,
                    None => i += 1,
                }
            }
            assert!(pending.len() < before, "oracle: builtin never becomes evaluable");
        }
        out.insert(a);
    }
    out
}

fn guarded(pattern: &Graph, absent: &[Graph], facts: &Graph) -> BTreeSet<Assignment> {
    solutions(pattern, facts)
        .into_iter()
        .filter(|a| absent.iter().all(|g| solutions(&resolve_graph(g, a), facts).is_empty()))
        .collect()
}

/// Repeats full rule application over the whole graph until nothing changes.
pub fn closure(facts: &Graph, rules: &[Rule]) -> Graph {
    let mut current = facts.clone();
    loop {
        let mut next = current.clone();
        for rule in rules {
            for a in solutions(&rule.premise, &current) {
                next.extend(resolve_graph(&rule.conclusion, &a));
            }
        }
        if next == current {
            return current;
        }
        current = next;
    }
}

pub fn goal_holds(goal: &Goal, state: &Graph, background: &Graph, rules: &[Rule]) -> bool {
    !guarded(&goal.pattern, &goal.absent, &closure(&state.union(background), rules)).is_empty()
}

/// (action id, variant, binding) per step, then providers and total weight.
pub type PathKey = (Vec<(Term, String, Assignment)>, Vec<Term>, Decimal);

fn moves(action: &Action, state: &Graph, background: &Graph, rules: &[Rule]) -> Vec<(Assignment, Graph)> {
    let world = closure(&state.union(background), rules);
    let trigger = action.from_state.union(&action.preconditions);
    guarded(&trigger, &action.absent_guards, &world)
        .into_iter()
        .map(|a| {
            let next =
                state.subtract(&resolve_graph(&action.from_state, &a)).union(&resolve_graph(&action.to_state, &a));
            (a, next)
        })
        .collect()
}

fn key(steps: &[(&Action, Assignment)]) -> PathKey {
    let mut providers = Vec::new();
    let mut weight = Decimal::zero();
    for (action, a) in steps {
        weight = &weight + &action.weight;
        if let Some(p) = &action.provider {
            let p = resolve(p, a);
            if !providers.contains(&p) {
                providers.push(p);
            }
        }
    }
    if providers.is_empty() {
        providers.push(Term::iri(NOT_NEEDED));
    }
    let steps = steps.iter().map(|(action, a)| (action.id.clone(), action.variant.clone(), a.clone())).collect();
    (steps, providers, weight)
}

/// Enumerates every executable sequence of at most `depth` steps and keeps
/// those that end in their first goal state without repeating a state.
pub fn brute_force_paths(
    state: &Graph,
    goal: &Goal,
    catalog: &Catalog,
    background: &Graph,
    rules: &[Rule],
    depth: usize,
) -> BTreeSet<PathKey> {
    // Every sequence is carried with its visited states.
    type Sequence<'c> = (Vec<(&'c Action, Assignment)>, Vec<Graph>);
    let mut frontier: Vec<Sequence<'_>> = vec![(Vec::new(), vec![state.clone()])];
    let mut all = Vec::new();
    for _ in 0..depth {
        let mut next_frontier = Vec::new();
        for (steps, states) in &frontier {
            let last = states.last().unwrap();
            for action in catalog.actions() {
                for (a, next) in moves(action, last, background, rules) {
                    let mut s = steps.clone();
                    s.push((action, a));
                    let mut v = states.clone();
                    v.push(next);
                    next_frontier.push((s, v));
                }
            }
        }
        all.extend(frontier);
        frontier = next_frontier;
    }
    all.extend(frontier);

    let mut out = BTreeSet::new();
    for (steps, states) in all {
        let distinct: BTreeSet<&Graph> = states.iter().collect();
        if distinct.len() != states.len() {
            continue;
        }
        let goal_at: Vec<bool> = states.iter().map(|s| goal_holds(goal, s, background, rules)).collect();
        if goal_at.last() == Some(&true) && !goal_at[..goal_at.len() - 1].contains(&true) {
            out.insert(key(&steps));
        }
    }
    out
}

pub fn path_key(path: &wstl_core::Path) -> PathKey {
    let steps = path
        .steps
        .iter()
        .map(|s| {
            let a = s.binding.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
            (s.action.clone(), s.variant.clone(), a)
        })
        .collect();
    (steps, path.providers.clone(), path.total_weight.clone())
}
