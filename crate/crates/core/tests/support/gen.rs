//! proptest strategies for small planning domains and random documents.

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use proptest::sample::select;

use wstl_core::n3::{Document, PrefixMap};
use wstl_core::{Action, Catalog, Decimal, Goal, Graph, Rule, Term, Triple};

pub const EX: &str = "http://example.org/ex#";
pub const CARE: &str = "http://example.org/care#";

pub fn ex(local: &str) -> Term {
    Term::iri(format!("{EX}{local}"))
}

pub fn care(local: &str) -> Term {
    Term::iri(format!("{CARE}{local}"))
}

#[derive(Debug, Clone)]
pub struct Domain {
    pub state: Graph,
    pub background: Graph,
    pub rules: Vec<Rule>,
    pub catalog: Catalog,
    pub goal: Goal,
}

fn entity() -> impl Strategy<Value = Term> {
    select(vec!["e0", "e1", "e2"]).prop_map(ex)
}

fn value() -> impl Strategy<Value = Term> {
    select(vec!["v0", "v1", "v2", "v3"]).prop_map(ex)
}

fn dynamic_predicate() -> impl Strategy<Value = Term> {
    select(vec!["status", "needs"]).prop_map(care)
}

fn dynamic_fact() -> impl Strategy<Value = Triple> {
    (entity(), dynamic_predicate(), value()).prop_map(|(s, p, o)| Triple::new(s, p, o))
}

fn link_fact() -> impl Strategy<Value = Triple> {
    (entity(), entity()).prop_map(|(s, o)| Triple::new(s, ex("link"), o))
}

/// Subject slot: `?x` or a constant entity.
fn subject_slot() -> impl Strategy<Value = Term> {
    prop_oneof![3 => Just(Term::var("x")), 1 => entity()]
}

/// Object slot: `?y` or a constant value.
fn object_slot() -> impl Strategy<Value = Term> {
    prop_oneof![1 => Just(Term::var("y")), 2 => value()]
}

fn dynamic_pattern() -> impl Strategy<Value = Triple> {
    (subject_slot(), dynamic_predicate(), object_slot()).prop_map(|(s, p, o)| Triple::new(s, p, o))
}

fn link_pattern() -> impl Strategy<Value = Triple> {
    (subject_slot(), prop_oneof![Just(Term::var("y")), entity()]).prop_map(|(s, o)| Triple::new(s, ex("link"), o))
}

fn graph_of(triples: Vec<Triple>) -> Graph {
    triples.into_iter().collect()
}

/// Replaces variables outside `bound` with constants so the action stays
/// range restricted.
fn ground_unbound(t: &Triple, bound: &BTreeSet<Arc<str>>) -> Triple {
    let fix = |term: &Term, fallback: Term| match term {
        Term::Variable(v) if !bound.contains(v) => fallback,
        other => other.clone(),
    };
    Triple::new(fix(&t.subject, ex("e0")), t.predicate.clone(), fix(&t.object, ex("v0")))
}

/// `?x status v<i>` to `?x status v<i+1>`, so that actions compose.
fn chain_action(index: usize) -> impl Strategy<Value = Action> {
    (0i64..=3, prop::option::of(Just(Term::var("x")))).prop_map(move |(weight, provider)| {
        let step = |i: usize| graph_of(vec![Triple::new(Term::var("x"), care("status"), ex(&format!("v{}", i % 4)))]);
        let mut a = Action::new(ex(&format!("a{index}")), "", step(index), step(index + 1));
        a.weight = Decimal::from(weight);
        a.provider = provider;
        a
    })
}

fn action(index: usize) -> impl Strategy<Value = Action> {
    prop_oneof![random_action(index).boxed(), chain_action(index).boxed()]
}

fn random_action(index: usize) -> impl Strategy<Value = Action> {
    (
        prop::collection::vec(dynamic_pattern(), 1..=2),
        prop::collection::vec(link_pattern(), 0..=1),
        prop::collection::vec(dynamic_pattern(), 0..=1),
        prop::collection::vec(dynamic_pattern(), 1..=2),
        0i64..=3,
        prop_oneof![Just(None), Just(Some(ex("prov_a"))), Just(Some(ex("prov_b"))), Just(Some(Term::var("x")))],
    )
        .prop_map(move |(from, pre, absent, to, weight, provider)| {
            let from = graph_of(from);
            let pre = graph_of(pre);
            let bound = from.union(&pre).variables();
            let to: Graph = to.iter().map(|t| ground_unbound(t, &bound)).collect();
            let provider = provider.map(|p| if p.is_variable() && !bound.contains("x") { ex("prov_a") } else { p });
            let mut a = Action::new(ex(&format!("a{index}")), "", from, to);
            a.preconditions = pre;
            a.absent_guards = absent.into_iter().map(|t| graph_of(vec![t])).collect();
            a.weight = Decimal::from(weight);
            a.provider = provider;
            a
        })
}

fn rule_templates() -> Vec<Rule> {
    let (a, b, s) = (Term::var("a"), Term::var("b"), Term::var("s"));
    let t = |s: &Term, p: Term, o: &Term| Triple::new(s.clone(), p, o.clone());
    vec![
        Rule::new(graph_of(vec![t(&a, ex("link"), &b)]), graph_of(vec![t(&b, ex("link"), &a)])).unwrap(),
        Rule::new(graph_of(vec![t(&a, care("status"), &ex("v0"))]), graph_of(vec![t(&a, care("needs"), &ex("v1"))]))
            .unwrap(),
        Rule::new(
            graph_of(vec![t(&a, ex("link"), &b), t(&b, care("status"), &s)]),
            graph_of(vec![t(&a, care("needs"), &s)]),
        )
        .unwrap(),
    ]
}

fn goal() -> impl Strategy<Value = Goal> {
    (
        prop::collection::vec(
            (prop_oneof![Just(Term::var("g")), entity()], dynamic_predicate(), value())
                .prop_map(|(s, p, o)| Triple::new(s, p, o)),
            1..=2,
        ),
        prop::collection::vec(dynamic_pattern(), 0..=1),
    )
        .prop_map(|(pattern, absent)| {
            // guards may only mention the goal's own variable
            let absent = absent.into_iter().map(|t| graph_of(vec![ground_unbound(&t, &BTreeSet::new())])).collect();
            Goal { id: None, pattern: graph_of(pattern), absent }
        })
}

/// Goal pattern lifted from one action effect, so that many domains have
/// at least one path.
fn effect_goal(actions: &[Action]) -> BoxedStrategy<Goal> {
    let effects: Vec<Triple> = actions.iter().flat_map(|a| a.to_state.iter().cloned()).collect();
    if effects.is_empty() {
        return goal().boxed();
    }
    select(effects)
        .prop_map(|t| {
            let lift = |term: &Term| if term.is_variable() { Term::var("g") } else { term.clone() };
            let object = if t.object.is_variable() { ex("v1") } else { t.object.clone() };
            Goal {
                id: None,
                pattern: graph_of(vec![Triple::new(lift(&t.subject), t.predicate.clone(), object)]),
                absent: vec![],
            }
        })
        .boxed()
}

/// At most 4 actions, 8 facts, 2 variables per action.
pub fn domain() -> impl Strategy<Value = Domain> {
    (1usize..=4)
        .prop_flat_map(|n| (0..n).map(action).collect::<Vec<_>>())
        .prop_flat_map(|actions| {
            let goal = prop_oneof![1 => goal(), 2 => effect_goal(&actions)];
            (
                prop::collection::vec(dynamic_fact(), 1..=4),
                prop::collection::vec(link_fact(), 0..=3),
                prop::collection::vec(select(rule_templates()), 0..=1),
                Just(actions),
                goal,
            )
        })
        .prop_map(|(state, background, rules, actions, goal)| Domain {
            state: graph_of(state).union(&graph_of(vec![Triple::new(ex("e0"), care("status"), ex("v0"))])),
            background: graph_of(background),
            rules,
            catalog: Catalog::new(actions),
            goal,
        })
}

pub fn facts(max: usize) -> impl Strategy<Value = Graph> {
    prop::collection::vec(prop_oneof![dynamic_fact(), link_fact()], 0..=max).prop_map(graph_of)
}

pub fn rules() -> impl Strategy<Value = Vec<Rule>> {
    prop::sample::subsequence(rule_templates(), 0..=3)
}

// Random documents.

pub fn prefixes() -> PrefixMap {
    [("ex".to_string(), EX.to_string()), ("care".to_string(), CARE.to_string())].into_iter().collect()
}

fn doc_iri() -> impl Strategy<Value = Term> {
    prop_oneof![
        6 => "[a-z][a-zA-Z0-9_]{0,5}".prop_map(|l| ex(&l)),
        2 => "[a-z][a-z0-9]{0,4}".prop_map(|l| care(&l)),
        1 => "[a-z]{1,6}".prop_map(|l| Term::iri(format!("http://other.org/{l}/x#y"))),
    ]
}

fn doc_literal() -> impl Strategy<Value = Term> {
    prop_oneof![
        (-10_000i64..10_000).prop_map(Term::number),
        (-100_000i64..100_000, 0u32..4).prop_map(|(m, scale)| {
            let text = format!("{}{}", if m < 0 { "-" } else { "" }, {
                let digits = format!("{:0>5}", m.unsigned_abs());
                let (int, frac) = digits.split_at(digits.len() - scale as usize);
                if frac.is_empty() {
                    int.to_string()
                } else {
                    format!("{int}.{frac}")
                }
            });
            Term::number(text.parse::<Decimal>().unwrap())
        }),
        "[ -~\t\n\u{e9}\u{4e2d}]{0,8}".prop_map(Term::text),
        any::<bool>().prop_map(Term::boolean),
    ]
}

fn ground_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![3 => doc_iri(), 2 => doc_literal()];
    leaf.prop_recursive(2, 8, 3, |inner| prop::collection::vec(inner, 0..=3).prop_map(Term::list))
}

fn pattern_term(vars: &'static [&'static str]) -> impl Strategy<Value = Term> {
    prop_oneof![2 => select(vars.to_vec()).prop_map(Term::var), 1 => doc_iri(), 1 => doc_literal()]
}

fn pattern_triple(vars: &'static [&'static str]) -> impl Strategy<Value = Triple> {
    (
        prop_oneof![select(vars.to_vec()).prop_map(Term::var), doc_iri()],
        prop_oneof![4 => doc_iri(), 1 => Just(Term::iri(wstl_core::vocab::RDF_TYPE))],
        pattern_term(vars),
    )
        .prop_map(|(s, p, o)| Triple::new(s, p, o))
}

fn quoted_graph() -> impl Strategy<Value = Term> {
    prop::collection::vec(pattern_triple(&["q", "r"]), 0..=2).prop_map(|ts| Term::graph(graph_of(ts)))
}

fn object() -> impl Strategy<Value = Term> {
    prop_oneof![5 => ground_term(), 1 => quoted_graph()]
}

fn statement() -> impl Strategy<Value = Vec<Triple>> {
    let subject = prop_oneof![4 => doc_iri(), 1 => prop::collection::vec(doc_iri(), 1..=2).prop_map(Term::list)];
    let predicate = prop_oneof![5 => doc_iri(), 1 => Just(Term::iri(wstl_core::vocab::RDF_TYPE))];
    (subject, prop::collection::vec((predicate, object()), 1..=3))
        .prop_map(|(s, pos)| pos.into_iter().map(|(p, o)| Triple::new(s.clone(), p, o)).collect())
}

fn rule() -> impl Strategy<Value = Rule> {
    (
        prop::collection::vec(pattern_triple(&["a", "b"]), 1..=3),
        prop::collection::vec(pattern_triple(&["a", "b"]), 0..=2),
    )
        .prop_map(|(premise, conclusion)| {
            let premise = graph_of(premise);
            let bound = premise.variables();
            let conclusion = conclusion.iter().map(|t| ground_unbound(t, &bound)).collect();
            Rule::new(premise, conclusion).unwrap()
        })
}

/// Documents whose fact statements have pairwise distinct subjects, so the
/// serializer's subject grouping reproduces them.
pub fn document() -> impl Strategy<Value = Document> {
    (prop::collection::vec(statement(), 0..=5), prop::collection::vec(rule(), 0..=2)).prop_map(|(statements, rules)| {
        let mut doc = Document::new();
        doc.prefixes = prefixes();
        let mut seen = BTreeSet::new();
        for triples in statements {
            if seen.insert(triples[0].subject.clone()) {
                doc.push_facts(triples);
            }
        }
        for r in rules {
            doc.push_rule(r);
        }
        doc
    })
}
