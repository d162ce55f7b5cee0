//! Property bodies, shared by the proptest suites and the acceptance harness.

use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use super::gen::{self, Domain};
use super::oracle;
use wstl_core::n3::Document;
use wstl_core::runtime::{format_paths, Format, Workspace};
use wstl_core::{
    forward_close, generate_paths, parse_document, serialize_document, validate_path, Decimal, Graph, Limits,
    PlanConfig, Rule, State, Triple, Validation,
};

pub type Outcome = Result<(), TestCaseError>;

pub fn config() -> PlanConfig {
    PlanConfig { max_depth: 4, max_paths: usize::MAX, ..PlanConfig::default() }
}

fn plan(d: &Domain, state: &State) -> Vec<wstl_core::Path> {
    generate_paths(state, &d.goal, &d.catalog, &d.background, &d.rules, config()).unwrap().paths
}

pub fn closure_matches_naive(facts: &Graph, rules: &[Rule]) -> Outcome {
    let fast = forward_close(facts, rules, Limits::default()).unwrap();
    prop_assert_eq!(fast.graph, oracle::closure(facts, rules));
    Ok(())
}

pub fn planner_matches_brute_force(d: &Domain) -> Outcome {
    let paths = plan(d, &State::new(d.state.clone()).unwrap());
    let got: BTreeSet<_> = paths.iter().map(oracle::path_key).collect();
    prop_assert_eq!(got.len(), paths.len(), "duplicate paths");
    let expected = oracle::brute_force_paths(&d.state, &d.goal, &d.catalog, &d.background, &d.rules, 4);
    prop_assert_eq!(got, expected);
    Ok(())
}

pub fn document_round_trips(doc: &Document) -> Outcome {
    let text = serialize_document(doc);
    let back = parse_document(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
    prop_assert_eq!(&back, doc, "{}", text);
    Ok(())
}

/// Planning depends on the current state only, not on how it was reached.
pub fn markov_purity(d: &Domain, detour: &Graph) -> Outcome {
    let direct = State::new(d.state.clone()).unwrap();
    // add the detour, then take back what was not there before
    let via = State::new(d.state.union(detour).subtract(&detour.subtract(&d.state))).unwrap();
    prop_assert_eq!(&direct.dynamic, &via.dynamic);
    prop_assert_eq!(plan(d, &direct), plan(d, &via));
    Ok(())
}

pub fn emitted_paths_validate(d: &Domain) -> Outcome {
    let state = State::new(d.state.clone()).unwrap();
    for path in plan(d, &state) {
        let v = validate_path(&path, &state, &d.goal, &d.catalog, &d.background, &d.rules).unwrap();
        prop_assert_eq!(v, Validation::Valid);
    }
    Ok(())
}

pub fn weights_are_sums_and_non_decreasing(d: &Domain) -> Outcome {
    let paths = plan(d, &State::new(d.state.clone()).unwrap());
    for path in &paths {
        let sum = path
            .steps
            .iter()
            .fold(Decimal::zero(), |acc, s| &acc + &d.catalog.get(&s.action, &s.variant).unwrap().weight);
        prop_assert_eq!(&path.total_weight, &sum);
    }
    for pair in paths.windows(2) {
        prop_assert!(pair[0].total_weight <= pair[1].total_weight);
    }
    Ok(())
}

fn fact_file(triples: &[Triple]) -> String {
    let mut doc = Document::new();
    doc.prefixes = gen::prefixes();
    for t in triples {
        doc.push_facts(vec![t.clone()]);
    }
    let canonical = serialize_document(&doc);
    // canonical output is sorted; restore the requested statement order
    let (header, _) = canonical.split_once("\n\n").unwrap_or((&canonical, ""));
    let body: Vec<String> = triples
        .iter()
        .map(|t| {
            let mut one = Document::new();
            one.prefixes = gen::prefixes();
            one.push_facts(vec![t.clone()]);
            serialize_document(&one).split_once("\n\n").map(|(_, b)| b.trim().to_string()).unwrap_or_default()
        })
        .collect();
    format!("{header}\n\n{}\n", body.join("\n"))
}

/// Shuffling the statements of the fact file does not change the output.
pub fn fact_order_does_not_matter(d: &Domain, seed: u64) -> Outcome {
    let triples: Vec<Triple> = d.state.iter().chain(d.background.iter()).cloned().collect();
    let mut shuffled = triples.clone();
    // Fisher-Yates over a 64-bit LCG
    let mut x = seed | 1;
    for i in (1..shuffled.len()).rev() {
        x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        shuffled.swap(i, (x >> 33) as usize % (i + 1));
    }
    let run = |ts: &[Triple]| {
        let doc = parse_document(&fact_file(ts)).unwrap();
        let ws = Workspace::from_documents(&[doc], &[], &[]).unwrap();
        let out =
            generate_paths(ws.dynamic_state(), &d.goal, &d.catalog, &ws.background(), &d.rules, config()).unwrap();
        format_paths(&out.paths, Format::Structured, &ws.prefixes)
    };
    prop_assert_eq!(run(&triples), run(&shuffled));
    Ok(())
}

pub fn closure_is_idempotent(facts: &Graph, rules: &[Rule]) -> Outcome {
    let once = forward_close(facts, rules, Limits::default()).unwrap();
    let twice = forward_close(&once.graph, rules, Limits::default()).unwrap();
    prop_assert_eq!(&twice.graph, &once.graph);
    prop_assert_eq!(twice.derived, 0);
    prop_assert!(facts.is_subset(&once.graph));
    Ok(())
}

pub fn closure_is_monotone(small: &Graph, extra: &Graph, rules: &[Rule]) -> Outcome {
    let a = forward_close(small, rules, Limits::default()).unwrap();
    let b = forward_close(&small.union(extra), rules, Limits::default()).unwrap();
    prop_assert!(a.graph.is_subset(&b.graph));
    Ok(())
}
