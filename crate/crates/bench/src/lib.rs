//! Fixture loading for the criterion benchmarks in `benches/`.

use wstl_core::runtime::Workspace;
use wstl_core::{parse_document, Goal, Graph};

pub const HOUSEHOLD: &str = include_str!("../../../fixtures/fall/household.n3");
pub const SERVICES: &str = include_str!("../../../fixtures/fall/services.n3");
const GOAL: &str = include_str!("../../../fixtures/fall/goal.n3");

const STEPS: [(&str, &str); 3] = [
    (include_str!("../../../fixtures/fall/t0.n3"), ""),
    (include_str!("../../../fixtures/fall/t1_assert.n3"), include_str!("../../../fixtures/fall/t1_retract.n3")),
    (include_str!("../../../fixtures/fall/t2_assert.n3"), include_str!("../../../fixtures/fall/t2_retract.n3")),
];

fn facts(text: &str) -> Graph {
    if text.is_empty() {
        return Graph::new();
    }
    parse_document(text).expect("fixture parses").facts
}

/// The fall workspace after steps `0..=step`.
pub fn fall_workspace(step: usize) -> Workspace {
    let base = parse_document(HOUSEHOLD).expect("fixture parses");
    let services = parse_document(SERVICES).expect("fixture parses");
    let mut ws = Workspace::from_documents(&[base], &[], &[services]).expect("fixture loads");
    for (assert, retract) in &STEPS[..=step] {
        ws = ws.assert_event(&facts(assert), &facts(retract));
    }
    ws
}

pub fn fall_goal() -> Goal {
    wstl_core::runtime::goals_from_document(&parse_document(GOAL).expect("fixture parses")).expect("goal").remove(0)
}
