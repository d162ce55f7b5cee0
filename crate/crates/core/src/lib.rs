//! Knowledge-based carepath planning.
//!
//! The crate parses a Notation3 subset into ground facts and rules, closes
//! the facts under the rules, and plans over weighted state transitions:
//! actions whose from-state is replaced by their to-state when their
//! preconditions hold. On top of that sit path validation, lockstep conflict
//! detection and a small runtime that replays time-stepped scenarios.

pub mod infer;
pub mod n3;
pub mod planner;
pub mod runtime;
pub mod term;
pub mod vocab;

pub use infer::{entails, forward_close, match_pattern, Closure, InferError, Limits, MatchProblem};
pub use n3::{parse_document, serialize_document, Document, ParseError, PrefixMap, Rule};
pub use planner::{
    applicable, apply, compile_actions, detect_conflicts, generate_paths, validate_path, Action, Catalog,
    ConflictReport, Goal, Path, PlanConfig, PlanError, State, Step, Validation,
};
pub use term::{graph_subtract, graph_union, substitute, Bindings, Decimal, Graph, Literal, Term, Triple};
