//! Loading workspaces from files, rendering paths and replaying scenarios.

mod format;
mod scenario;
mod workspace;

pub use format::{
    format_paths, parse_sexpr, parse_sexpr_line, parse_structured, sexpr_line, structured_line, summarize, Format,
    PathSummary,
};
pub use scenario::{
    render_conflicts, replay_scenario, Expectation, GoalEntry, GoalRecord, ManifestError, ScenarioManifest,
    ScenarioStep, StepRecord, Transcript,
};
pub use workspace::{goals_from_document, load_facts, load_goals, load_workspace, LoadError, Workspace};
