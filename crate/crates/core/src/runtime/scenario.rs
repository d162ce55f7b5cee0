//! Time-stepped scenario manifests and their replay.
//!
//! A manifest is line oriented:
//!
//! ```text
//! step T1
//! retract t1_retract.n3
//! assert t1_assert.n3
//! goal goal.n3
//! expect t1.paths
//! ```
//!
//! Retractions apply before assertions. Files are relative to the manifest.
//! A step without `goal` lines keeps the previous step's goals; `expect`
//! attaches to the `goal` line just above it.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path as FsPath, PathBuf};
use std::time::{Duration, Instant};

use super::format::{parse_sexpr, sexpr_line, summarize, PathSummary};
use super::workspace::{load_goals, read_document, LoadError, Workspace};
use crate::n3::{render_term, PrefixMap};
use crate::planner::{
    detect_conflicts, generate_paths, validate_path, ConflictReport, Goal, Path, PlanConfig, Validation,
};
use crate::term::Graph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ManifestError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ManifestError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoalEntry {
    pub file: PathBuf,
    pub expect: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScenarioStep {
    pub label: String,
    pub retracts: Vec<PathBuf>,
    pub asserts: Vec<PathBuf>,
    pub goals: Vec<GoalEntry>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScenarioManifest {
    pub steps: Vec<ScenarioStep>,
}

impl ScenarioManifest {
    /// Parses manifest text; relative paths are joined onto `base`.
    pub fn parse(text: &str, base: &FsPath) -> Result<ScenarioManifest, ManifestError> {
        let mut manifest = ScenarioManifest::default();
        let mut labels = BTreeSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let fail = |message: String| Err(ManifestError { line, message });
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let (directive, argument) = match content.split_once(char::is_whitespace) {
                Some((d, a)) => (d, a.trim()),
                None => (content, ""),
            };
            if argument.is_empty() {
                return fail(format!("`{directive}` needs an argument"));
            }
            if directive == "step" {
                if !labels.insert(argument.to_string()) {
                    return fail(format!("duplicate step label `{argument}`"));
                }
                manifest.steps.push(ScenarioStep { label: argument.to_string(), ..Default::default() });
                continue;
            }
            let Some(step) = manifest.steps.last_mut() else {
                return fail(format!("`{directive}` before the first `step`"));
            };
            let file = base.join(argument);
            if !file.is_file() {
                return fail(format!("no such file: {}", file.display()));
            }
            match directive {
                "assert" => step.asserts.push(file),
                "retract" => step.retracts.push(file),
                "goal" => step.goals.push(GoalEntry { file, expect: None }),
                "expect" => match step.goals.last_mut() {
                    Some(entry) if entry.expect.is_none() => entry.expect = Some(file),
                    Some(_) => return fail("goal already has an expectation".into()),
                    None => return fail("`expect` must follow a `goal` line in the same step".into()),
                },
                other => return fail(format!("unknown directive `{other}`")),
            }
        }
        Ok(manifest)
    }

    pub fn load(path: &FsPath) -> Result<ScenarioManifest, LoadError> {
        let text = std::fs::read_to_string(path).map_err(|e| LoadError::single(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(FsPath::new("."));
        ScenarioManifest::parse(&text, base).map_err(|e| LoadError::single(format!("{}:{e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expectation {
    pub file: PathBuf,
    pub missing: Vec<String>,
    pub unexpected: Vec<String>,
}

impl Expectation {
    pub fn met(&self) -> bool {
        self.missing.is_empty() && self.unexpected.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoalRecord {
    pub name: String,
    pub paths: Vec<Path>,
    pub truncated: bool,
    /// The previous step's paths for this goal, replayed in the new state.
    pub carried: Vec<(String, Validation)>,
    pub expectation: Option<Expectation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub label: String,
    pub goals: Vec<GoalRecord>,
    /// Only computed when more than one goal is active.
    pub conflicts: Option<ConflictReport>,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub steps: Vec<StepRecord>,
    pub final_workspace: Workspace,
}

impl Transcript {
    /// Every expectation met.
    pub fn success(&self) -> bool {
        self.steps.iter().flat_map(|s| &s.goals).filter_map(|g| g.expectation.as_ref()).all(Expectation::met)
    }

    /// Deterministic report; timing is left out.
    pub fn render(&self) -> String {
        let prefixes = &self.final_workspace.prefixes;
        let mut out = String::new();
        for step in &self.steps {
            let _ = writeln!(out, "step {}", step.label);
            for goal in &step.goals {
                let _ = writeln!(
                    out,
                    "  goal {}: {} path(s){}",
                    goal.name,
                    goal.paths.len(),
                    if goal.truncated { " (truncated)" } else { "" }
                );
                for path in &goal.paths {
                    let _ = writeln!(out, "    {}", sexpr_line(path, prefixes));
                }
                for (line, validation) in &goal.carried {
                    let _ = writeln!(out, "    previous {line} {validation}");
                }
                if let Some(e) = &goal.expectation {
                    let verdict = if e.met() { "met" } else { "NOT met" };
                    let _ = writeln!(out, "    expectation {verdict}");
                    for m in &e.missing {
                        let _ = writeln!(out, "      missing    {m}");
                    }
                    for u in &e.unexpected {
                        let _ = writeln!(out, "      unexpected {u}");
                    }
                }
            }
            if let Some(report) = &step.conflicts {
                let _ = write!(out, "{}", render_conflicts(report, &self.final_workspace));
            }
        }
        let _ = writeln!(out, "{}", if self.success() { "PASS" } else { "FAIL" });
        out
    }
}

pub fn render_conflicts(report: &ConflictReport, ws: &Workspace) -> String {
    let prefixes = &ws.prefixes;
    let mut out = String::new();
    if report.is_empty() {
        out.push_str("  conflicts: none\n");
    }
    for c in &report.mutex {
        let binding: Vec<String> =
            c.binding.iter().map(|(k, v)| format!("?{k}={}", render_term(v, prefixes))).collect();
        let _ = writeln!(
            out,
            "  mutex {} at index {} paths {:?} [{}]",
            render_term(&c.mutex, prefixes),
            c.index,
            c.paths,
            binding.join(" ")
        );
    }
    for i in &report.interference {
        let t = &i.triple;
        let _ = writeln!(
            out,
            "  interference: path {} step {} deletes `{} {} {}` needed by path {} step {}",
            i.deleter,
            i.index,
            render_term(&t.subject, prefixes),
            render_term(&t.predicate, prefixes),
            render_term(&t.object, prefixes),
            i.victim,
            i.victim_step
        );
    }
    out
}

#[derive(Debug, Clone)]
struct ActiveGoal {
    name: String,
    goal: Goal,
    expect: Option<PathBuf>,
}

fn goal_name(goal: &Goal, ws: &Workspace, file: &FsPath) -> String {
    match &goal.id {
        Some(id) => render_term(id, &ws.prefixes),
        None => file.display().to_string(),
    }
}

/// Ground facts of `files`; their prefixes are kept for rendering.
fn union_of(files: &[PathBuf], prefixes: &mut PrefixMap) -> Result<Graph, LoadError> {
    let mut g = Graph::new();
    for f in files {
        let doc = read_document(f).map_err(LoadError::single)?;
        if let Some(t) = doc.facts.iter().find(|t| !t.is_ground()) {
            return Err(LoadError::single(format!("{}: fact is not ground: {t}", f.display())));
        }
        prefixes.extend(doc.prefixes);
        g.extend(doc.facts);
    }
    Ok(g)
}

fn compare(expected: &[PathSummary], actual: &[Path], ws: &Workspace, file: PathBuf) -> Expectation {
    let expected: BTreeSet<&PathSummary> = expected.iter().collect();
    let actual_set: BTreeSet<PathSummary> = actual.iter().map(summarize).collect();
    let show = |s: &PathSummary| {
        let names =
            |ts: &[crate::term::Term]| ts.iter().map(|t| render_term(t, &ws.prefixes)).collect::<Vec<_>>().join(" ");
        format!("(({}) ({})).", names(&s.0), names(&s.1))
    };
    Expectation {
        file,
        missing: expected.iter().filter(|e| !actual_set.contains(**e)).map(|e| show(e)).collect(),
        unexpected: actual_set.iter().filter(|a| !expected.contains(a)).map(show).collect(),
    }
}

/// Replays every step against `initial`, planning each active goal.
pub fn replay_scenario(
    initial: &Workspace,
    manifest: &ScenarioManifest,
    config: PlanConfig,
) -> Result<Transcript, LoadError> {
    let mut ws = initial.clone();
    let mut active: Vec<ActiveGoal> = Vec::new();
    let mut previous: Vec<(String, Vec<Path>)> = Vec::new();
    let mut steps = Vec::new();

    for step in &manifest.steps {
        let started = Instant::now();
        let at = |e: String| LoadError::single(format!("step {}: {e}", step.label));
        let mut prefixes = ws.prefixes.clone();
        let additions = union_of(&step.asserts, &mut prefixes)?;
        let removals = union_of(&step.retracts, &mut prefixes)?;
        for entry in &step.goals {
            prefixes.extend(read_document(&entry.file).map_err(LoadError::single)?.prefixes);
        }
        ws = ws.assert_event(&additions, &removals).with_label(step.label.clone());
        ws.prefixes = prefixes;

        if !step.goals.is_empty() {
            active.clear();
            for entry in &step.goals {
                let goals = load_goals(&entry.file)?;
                if entry.expect.is_some() && goals.len() > 1 {
                    return Err(at(format!(
                        "{} declares several goals; an expectation needs exactly one",
                        entry.file.display()
                    )));
                }
                for goal in goals {
                    active.push(ActiveGoal {
                        name: goal_name(&goal, &ws, &entry.file),
                        goal,
                        expect: entry.expect.clone(),
                    });
                }
            }
        } else {
            for a in &mut active {
                a.expect = None;
            }
        }

        let background = ws.background();
        let state = ws.dynamic_state();
        let mut goals = Vec::new();
        for a in &active {
            let outcome = generate_paths(state, &a.goal, &ws.service_base, &background, &ws.rules, config)
                .map_err(|e| at(e.to_string()))?;
            let mut carried = Vec::new();
            if let Some((_, old)) = previous.iter().find(|(name, _)| *name == a.name) {
                for path in old {
                    let v = validate_path(path, state, &a.goal, &ws.service_base, &background, &ws.rules)
                        .map_err(|e| at(e.to_string()))?;
                    carried.push((sexpr_line(path, &ws.prefixes), v));
                }
            }
            let expectation = match &a.expect {
                Some(file) => {
                    let text = std::fs::read_to_string(file).map_err(|e| at(format!("{}: {e}", file.display())))?;
                    let expected =
                        parse_sexpr(&text, &ws.prefixes).map_err(|e| at(format!("{}: {e}", file.display())))?;
                    Some(compare(&expected, &outcome.paths, &ws, file.clone()))
                }
                None => None,
            };
            goals.push(GoalRecord {
                name: a.name.clone(),
                paths: outcome.paths,
                truncated: outcome.truncated,
                carried,
                expectation,
            });
        }

        let conflicts = if goals.len() > 1 {
            let best: Vec<Path> = goals.iter().filter_map(|g| g.paths.first().cloned()).collect();
            Some(
                detect_conflicts(&best, state, &ws.service_base, &ws.mutexes, &background, &ws.rules)
                    .map_err(|e| at(e.to_string()))?,
            )
        } else {
            None
        };

        previous = goals.iter().map(|g| (g.name.clone(), g.paths.clone())).collect();
        steps.push(StepRecord { label: step.label.clone(), goals, conflicts, elapsed: started.elapsed() });
    }
    Ok(Transcript { steps, final_workspace: ws })
}
