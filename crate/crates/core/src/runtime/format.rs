//! Path listings: the compact s-expression form and a JSON Lines form that
//! keeps variants and bindings so a path can be replayed.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::n3::{parse_term, render_term, resolve_name, PrefixMap};
use crate::planner::{Path, Step};
use crate::term::{Bindings, Decimal, Graph, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Sexpr,
    Structured,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sexpr" => Ok(Format::Sexpr),
            "structured" | "json" | "jsonl" => Ok(Format::Structured),
            other => Err(format!("unknown format `{other}` (expected sexpr or structured)")),
        }
    }
}

/// `((a1 a2 ...) (p1 p2 ...)).`
pub fn sexpr_line(path: &Path, prefixes: &PrefixMap) -> String {
    let join =
        |terms: &mut dyn Iterator<Item = &Term>| terms.map(|t| render_term(t, prefixes)).collect::<Vec<_>>().join(" ");
    format!("(({}) ({})).", join(&mut path.action_ids()), join(&mut path.providers.iter()))
}

/// One JSON object per path; `bindings[i]` belongs to `actions[i]`.
#[derive(Debug, Serialize, Deserialize)]
struct StructuredPath {
    actions: Vec<String>,
    variants: Vec<String>,
    providers: Vec<String>,
    weight: String,
    bindings: Vec<BTreeMap<String, String>>,
}

// Terms are written with absolute IRIs so a line stands on its own.
fn absolute(term: &Term) -> String {
    render_term(term, &PrefixMap::new())
}

pub fn structured_line(path: &Path) -> String {
    let record = StructuredPath {
        actions: path.steps.iter().map(|s| absolute(&s.action)).collect(),
        variants: path.steps.iter().map(|s| s.variant.clone()).collect(),
        providers: path.providers.iter().map(absolute).collect(),
        weight: path.total_weight.to_string(),
        bindings: path
            .steps
            .iter()
            .map(|s| s.binding.iter().map(|(k, v)| (k.to_string(), absolute(v))).collect())
            .collect(),
    };
    serde_json::to_string(&record).expect("plain strings serialize")
}

/// One line per path, each newline-terminated.
pub fn format_paths(paths: &[Path], format: Format, prefixes: &PrefixMap) -> String {
    let mut out = String::new();
    for path in paths {
        match format {
            Format::Sexpr => out.push_str(&sexpr_line(path, prefixes)),
            Format::Structured => out.push_str(&structured_line(path)),
        }
        out.push('\n');
    }
    out
}

fn significant_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// The observable part of a path: action ids and providers.
pub type PathSummary = (Vec<Term>, Vec<Term>);

pub fn summarize(path: &Path) -> PathSummary {
    (path.action_ids().cloned().collect(), path.providers.clone())
}

fn parse_names(text: &str, prefixes: &PrefixMap) -> Result<Vec<Term>, String> {
    text.split_whitespace().map(|n| resolve_name(prefixes, n).map_err(|e| e.message)).collect()
}

/// Parses one s-expression path line.
pub fn parse_sexpr_line(line: &str, prefixes: &PrefixMap) -> Result<PathSummary, String> {
    let malformed = || format!("malformed path line `{line}`");
    let body = line.trim().strip_suffix('.').ok_or_else(malformed)?.trim_end();
    let body = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')).ok_or_else(malformed)?.trim();
    let rest = body.strip_prefix('(').ok_or_else(malformed)?;
    let (actions, rest) = rest.split_once(')').ok_or_else(malformed)?;
    let providers = rest.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(malformed)?;
    if actions.contains('(') || providers.contains(['(', ')']) {
        return Err(malformed());
    }
    Ok((parse_names(actions, prefixes)?, parse_names(providers, prefixes)?))
}

/// Parses an s-expression listing; blank lines and `#` comments are skipped.
pub fn parse_sexpr(text: &str, prefixes: &PrefixMap) -> Result<Vec<PathSummary>, String> {
    significant_lines(text).map(|(n, l)| parse_sexpr_line(l, prefixes).map_err(|e| format!("line {n}: {e}"))).collect()
}

fn term_from(text: &str) -> Result<Term, String> {
    parse_term(&PrefixMap::new(), text).map_err(|e| e.message)
}

/// Parses a JSON Lines listing back into replayable paths. Terminal states
/// are not stored and come back empty.
pub fn parse_structured(text: &str) -> Result<Vec<Path>, String> {
    significant_lines(text)
        .map(|(n, line)| {
            let at = |e: String| format!("line {n}: {e}");
            let record: StructuredPath = serde_json::from_str(line).map_err(|e| at(e.to_string()))?;
            if record.variants.len() != record.actions.len() || record.bindings.len() != record.actions.len() {
                return Err(at("actions, variants and bindings differ in length".into()));
            }
            let steps = record
                .actions
                .iter()
                .zip(record.variants)
                .zip(&record.bindings)
                .map(|((action, variant), binding)| {
                    let binding = binding
                        .iter()
                        .map(|(k, v)| Ok((k.as_str().into(), term_from(v)?)))
                        .collect::<Result<Bindings, String>>()?;
                    Ok(Step { action: term_from(action)?, variant, binding })
                })
                .collect::<Result<Vec<_>, String>>()
                .map_err(at)?;
            let providers = record.providers.iter().map(|p| term_from(p)).collect::<Result<_, _>>().map_err(at)?;
            let total_weight = Decimal::from_str(&record.weight).map_err(|e| at(e.to_string()))?;
            Ok(Path { steps, providers, total_weight, terminal_state: Graph::new() })
        })
        .collect()
}
