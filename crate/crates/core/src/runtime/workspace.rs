use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path as FsPath, PathBuf};

use crate::n3::{parse_document, Document, PrefixMap, Rule};
use crate::planner::{compile_actions, compile_mutexes, Catalog, Goal, MutexDeclaration, State};
use crate::term::{Graph, Term};
use crate::vocab::{self, WST};

/// One or more load failures, one line each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadError {
    pub errors: Vec<String>,
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.errors.join("\n"))
    }
}

impl std::error::Error for LoadError {}

impl LoadError {
    pub(crate) fn single(message: String) -> LoadError {
        LoadError { errors: vec![message] }
    }
}

/// The three knowledge partitions plus the dynamic view of the data base.
///
/// Commands never mutate a workspace; they return a new one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Workspace {
    pub prefixes: PrefixMap,
    /// Asserted facts, situation facts included.
    pub data_base: Graph,
    pub service_base: Catalog,
    pub mutexes: Vec<MutexDeclaration>,
    pub rules: Vec<Rule>,
    /// Non-rule facts from rule files (configuration, stored results).
    pub knowledge: Graph,
    pub dynamic_predicates: BTreeSet<Term>,
    dynamic_state: State,
}

impl Default for Workspace {
    fn default() -> Self {
        Workspace::new(PrefixMap::new(), Graph::new(), Catalog::default(), Vec::new(), Vec::new(), Graph::new())
    }
}

pub(crate) fn read_document(path: &FsPath) -> Result<Document, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_document(&text).map_err(|e| format!("{}:{e}", path.display()))
}

impl Workspace {
    pub fn new(
        prefixes: PrefixMap,
        data_base: Graph,
        service_base: Catalog,
        mutexes: Vec<MutexDeclaration>,
        rules: Vec<Rule>,
        knowledge: Graph,
    ) -> Workspace {
        let dynamic_predicates: BTreeSet<Term> = vocab::DYNAMIC_PREDICATES.iter().map(Term::iri).collect();
        let mut ws = Workspace {
            prefixes,
            data_base,
            service_base,
            mutexes,
            rules,
            knowledge,
            dynamic_predicates,
            dynamic_state: State { dynamic: Graph::new(), label: None },
        };
        ws.refresh_dynamic();
        ws
    }

    fn refresh_dynamic(&mut self) {
        let dynamic =
            self.data_base.iter().filter(|t| self.dynamic_predicates.contains(&t.predicate)).cloned().collect();
        self.dynamic_state = State { dynamic, label: self.dynamic_state.label.take() };
    }

    pub fn dynamic_state(&self) -> &State {
        &self.dynamic_state
    }

    /// Everything planning treats as fixed: non-dynamic data plus knowledge facts.
    pub fn background(&self) -> Graph {
        self.data_base.subtract(&self.dynamic_state.dynamic).union(&self.knowledge)
    }

    /// `data_base := (data_base − removals) ∪ additions`.
    pub fn assert_event(&self, additions: &Graph, removals: &Graph) -> Workspace {
        let mut next = self.clone();
        next.data_base = self.data_base.subtract(removals).union(additions);
        next.refresh_dynamic();
        next
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Workspace {
        self.dynamic_state.label = Some(label.into());
        self
    }

    /// Builds a workspace from parsed documents. Rules found in fact or
    /// service files are kept as rules.
    pub fn from_documents(
        facts: &[Document],
        rules: &[Document],
        services: &[Document],
    ) -> Result<Workspace, Vec<String>> {
        let mut errors = Vec::new();
        let mut prefixes = PrefixMap::new();
        let mut data_base = Graph::new();
        let mut all_rules = Vec::new();
        let mut knowledge = Graph::new();
        let mut actions = Vec::new();
        let mut mutexes = Vec::new();

        for doc in facts.iter().chain(rules).chain(services) {
            prefixes.extend(doc.prefixes.clone());
            all_rules.extend(doc.rules.iter().cloned());
        }
        for doc in facts {
            data_base.extend(doc.facts.iter().cloned());
        }
        for doc in rules {
            knowledge.extend(doc.facts.iter().cloned());
        }
        for doc in services {
            match compile_actions(doc) {
                Ok(catalog) => actions.extend(catalog.actions().iter().cloned()),
                Err(e) => errors.push(e.to_string()),
            }
            match compile_mutexes(doc) {
                Ok(m) => mutexes.extend(m),
                Err(e) => errors.push(e.to_string()),
            }
        }
        for t in data_base.iter().chain(knowledge.iter()).filter(|t| !t.is_ground()) {
            errors.push(format!("fact is not ground: {t}"));
        }
        let mut seen = BTreeSet::new();
        for a in &actions {
            if !seen.insert((a.id.clone(), a.variant.clone())) {
                errors.push(format!("{}: duplicate description for variant {:?}", a.id, a.variant));
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }
        mutexes.sort_by(|a: &MutexDeclaration, b| a.id.cmp(&b.id));
        Ok(Workspace::new(prefixes, data_base, Catalog::new(actions), mutexes, all_rules, knowledge))
    }
}

/// Loads the three partitions from files, collecting every error.
pub fn load_workspace(
    fact_files: &[PathBuf],
    rule_files: &[PathBuf],
    service_files: &[PathBuf],
) -> Result<Workspace, LoadError> {
    let mut errors = Vec::new();
    let mut read_all = |paths: &[PathBuf]| -> Vec<(PathBuf, Document)> {
        paths
            .iter()
            .filter_map(|p| match read_document(p) {
                Ok(doc) => Some((p.clone(), doc)),
                Err(e) => {
                    errors.push(e);
                    None
                }
            })
            .collect()
    };
    let facts = read_all(fact_files);
    let rules = read_all(rule_files);
    let services = read_all(service_files);
    if !errors.is_empty() {
        return Err(LoadError { errors });
    }
    let strip = |docs: Vec<(PathBuf, Document)>| docs.into_iter().map(|(_, d)| d).collect::<Vec<_>>();
    // Compile errors are attributed to their service file.
    for (path, doc) in &services {
        if let Err(e) = compile_actions(doc) {
            errors.push(format!("{}: {e}", path.display()));
        }
        if let Err(e) = compile_mutexes(doc) {
            errors.push(format!("{}: {e}", path.display()));
        }
    }
    if !errors.is_empty() {
        return Err(LoadError { errors });
    }
    Workspace::from_documents(&strip(facts), &strip(rules), &strip(services)).map_err(|errors| LoadError { errors })
}

/// Goals declared as `<id> wst:pattern { ... }; wst:absent { ... } .`
pub fn goals_from_document(doc: &Document) -> Result<Vec<Goal>, String> {
    let pattern_key = Term::iri(format!("{WST}pattern"));
    let absent_key = Term::iri(format!("{WST}absent"));
    let mut goals = Vec::new();
    for statement in &doc.statements {
        let triples = statement.triples();
        if !triples.iter().any(|t| t.predicate == pattern_key) {
            continue;
        }
        let id = triples[0].subject.clone();
        let mut goal = Goal { id: Some(id.clone()), pattern: Graph::new(), absent: Vec::new() };
        for t in triples {
            match (&t.predicate, &t.object) {
                (p, Term::Graph(g)) if *p == pattern_key => goal.pattern.extend(g.iter().cloned()),
                (p, Term::Graph(g)) if *p == absent_key => goal.absent.push((**g).clone()),
                (p, other) if *p == pattern_key || *p == absent_key => {
                    return Err(format!("goal {id}: {p} must be a quoted graph, found {other}"));
                }
                _ => {}
            }
        }
        goals.push(goal);
    }
    if goals.is_empty() {
        return Err("no goal found (expected `<id> wst:pattern { ... } .`)".into());
    }
    Ok(goals)
}

pub fn load_goals(path: &FsPath) -> Result<Vec<Goal>, LoadError> {
    let doc = read_document(path).map_err(LoadError::single)?;
    goals_from_document(&doc).map_err(|e| LoadError::single(format!("{}: {e}", path.display())))
}

/// Reads the ground facts of an `.n3` file.
pub fn load_facts(path: &FsPath) -> Result<Graph, LoadError> {
    let doc = read_document(path).map_err(LoadError::single)?;
    if let Some(t) = doc.facts.iter().find(|t| !t.is_ground()) {
        return Err(LoadError::single(format!("{}: fact is not ground: {t}", path.display())));
    }
    Ok(doc.facts)
}
