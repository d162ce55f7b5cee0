use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use wstl_core::runtime::{
    format_paths, load_goals, load_workspace, parse_structured, render_conflicts, replay_scenario, sexpr_line, Format,
    ScenarioManifest, Workspace,
};
use wstl_core::{
    detect_conflicts, forward_close, generate_paths, parse_document, serialize_document, validate_path, Document, Goal,
    Limits, Path, PlanConfig,
};

#[derive(Parser)]
#[command(name = "wstl", version, about = "Plan carepaths over Notation3 knowledge with weighted state transitions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Syntax-check files and print their canonical serialization.
    Parse {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the triples the rules add to the facts.
    Infer {
        #[command(flatten)]
        kb: Knowledge,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate and print paths that reach the goal.
    Plan {
        #[command(flatten)]
        kb: Knowledge,
        #[arg(long)]
        goal: PathBuf,
        #[command(flatten)]
        search: Search,
        #[arg(long, default_value = "sexpr")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay structured paths against the current state and goal.
    Validate {
        #[command(flatten)]
        kb: Knowledge,
        #[arg(long)]
        goal: PathBuf,
        #[arg(long)]
        paths: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check concurrently executed paths for mutex and deletion conflicts.
    Conflicts {
        #[command(flatten)]
        kb: Knowledge,
        #[arg(long, num_args = 1.., required = true)]
        paths: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay a scenario manifest step by step.
    Replay {
        manifest: PathBuf,
        #[command(flatten)]
        kb: Knowledge,
        #[command(flatten)]
        search: Search,
        /// Print per-step timing to standard error.
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Knowledge {
    #[arg(long, num_args = 1..)]
    facts: Vec<PathBuf>,
    #[arg(long, num_args = 1..)]
    rules: Vec<PathBuf>,
    #[arg(long, num_args = 1..)]
    services: Vec<PathBuf>,
}

impl Knowledge {
    fn load(&self) -> Result<Workspace> {
        Ok(load_workspace(&self.facts, &self.rules, &self.services)?)
    }
}

#[derive(Args)]
struct Search {
    #[arg(long, default_value_t = PlanConfig::default().max_depth)]
    max_depth: usize,
    #[arg(long, default_value_t = PlanConfig::default().max_paths)]
    max_paths: usize,
}

impl Search {
    fn config(&self) -> PlanConfig {
        PlanConfig { max_depth: self.max_depth, max_paths: self.max_paths, ..PlanConfig::default() }
    }
}

fn emit(out: Option<&FsPath>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn single_goal(path: &FsPath) -> Result<Goal> {
    let mut goals = load_goals(path)?;
    if goals.len() != 1 {
        bail!("{}: declares {} goals, expected one", path.display(), goals.len());
    }
    Ok(goals.remove(0))
}

fn read_paths(files: &[PathBuf]) -> Result<Vec<Path>> {
    let mut paths = Vec::new();
    for file in files {
        let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
        paths.extend(parse_structured(&text).map_err(|e| anyhow!("{}: {e}", file.display()))?);
    }
    Ok(paths)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Parse { files, out } => {
            let mut text = String::new();
            for file in &files {
                let source = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
                let doc = parse_document(&source).map_err(|e| anyhow!("{}:{e}", file.display()))?;
                if files.len() > 1 {
                    text.push_str(&format!("# {}\n", file.display()));
                }
                text.push_str(&serialize_document(&doc));
            }
            emit(out.as_deref(), &text)?;
        }
        Command::Infer { kb, out } => {
            let ws = kb.load()?;
            let base = ws.data_base.union(&ws.knowledge);
            let closure = forward_close(&base, &ws.rules, Limits::default())?;
            let doc =
                Document { prefixes: ws.prefixes.clone(), facts: closure.graph.subtract(&base), ..Document::new() };
            emit(out.as_deref(), &serialize_document(&doc))?;
        }
        Command::Plan { kb, goal, search, format, out } => {
            let ws = kb.load()?;
            let goals = load_goals(&goal)?;
            let background = ws.background();
            let mut text = String::new();
            for g in &goals {
                let outcome =
                    generate_paths(ws.dynamic_state(), g, &ws.service_base, &background, &ws.rules, search.config())?;
                if goals.len() > 1 {
                    let name = g.id.as_ref().map(|id| id.to_string()).unwrap_or_default();
                    text.push_str(&format!("# goal {name}\n"));
                }
                text.push_str(&format_paths(&outcome.paths, format, &ws.prefixes));
                if outcome.truncated {
                    eprintln!("warning: more than {} paths; output truncated", search.max_paths);
                }
            }
            emit(out.as_deref(), &text)?;
        }
        Command::Validate { kb, goal, paths, out } => {
            let ws = kb.load()?;
            let goal = single_goal(&goal)?;
            let background = ws.background();
            let mut text = String::new();
            let mut all_valid = true;
            for path in read_paths(&[paths])? {
                let v = validate_path(&path, ws.dynamic_state(), &goal, &ws.service_base, &background, &ws.rules)?;
                all_valid &= v.is_valid();
                text.push_str(&format!("{} {v}\n", sexpr_line(&path, &ws.prefixes)));
            }
            emit(out.as_deref(), &text)?;
            if !all_valid {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Conflicts { kb, paths, out } => {
            let ws = kb.load()?;
            let paths = read_paths(&paths)?;
            let report = detect_conflicts(
                &paths,
                ws.dynamic_state(),
                &ws.service_base,
                &ws.mutexes,
                &ws.background(),
                &ws.rules,
            )?;
            emit(out.as_deref(), &render_conflicts(&report, &ws))?;
            if !report.is_empty() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Replay { manifest, kb, search, timing, out } => {
            let ws = kb.load()?;
            let manifest = ScenarioManifest::load(&manifest)?;
            let transcript = replay_scenario(&ws, &manifest, search.config())?;
            if timing {
                for step in &transcript.steps {
                    eprintln!("{}: {:.3} ms", step.label, step.elapsed.as_secs_f64() * 1e3);
                }
            }
            emit(out.as_deref(), &transcript.render())?;
            if !transcript.success() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
