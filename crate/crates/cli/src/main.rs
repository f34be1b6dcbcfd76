//! `hlnet`: check, compose, instantiate, simulate and analyse models.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage, I/O or parse error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use hlnet_core::algebra::validate_structure;
use hlnet_core::analysis::{
    explore, ground, parse_predicate, place_invariants, transition_invariants, GroundedNet, Limits,
    ReachabilityGraph, TransitionSystem,
};
use hlnet_core::composition::{compose_all, Module};
use hlnet_core::instantiation::{instantiate, System};
use hlnet_core::io::{
    export_dot, load_system, parse_steps, print_module, print_run, print_system, read_document,
    DocumentBody, Exportable, Library, LoadError, ModelDocument, SystemDoc,
};
use hlnet_core::net::{Marking, SchematicNet};
use hlnet_core::runs::{compose_runs, simulate, validate_run_with, Run, RunCheck, SchedulingPolicy, Schedule};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Parser)]
#[command(name = "hlnet", version, about = "Modular high-level Petri nets with algebraic data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse model files and check them against the models they refer to.
    Check { files: Vec<PathBuf> },
    /// Compose modules left to right.
    Compose {
        #[arg(required = true, num_args = 2..)]
        modules: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Instantiate a module with a structure and print the resulting system.
    Instantiate {
        module: PathBuf,
        structure: PathBuf,
        /// Signature file; by default it is looked up next to the structure.
        #[arg(long)]
        sig: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Produce a distributed run of a system.
    Simulate {
        system: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Fire the steps of a script instead of choosing at random.
        #[arg(long)]
        script: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check that a run is a run of a system.
    ValidateRun {
        run: PathBuf,
        system: PathBuf,
        /// Accept runs that start from a reachable state other than the initial one.
        #[arg(long)]
        segment: bool,
    },
    /// Compose run segments left to right.
    ComposeRuns {
        #[arg(required = true, num_args = 2..)]
        runs: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Place and transition invariants of the grounded system.
    Invariants { system: PathBuf },
    /// Breadth-first state exploration.
    Reach {
        system: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        max_nodes: usize,
        #[arg(long, default_value_t = 1_000_000)]
        max_edges: usize,
        /// Marking predicate, e.g. `count(eating) >= 1 && !contains(free_tables, t1)`.
        #[arg(long)]
        pred: Option<String>,
        /// Explore the grounded place/transition net instead.
        #[arg(long)]
        grounded: bool,
    },
    /// Export a module, system or run for GraphViz.
    Export {
        #[arg(long, required = true)]
        dot: bool,
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

enum Failure {
    /// Exit code 1.
    Invalid(String),
    /// Exit code 2.
    Usage(String),
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Compose(_) | LoadError::Instantiation(_) | LoadError::Marking { .. } => {
                Failure::Invalid(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CliResult = Result<String, Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn invalid(e: impl ToString) -> Failure {
    Failure::Invalid(e.to_string())
}

fn dir_of(path: &Path) -> &Path {
    path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."))
}

fn read_module(path: &Path) -> Result<Module<SchematicNet>, Failure> {
    match read_document(path)?.body {
        DocumentBody::Module(m) => Ok(m),
        other => Err(usage(format!("{}: expected a module, found a {}", path.display(), kind(&other)))),
    }
}

fn read_run(path: &Path) -> Result<Run, Failure> {
    match read_document(path)?.body {
        DocumentBody::Run(r) => Ok(r),
        other => Err(usage(format!("{}: expected a run, found a {}", path.display(), kind(&other)))),
    }
}

fn kind(body: &DocumentBody) -> &'static str {
    match body {
        DocumentBody::Signature(_) => "signature",
        DocumentBody::Structure(_) => "structure",
        DocumentBody::Module(_) => "module",
        DocumentBody::System(_) => "system",
        DocumentBody::Run(_) => "run",
    }
}

fn emit(text: String, output: &Option<PathBuf>) -> CliResult {
    match output {
        Some(p) => {
            fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn check_document(path: &Path, doc: &ModelDocument) -> Result<Vec<String>, Failure> {
    let lib = || Library::load_dir(dir_of(path));
    let mut problems = Vec::new();
    match &doc.body {
        DocumentBody::Signature(_) => {}
        DocumentBody::Structure(s) => {
            let lib = lib()?;
            let sig = lib.signature(&s.signature)?;
            problems.extend(validate_structure(sig, s).iter().map(|v| v.to_string()));
        }
        DocumentBody::Module(m) => {
            if let Some(name) = &m.inner.signature {
                let lib = lib()?;
                let sig = lib.signature(name)?;
                problems.extend(m.inner.check(sig).iter().map(|d| d.to_string()));
            }
        }
        DocumentBody::System(sd) => {
            if let Err(e) = lib()?.system(sd) {
                match Failure::from(e) {
                    Failure::Invalid(msg) => problems.push(msg),
                    usage => return Err(usage),
                }
            }
        }
        DocumentBody::Run(r) => {
            if let Err(e) = r.inner.check_structure() {
                problems.push(e.to_string());
            }
        }
    }
    Ok(problems)
}

fn cmd_check(files: &[PathBuf]) -> CliResult {
    if files.is_empty() {
        return Err(usage("no files given"));
    }
    let mut out = String::new();
    let mut failed = false;
    for f in files {
        let doc = read_document(f)?;
        let problems = check_document(f, &doc)?;
        if problems.is_empty() {
            let _ = writeln!(out, "ok {} ({} {})", f.display(), doc.kind(), doc.name());
        } else {
            failed = true;
            for p in problems {
                let _ = writeln!(out, "error {}: {p}", f.display());
            }
        }
    }
    if failed {
        Err(Failure::Invalid(out.trim_end().to_string()))
    } else {
        Ok(out)
    }
}

fn cmd_compose(modules: &[PathBuf], output: &Option<PathBuf>) -> CliResult {
    let ms = modules.iter().map(|p| read_module(p)).collect::<Result<Vec<_>, _>>()?;
    let m = compose_all(&ms).map_err(invalid)?;
    emit(print_module(&m), output)
}

fn cmd_instantiate(module: &Path, structure: &Path, sig: &Option<PathBuf>, output: &Option<PathBuf>) -> CliResult {
    let m = read_module(module)?;
    let s = match read_document(structure)?.body {
        DocumentBody::Structure(s) => s,
        other => return Err(usage(format!("{}: expected a structure, found a {}", structure.display(), kind(&other)))),
    };
    let signature = match sig {
        Some(p) => match read_document(p)?.body {
            DocumentBody::Signature(s) => s,
            other => return Err(usage(format!("{}: expected a signature, found a {}", p.display(), kind(&other)))),
        },
        None => Library::load_dir(dir_of(structure))?.signature(&s.signature)?.clone(),
    };
    let sys = instantiate(Arc::new(m), Arc::new(signature), Arc::new(s)).map_err(invalid)?;
    let doc = SystemDoc {
        name: sys.name.clone(),
        signature: sys.signature.name.clone(),
        structure: sys.structure.name.clone(),
        modules: vec![sys.module.name.clone()],
        marking: Some(sys.initial.clone()),
    };
    emit(print_system(&doc), output)
}

fn cmd_simulate(system: &Path, seed: u64, steps: usize, script: &Option<PathBuf>, output: &Option<PathBuf>) -> CliResult {
    let sys = load_system(system)?;
    let policy = match script {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            let script = parse_steps(&text, &p.display().to_string()).map_err(usage)?;
            SchedulingPolicy {
                seed,
                step_limit: steps.min(script.len()),
                mode: Schedule::Script(script),
            }
        }
        None => SchedulingPolicy::random(seed, steps),
    };
    let run = simulate(&sys, &policy).map_err(invalid)?;
    emit(print_run(&run), output)
}

fn cmd_validate_run(run: &Path, system: &Path, segment: bool) -> CliResult {
    let r = read_run(run)?;
    let sys = load_system(system)?;
    let check = if segment { RunCheck::Segment } else { RunCheck::Complete };
    let violations = validate_run_with(&r, &sys, check);
    if violations.is_empty() {
        Ok(format!(
            "valid: run `{}` of system `{}` ({} conditions, {} events)\n",
            r.name,
            sys.name,
            r.inner.conditions.len(),
            r.inner.events.len()
        ))
    } else {
        let lines: Vec<String> = violations.iter().map(|v| format!("violation: {v}")).collect();
        Err(Failure::Invalid(lines.join("\n")))
    }
}

fn cmd_compose_runs(runs: &[PathBuf], output: &Option<PathBuf>) -> CliResult {
    let rs = runs.iter().map(|p| read_run(p)).collect::<Result<Vec<_>, _>>()?;
    let mut acc = rs[0].clone();
    for r in &rs[1..] {
        acc = compose_runs(&acc, r).map_err(invalid)?;
    }
    emit(print_run(&acc), output)
}

fn weighted_sum(weights: &[BigInt], names: &[String]) -> String {
    let mut out = String::new();
    for (w, n) in weights.iter().zip(names) {
        if w.is_zero() {
            continue;
        }
        let sign = if w.is_negative() { "-" } else { "+" };
        if out.is_empty() {
            if w.is_negative() {
                out.push('-');
            }
        } else {
            let _ = write!(out, " {sign} ");
        }
        if !w.abs().is_one() {
            let _ = write!(out, "{}*", w.abs());
        }
        out.push_str(n);
    }
    out
}

fn cmd_invariants(system: &Path) -> CliResult {
    let sys = load_system(system)?;
    let g = ground(&sys).map_err(invalid)?;
    let places: Vec<String> = g.places.iter().map(|(p, v)| format!("{p}({v})")).collect();
    let transitions: Vec<String> = g.transitions.iter().map(|(t, b)| format!("{t}{b}")).collect();
    let mut out = format!(
        "grounded net: {} places, {} transitions\n",
        g.places.len(),
        g.transitions.len()
    );
    let pinv = place_invariants(&g);
    let _ = writeln!(out, "place invariants: {}", pinv.len());
    for (k, i) in pinv.iter().enumerate() {
        let _ = writeln!(out, "  p{}: {} = {}", k + 1, weighted_sum(i, &places), g.weigh(i, &g.initial));
    }
    let tinv = transition_invariants(&g);
    let _ = writeln!(out, "transition invariants: {}", tinv.len());
    for (k, j) in tinv.iter().enumerate() {
        let _ = writeln!(out, "  t{}: {}", k + 1, weighted_sum(j, &transitions));
    }
    Ok(out)
}

fn report<S, L>(out: &mut String, g: &ReachabilityGraph<S, L>, marking: impl Fn(&S) -> Marking) {
    let _ = writeln!(out, "nodes: {}", g.nodes.len());
    let _ = writeln!(out, "edges: {}", g.edges.len());
    let _ = writeln!(out, "truncated: {}", g.truncated);
    let _ = writeln!(out, "deadlocks: {}", g.deadlocks.len());
    for &n in &g.deadlocks {
        let _ = writeln!(out, "  [{n}] {}", marking(&g.nodes[n]));
    }
}

fn cmd_reach(system: &Path, limits: Limits, pred: &Option<String>, grounded: bool) -> CliResult {
    let sys = load_system(system)?;
    let pred = pred.as_deref().map(parse_predicate).transpose().map_err(usage)?;
    let mut out = String::new();
    let hits = |out: &mut String, hits: &[usize], show: &dyn Fn(usize) -> String| {
        let _ = writeln!(out, "predicate hits: {}", hits.len());
        for &n in hits {
            let _ = writeln!(out, "  [{n}] {}", show(n));
        }
    };
    if grounded {
        let g: GroundedNet = ground(&sys).map_err(invalid)?;
        let rg = explore(&g, limits, pred.as_ref()).map_err(invalid)?;
        report(&mut out, &rg, |s| g.marking(s));
        if pred.is_some() {
            hits(&mut out, &rg.hits, &|n| TransitionSystem::marking(&g, &rg.nodes[n]).to_string());
        }
    } else {
        let rg = explore(&sys, limits, pred.as_ref()).map_err(invalid)?;
        report(&mut out, &rg, |m: &Marking| m.clone());
        if pred.is_some() {
            hits(&mut out, &rg.hits, &|n| rg.nodes[n].to_string());
        }
    }
    Ok(out)
}

fn cmd_export(file: &Path, output: &Option<PathBuf>) -> CliResult {
    let doc = read_document(file)?;
    let text = match &doc.body {
        DocumentBody::Module(m) => export_dot(Exportable::Module(m)),
        DocumentBody::Run(r) => export_dot(Exportable::Run(r)),
        DocumentBody::System(_) => {
            let sys: System = load_system(file)?;
            export_dot(Exportable::System(&sys))
        }
        other => return Err(usage(format!("cannot export a {}", kind(other)))),
    };
    emit(text, output)
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Check { files } => cmd_check(&files),
        Command::Compose { modules, output } => cmd_compose(&modules, &output),
        Command::Instantiate { module, structure, sig, output } => cmd_instantiate(&module, &structure, &sig, &output),
        Command::Simulate { system, seed, steps, script, output } => cmd_simulate(&system, seed, steps, &script, &output),
        Command::ValidateRun { run, system, segment } => cmd_validate_run(&run, &system, segment),
        Command::ComposeRuns { runs, output } => cmd_compose_runs(&runs, &output),
        Command::Invariants { system } => cmd_invariants(&system),
        Command::Reach { system, max_nodes, max_edges, pred, grounded } => {
            cmd_reach(&system, Limits { max_nodes, max_edges }, &pred, grounded)
        }
        Command::Export { dot: _, file, output } => cmd_export(&file, &output),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
