//! `steinberg`: command-line checks for groupoid and Leavitt path algebras.
//!
//! Every command prints one JSON report on stdout. Exit status is 0 when the
//! checked property holds, 1 when it fails and 2 on unreadable or malformed
//! input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use steinberg_core::bridge;
use steinberg_core::error::Error;
use steinberg_core::graph::{Graph, GraphFile};
use steinberg_core::groupoid::{AlgebraElement, FiniteGroupoid, GroupoidFile, UnitSubset};
use steinberg_core::lpa::Lpa;
use steinberg_core::scalars::RingSpec;
use steinberg_core::suite::{self, Profile, SuiteOptions};

const SEED_VAR: &str = "STEINBERG_SEED";

#[derive(Parser)]
#[command(name = "steinberg", version, about = "Centralisers in Steinberg and Leavitt path algebras")]
struct Cli {
    /// Coefficient ring: int, rat or mod:<n>.
    #[arg(long, global = true, default_value = "rat")]
    ring: String,
    /// Seed for sampled checks; STEINBERG_SEED takes precedence.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Indent the JSON report.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Finite groupoids and their convolution algebras.
    #[command(subcommand)]
    Gpd(GpdCommand),
    /// Directed graphs.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Leavitt path algebras.
    #[command(subcommand)]
    Lpa(LpaCommand),
    /// The boundary-path groupoid of an acyclic graph.
    #[command(subcommand)]
    Bridge(BridgeCommand),
    /// Property suites.
    #[command(subcommand)]
    Suite(SuiteCommand),
}

#[derive(Args)]
struct GroupoidArg {
    /// Groupoid JSON file.
    #[arg(long)]
    groupoid: PathBuf,
}

#[derive(Args)]
struct GraphArg {
    /// Graph JSON file.
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Subcommand)]
enum GpdCommand {
    /// Check the groupoid axioms.
    Validate(GroupoidArg),
    /// Centraliser of the span of the given elements.
    Centraliser {
        #[command(flatten)]
        file: GroupoidArg,
        /// Element expression, e.g. `2*g12 - u1`; repeatable.
        #[arg(long = "span", required = true)]
        span: Vec<String>,
    },
    /// Compare C(A(U)) with A(Iso) + A(complement of U).
    VerifyTheorem {
        #[command(flatten)]
        file: GroupoidArg,
        /// ALL, NONE or a comma-separated list of unit names.
        #[arg(long, default_value = "ALL")]
        subset: String,
        /// Compute both sides even when the subset is not invariant.
        #[arg(long)]
        force: bool,
    },
    /// Is the quotient by the generated ideal injective, and is it injective on A(Iso)?
    CoreInjectivity {
        #[command(flatten)]
        file: GroupoidArg,
        /// Ideal generator expression; repeatable.
        #[arg(long = "gen")]
        generators: Vec<String>,
    },
}

#[derive(Subcommand)]
enum GraphCommand {
    /// Simple cycles and cycles without exit.
    Cycles(GraphArg),
}

#[derive(Subcommand)]
enum LpaCommand {
    /// Normal form of an expression.
    Normalize {
        #[command(flatten)]
        file: GraphArg,
        expr: String,
    },
    /// Product of two expressions.
    Mul {
        #[command(flatten)]
        file: GraphArg,
        x: String,
        y: String,
    },
    /// Compare "commutes with the diagonal" with "lies in the core".
    CentraliserCheck {
        #[command(flatten)]
        file: GraphArg,
        expr: String,
    },
    /// Does the element commute with every generator?
    IsCentral {
        #[command(flatten)]
        file: GraphArg,
        expr: String,
    },
    /// Is the whole algebra commutative?
    Commutative(GraphArg),
}

#[derive(Subcommand)]
enum BridgeCommand {
    /// Check that the map into the groupoid algebra is an injective homomorphism.
    VerifyIso {
        #[command(flatten)]
        file: GraphArg,
        /// Number of sampled pairs.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum SuiteCommand {
    /// Run all property suites.
    Run {
        /// quick or full.
        #[arg(long, default_value = "quick")]
        profile: String,
        /// Drop the correction terms of the rewrite rule; the path-algebra suites should fail.
        #[arg(long)]
        tamper: bool,
    },
}

/// A report and whether the checked property holds.
struct Outcome {
    holds: bool,
    report: Value,
}

impl Outcome {
    fn new(holds: bool, report: impl Serialize) -> Result<Self, String> {
        Ok(Outcome { holds, report: serde_json::to_value(report).map_err(|e| e.to_string())? })
    }
}

/// Formats a library error, drawing a caret under `input` for parse errors.
fn describe(e: Error, input: Option<&str>) -> String {
    match (e, input) {
        (Error::Parse(p), Some(text)) => format!("parse error at column {}:\n{}", p.column, p.render(text)),
        (e, _) => e.to_string(),
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn load_groupoid(path: &Path) -> Result<FiniteGroupoid, String> {
    let text = read(path)?;
    GroupoidFile::from_json(&text)
        .and_then(|f| f.to_groupoid())
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn load_graph(path: &Path) -> Result<Graph, String> {
    let text = read(path)?;
    GraphFile::from_json(&text)
        .and_then(|f| Graph::from_file(&f))
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn groupoid_elements(g: &FiniteGroupoid, ring: RingSpec, exprs: &[String]) -> Result<Vec<AlgebraElement>, String> {
    exprs.iter().map(|s| g.parse_element(ring, s).map_err(|e| describe(e, Some(s)))).collect()
}

fn parse_subset(g: &FiniteGroupoid, spec: &str) -> Result<UnitSubset, String> {
    match spec.trim() {
        "ALL" => Ok(g.all_units()),
        "NONE" => Ok(UnitSubset::empty()),
        list => {
            let mut members = Vec::new();
            for name in list.split(',').map(str::trim) {
                match g.index_of(name) {
                    Some(u) if g.is_unit(u) => members.push(u),
                    Some(_) => return Err(format!("`{name}` is not a unit")),
                    None => return Err(format!("unknown unit `{name}`")),
                }
            }
            g.unit_subset(members).map_err(|e| e.to_string())
        }
    }
}

fn run_gpd(cmd: GpdCommand, ring: RingSpec) -> Result<Outcome, String> {
    match cmd {
        GpdCommand::Validate(f) => {
            let report = load_groupoid(&f.groupoid)?.validation_report();
            Outcome::new(report.valid, report)
        }
        GpdCommand::Centraliser { file, span } => {
            let g = load_groupoid(&file.groupoid)?;
            let xs = groupoid_elements(&g, ring, &span)?;
            let c = g.centraliser_of_span(ring, &xs).map_err(|e| e.to_string())?;
            let basis: Vec<String> = c.basis().iter().map(|v| g.format_element(&g.element_of(ring, v))).collect();
            Outcome::new(true, json!({ "dim": c.dim(), "basis": basis, "is_subalgebra": g.is_subalgebra(&c) }))
        }
        GpdCommand::VerifyTheorem { file, subset, force } => {
            let g = load_groupoid(&file.groupoid)?;
            let u = parse_subset(&g, &subset)?;
            let report = g.verify_centraliser_theorem(&u, ring, force).map_err(|e| e.to_string())?;
            Outcome::new(report.holds, report)
        }
        GpdCommand::CoreInjectivity { file, generators } => {
            let g = load_groupoid(&file.groupoid)?;
            let xs = groupoid_elements(&g, ring, &generators)?;
            let report = g.core_injectivity_check(ring, &xs).map_err(|e| e.to_string())?;
            Outcome::new(report.agree, report)
        }
    }
}

fn run_graph(cmd: GraphCommand) -> Result<Outcome, String> {
    match cmd {
        GraphCommand::Cycles(f) => {
            let g = load_graph(&f.graph)?;
            let names = |cs: Vec<steinberg_core::graph::Cycle>| -> Vec<String> {
                cs.iter().map(|c| g.path_name(c.path())).collect()
            };
            Outcome::new(
                true,
                json!({
                    "cycles": names(g.simple_cycles()),
                    "without_exit": names(g.cycles_without_exit()),
                    "acyclic": g.is_acyclic(),
                }),
            )
        }
    }
}

fn parse_lpa(l: &Lpa, input: &str) -> Result<steinberg_core::lpa::LpaElement, String> {
    l.parse(input).map_err(|e| describe(e, Some(input)))
}

fn run_lpa(cmd: LpaCommand, ring: RingSpec) -> Result<Outcome, String> {
    let algebra = |f: &GraphArg| -> Result<Lpa, String> { Ok(Lpa::new(load_graph(&f.graph)?, ring)) };
    match cmd {
        LpaCommand::Normalize { file, expr } => {
            let l = algebra(&file)?;
            let x = parse_lpa(&l, &expr)?;
            Outcome::new(true, json!({ "normal_form": x.to_string(), "terms": x.len() }))
        }
        LpaCommand::Mul { file, x, y } => {
            let l = algebra(&file)?;
            let (a, b) = (parse_lpa(&l, &x)?, parse_lpa(&l, &y)?);
            let p = l.mul(&a, &b).map_err(|e| e.to_string())?;
            Outcome::new(true, json!({ "product": p.to_string(), "terms": p.len() }))
        }
        LpaCommand::CentraliserCheck { file, expr } => {
            let l = algebra(&file)?;
            let x = parse_lpa(&l, &expr)?;
            let report = l.centraliser_of_diagonal_check(&x).map_err(|e| e.to_string())?;
            Outcome::new(report.agree, report)
        }
        LpaCommand::IsCentral { file, expr } => {
            let l = algebra(&file)?;
            let x = parse_lpa(&l, &expr)?;
            let report = l.is_central(&x).map_err(|e| e.to_string())?;
            Outcome::new(report.central, report)
        }
        LpaCommand::Commutative(file) => {
            let report = algebra(&file)?.is_commutative();
            Outcome::new(report.commutative && report.agree, report)
        }
    }
}

fn run_bridge(cmd: BridgeCommand, ring: RingSpec, seed: u64) -> Result<Outcome, String> {
    match cmd {
        BridgeCommand::VerifyIso { file, samples } => {
            let g = load_graph(&file.graph)?;
            let report = bridge::verify_pi_iso(&g, ring, samples, seed).map_err(|e| e.to_string())?;
            Outcome::new(report.passes(), report)
        }
    }
}

fn run_suite(cmd: SuiteCommand, seed: u64) -> Result<Outcome, String> {
    match cmd {
        SuiteCommand::Run { profile, tamper } => {
            let profile: Profile = profile.parse().map_err(|e: Error| e.to_string())?;
            let report = suite::run(&SuiteOptions { seed, profile, tamper });
            Outcome::new(report.passed, report)
        }
    }
}

fn seed(flag: u64) -> Result<u64, String> {
    match std::env::var(SEED_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| format!("{SEED_VAR} must be a non-negative integer, got `{v}`")),
        Err(_) => Ok(flag),
    }
}

fn run(cli: Cli) -> Result<Outcome, String> {
    let ring: RingSpec = cli.ring.parse().map_err(|e: Error| e.to_string())?;
    let seed = seed(cli.seed)?;
    match cli.command {
        Command::Gpd(c) => run_gpd(c, ring),
        Command::Graph(c) => run_graph(c),
        Command::Lpa(c) => run_lpa(c, ring),
        Command::Bridge(c) => run_bridge(c, ring, seed),
        Command::Suite(c) => run_suite(c, seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let pretty = cli.pretty;
    match run(cli) {
        Ok(out) => {
            let text = if pretty {
                serde_json::to_string_pretty(&out.report)
            } else {
                serde_json::to_string(&out.report)
            };
            println!("{}", text.expect("reports serialize"));
            ExitCode::from(if out.holds { 0 } else { 1 })
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
