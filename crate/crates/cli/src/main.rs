mod bench;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use gsp_core::flow::{is_valid, validate_schedule, CompletionVector, Schedule};
use gsp_core::generate::{gen_random, gen_three_partition};
use gsp_core::lp::{solve_lp, LpOptions, DEFAULT_TOL};
use gsp_core::oracle::brute_force_opt;
use gsp_core::pipeline;
use gsp_core::rounding::RoundingConfig;
use gsp_core::timeline::build_timeline;
use gsp_core::{CostKind, GridMode, GspError, Instance};
use serde_json::json;

const EXIT_PARSE: u8 = 2;
const EXIT_FALLBACK: u8 = 3;

#[derive(Parser)]
#[command(name = "gsp", version, about = "Preemptive scheduling with general cost functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Solve an instance: LP bound, rounding, and a validated schedule.
    Solve(SolveArgs),
    /// Compute the LP lower bound only.
    Bound(BoundArgs),
    /// Exhaustive optimum for small instances.
    Brute(BruteArgs),
    /// Check completion times or a schedule against an instance.
    Check(CheckArgs),
    /// Run a benchmark suite.
    Bench(BenchArgs),
}

#[derive(Subcommand)]
enum GenCommand {
    /// Jobs with iid uniform processing times and cost parameters.
    Random {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        p_max: u64,
        #[arg(long, default_value = "weighted-completion")]
        kind: CostKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path; standard output when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// 3-partition style instance with a common deadline `B`.
    ThreePartition {
        #[arg(long = "b")]
        bound: usize,
        #[arg(long, default_value_t = 1)]
        triples: usize,
        /// Draw items independently instead of from triples summing to B.
        #[arg(long)]
        infeasible: bool,
        /// Cost paid by each late job.
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct SolverFlags {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Time grid for the emitted schedule.
    #[arg(long, default_value = "unit")]
    grid: GridMode,
    /// Sampling scale in (0, 0.1]; defaults to an instance-dependent value.
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, default_value_t = 64)]
    max_phases: usize,
}

impl SolverFlags {
    fn config(&self, instance: &Instance) -> RoundingConfig {
        let mut cfg = RoundingConfig::for_instance(instance);
        cfg.seed = self.seed;
        cfg.tol = self.tol;
        cfg.grid = self.grid;
        cfg.max_phases = self.max_phases;
        if let Some(c) = self.c {
            cfg.c = c;
        }
        cfg
    }
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[command(flatten)]
    flags: SolverFlags,
    /// Also compute the brute-force optimum when the instance is small enough.
    #[arg(long)]
    brute: bool,
    /// Report path; standard output when omitted.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Schedule output path.
    #[arg(long)]
    schedule: Option<PathBuf>,
    /// Per-phase trace output path.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct BoundArgs {
    instance: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BruteArgs {
    instance: PathBuf,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    instance: PathBuf,
    /// Comma-separated completion times, one per job.
    #[arg(long, value_delimiter = ',')]
    completions: Option<Vec<usize>>,
    /// Schedule to validate.
    #[arg(long)]
    schedule: Option<PathBuf>,
    #[arg(long, default_value = "unit")]
    grid: GridMode,
}

#[derive(Args)]
struct BenchArgs {
    suite: PathBuf,
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            let parse = err
                .chain()
                .any(|cause| matches!(cause.downcast_ref::<GspError>(), Some(GspError::Parse(_))));
            ExitCode::from(if parse { EXIT_PARSE } else { 1 })
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Gen(gen) => cmd_gen(gen),
        Command::Solve(args) => cmd_solve(args),
        Command::Bound(args) => cmd_bound(args),
        Command::Brute(args) => cmd_brute(args),
        Command::Check(args) => cmd_check(args),
        Command::Bench(args) => bench::cmd_bench(&args.suite, args.out.as_deref(), args.threads),
    }
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text = read_text(path)?;
    Instance::from_json(&text).with_context(|| format!("loading instance {}", path.display()))
}

/// Writes `text` plus a newline to `path`, or to standard output.
pub(crate) fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, format!("{text}\n")).with_context(|| format!("writing {}", p.display())),
        None => print_stdout(text),
    }
}

/// Prints to standard output; a closed pipe is not an error.
pub(crate) fn print_stdout(text: &str) -> Result<()> {
    use std::io::Write;
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn pretty(value: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(value).expect("value serializes")
}

fn cmd_gen(gen: GenCommand) -> Result<u8> {
    let (instance, out) = match gen {
        GenCommand::Random { n, m, p_max, kind, seed, out } => {
            (gen_random(n as usize, m as usize, p_max as usize, kind, seed)?, out)
        }
        GenCommand::ThreePartition { bound, triples, infeasible, step, seed, out } => {
            (gen_three_partition(bound, triples, !infeasible, seed, step)?, out)
        }
    };
    emit(out.as_deref(), &instance.to_json())?;
    Ok(0)
}

fn cmd_solve(args: SolveArgs) -> Result<u8> {
    let instance = read_instance(&args.instance)?;
    let cfg = args.flags.config(&instance);
    let start = Instant::now();
    let mut solved = pipeline::solve(&instance, &cfg, args.brute)?;
    solved.report.wall_ms = Some(start.elapsed().as_millis() as u64);

    if let Some(path) = &args.schedule {
        emit(Some(path), &solved.outcome.schedule.to_json())?;
    }
    if let Some(path) = &args.trace {
        let trace = json!({ "format": 1, "phases": solved.outcome.trace });
        emit(Some(path), &pretty(&trace))?;
    }
    emit(args.report.as_deref(), &pretty(&solved.report))?;
    if solved.outcome.fallback_used {
        eprintln!(
            "warning: rounding hit the phase cap ({}); completion times come from the deterministic fallback",
            cfg.max_phases
        );
        return Ok(EXIT_FALLBACK);
    }
    Ok(0)
}

fn cmd_bound(args: BoundArgs) -> Result<u8> {
    let instance = read_instance(&args.instance)?;
    let lp = solve_lp(
        &instance,
        &LpOptions {
            tol: args.tol,
            ..LpOptions::default()
        },
    )?;
    let out = json!({
        "format": 1,
        "lp_value": lp.value,
        "cuts_added": lp.cuts_added,
        "x": lp.x.rows(),
    });
    emit(args.out.as_deref(), &pretty(&out))?;
    Ok(0)
}

fn cmd_brute(args: BruteArgs) -> Result<u8> {
    let instance = read_instance(&args.instance)?;
    let result = brute_force_opt(&instance)?;
    emit(args.out.as_deref(), &pretty(&result))?;
    Ok(0)
}

/// Prints a verdict; exits 0 when valid and 1 otherwise.
fn cmd_check(args: CheckArgs) -> Result<u8> {
    let instance = read_instance(&args.instance)?;
    let timeline = build_timeline(&instance, args.grid);
    let verdict = match (&args.schedule, &args.completions) {
        (None, None) => bail!("pass --completions, --schedule, or both"),
        (None, Some(c)) => {
            if c.len() != instance.n() {
                bail!("expected {} completion times, got {}", instance.n(), c.len());
            }
            let ok = is_valid(&instance, &timeline, &CompletionVector(c.clone()));
            json!({
                "format": 1,
                "valid": ok,
                "violation": if ok { None } else { Some("no schedule meets these completion times") },
            })
        }
        (Some(path), c) => {
            let schedule = Schedule::from_json(&read_text(path)?, instance.n())
                .with_context(|| format!("loading schedule {}", path.display()))?;
            let completions = CompletionVector(c.clone().unwrap_or_else(|| schedule.completion_times()));
            let report = validate_schedule(&instance, &timeline, &completions, &schedule);
            json!({
                "format": 1,
                "valid": report.ok(),
                "violation": report.violation.map(|v| v.to_string()),
            })
        }
    };
    let valid = verdict["valid"].as_bool().unwrap_or(false);
    print_stdout(&pretty(&verdict))?;
    Ok(if valid { 0 } else { 1 })
}
