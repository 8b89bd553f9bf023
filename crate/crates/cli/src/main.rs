//! `rideshare`: generate instances, run solvers, validate and compare.

mod compare;
mod run;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rideshare_core::factory::{gen_3partition_stop_scaled, RandomTreeSpec};
use rideshare_core::oracle::OracleBudget;
use rideshare_core::{
    gen_3partition_stop, gen_3partition_time, gen_random_tree, read_instance, read_solution, solution_metrics,
    validate_solution, write_instance, write_solution, Instance, ThreePartitionSpec,
};

use run::{Algo, Fail, Options, RunReport, CSV_HEADER, CSV_VERSION, EXIT_INTERNAL, EXIT_SPEC};

#[derive(Parser)]
#[command(name = "rideshare", version, about = "Driver-minimizing ridesharing solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated instance.
    Generate(GenerateArgs),
    /// Solve one instance and print a report row.
    Solve(SolveArgs),
    /// Check a solution file against an instance.
    Validate {
        instance: PathBuf,
        solution: PathBuf,
    },
    /// Run several solvers over a set of instances and print a CSV report.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    #[value(name = "3p-stop")]
    Stop,
    #[value(name = "3p-stop-scaled")]
    StopScaled,
    #[value(name = "3p-time")]
    Time,
    Random,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Number of triples (3-partition kinds).
    #[arg(long)]
    r: Option<u32>,
    /// Target triple sum (3-partition kinds).
    #[arg(long)]
    m: Option<u64>,
    /// Comma-separated integers, 3r of them (3-partition kinds).
    #[arg(long, value_delimiter = ',')]
    a: Vec<u64>,
    /// Number of trips (random kind).
    #[arg(long, default_value_t = 10)]
    trips: usize,
    /// Number of source nodes (random kind); defaults to the trip count.
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long, default_value_t = 3)]
    max_capacity: u32,
    #[arg(long, default_value_t = 0)]
    stop_min: u32,
    #[arg(long, default_value_t = 2)]
    stop_max: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolverArgs {
    /// EdgeSwap depth.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Largest instance the exact oracle accepts.
    #[arg(long, default_value_t = 12)]
    budget_trips: usize,
    /// Time limit of the exact oracle in seconds.
    #[arg(long, default_value_t = 60)]
    budget_secs: u64,
    /// Report solutions that fail validation instead of exiting with an error.
    #[arg(long)]
    allow_invalid: bool,
    /// Report zero wall time so output is byte-identical across runs.
    #[arg(long)]
    no_timing: bool,
}

impl SolverArgs {
    fn options(&self) -> Options {
        Options {
            k: self.k,
            budget: OracleBudget {
                max_trips: self.budget_trips,
                time_limit: Duration::from_secs(self.budget_secs),
            },
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, value_enum)]
    algo: Algo,
    /// Solution file to write.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the phase trace to standard error (phase solver only).
    #[arg(long)]
    trace: bool,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct CompareArgs {
    /// Glob pattern selecting instance files.
    pattern: String,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "phase,star-improve,exact")]
    algo: Vec<Algo>,
    /// CSV file to write; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
}

fn spec_error(e: impl std::fmt::Display) -> anyhow::Error {
    Fail::new(EXIT_SPEC, e.to_string()).into()
}

fn load_instance(path: &PathBuf) -> anyhow::Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    read_instance(&text).map_err(|e| spec_error(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn generate(args: GenerateArgs) -> anyhow::Result<u8> {
    let three = || -> anyhow::Result<ThreePartitionSpec> {
        let (Some(r), Some(m)) = (args.r, args.m) else {
            return Err(spec_error("spec: --r and --m are required for 3-partition kinds"));
        };
        ThreePartitionSpec::new(r, m, args.a.clone()).map_err(spec_error)
    };
    let inst = match args.kind {
        Kind::Stop => gen_3partition_stop(&three()?).map_err(spec_error)?,
        Kind::StopScaled => gen_3partition_stop_scaled(&three()?).map_err(spec_error)?,
        Kind::Time => gen_3partition_time(&three()?).map_err(spec_error)?,
        Kind::Random => gen_random_tree(&RandomTreeSpec {
            trips: args.trips,
            nodes: args.nodes.unwrap_or(args.trips),
            max_capacity: args.max_capacity,
            stop_limit: (args.stop_min, args.stop_max),
            seed: args.seed,
        })
        .map_err(spec_error)?,
    };
    write_out(args.out.as_ref(), &write_instance(&inst))?;
    eprintln!("trips={} vertices={}", inst.len(), inst.network().vertex_count());
    Ok(0)
}

fn solve(args: SolveArgs) -> anyhow::Result<u8> {
    let inst = load_instance(&args.instance)?;
    let (sol, trace, wall) = run::solve(&inst, args.algo, args.solver.options())?;
    if args.trace {
        if let Some(trace) = &trace {
            eprint!("{}", trace.lines());
        }
    }
    let name = args.instance.display().to_string();
    let row = RunReport::solved(&name, args.algo, &inst, &sol, (!args.solver.no_timing).then_some(wall));
    if row.valid != Some(true) && !args.solver.allow_invalid {
        let first = validate_solution(&inst, &sol).violations.first().map(ToString::to_string);
        return Err(Fail::new(EXIT_INTERNAL, format!("solver produced an invalid solution: {}", first.unwrap_or_default())).into());
    }
    if let Some(out) = &args.out {
        fs::write(out, write_solution(&sol)).with_context(|| format!("writing {}", out.display()))?;
    }
    println!("{CSV_VERSION}\n{CSV_HEADER}\n{}", row.csv());
    Ok(0)
}

fn validate(instance: PathBuf, solution: PathBuf) -> anyhow::Result<u8> {
    let inst = load_instance(&instance)?;
    let text = fs::read_to_string(&solution).with_context(|| format!("reading {}", solution.display()))?;
    let sol = read_solution(&text).map_err(|e| spec_error(format!("{}: {e}", solution.display())))?;
    let report = validate_solution(&inst, &sol);
    if report.valid {
        let m = solution_metrics(&inst, &sol)?;
        println!("valid drivers={} distance={} passengers={}", m.drivers, m.distance, sol.passenger_count());
        Ok(0)
    } else {
        println!("invalid");
        for v in &report.violations {
            println!("{v}");
        }
        Ok(1)
    }
}

fn compare(args: CompareArgs) -> anyhow::Result<u8> {
    let mut paths = Vec::new();
    for entry in glob::glob(&args.pattern).map_err(spec_error)? {
        paths.push(entry.context("listing instances")?.display().to_string());
    }
    paths.sort();
    let (csv, code) = compare::compare(
        &paths,
        &args.algo,
        args.solver.options(),
        !args.solver.no_timing,
        args.solver.allow_invalid,
    );
    write_out(args.out.as_ref(), &csv)?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Solve(a) => solve(a),
        Command::Validate { instance, solution } => validate(instance, solution),
        Command::Compare(a) => compare(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(e.downcast_ref::<Fail>().map_or(EXIT_SPEC, |f| f.code))
        }
    }
}
