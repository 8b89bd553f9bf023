//! Solver dispatch and report rows.

use std::fmt;
use std::time::{Duration, Instant};

use clap::ValueEnum;
use rideshare_core::mcmp::{edge_swap, star_improve, SolverError};
use rideshare_core::oracle::{exact_min_drivers, OracleBudget, OracleError};
use rideshare_core::phase::{solve_phases_traced, PhaseError, PhaseTrace};
use rideshare_core::{solution_metrics, validate_solution, Instance, Solution};

pub const EXIT_SPEC: u8 = 2;
pub const EXIT_PRECONDITION: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;
pub const EXIT_INTERNAL: u8 = 5;

/// A failure carrying the process exit code it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fail {
    pub code: u8,
    pub message: String,
}

impl Fail {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for Fail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Fail {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Algo {
    StarImprove,
    EdgeSwap,
    Phase,
    Exact,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::StarImprove => "star-improve",
            Algo::EdgeSwap => "edge-swap",
            Algo::Phase => "phase",
            Algo::Exact => "exact",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub k: usize,
    pub budget: OracleBudget,
}

fn from_solver(e: SolverError) -> Fail {
    match e {
        SolverError::InfeasibleStar { .. } => {
            Fail::new(EXIT_PRECONDITION, format!("precondition: {e}"))
        }
        SolverError::InvalidDepth { .. } => Fail::new(EXIT_SPEC, e.to_string()),
        other => Fail::new(EXIT_INTERNAL, other.to_string()),
    }
}

fn from_phase(e: PhaseError) -> Fail {
    match e {
        PhaseError::Condition(k) => Fail::new(EXIT_PRECONDITION, format!("condition {k}")),
        PhaseError::Infeasible(_) | PhaseError::Relation(_) => Fail::new(EXIT_PRECONDITION, e.to_string()),
        other => Fail::new(EXIT_INTERNAL, other.to_string()),
    }
}

fn from_oracle(e: OracleError) -> Fail {
    if e.is_budget() {
        return Fail::new(EXIT_BUDGET, e.to_string());
    }
    match e {
        OracleError::NoSolution => Fail::new(EXIT_PRECONDITION, e.to_string()),
        other => Fail::new(EXIT_INTERNAL, other.to_string()),
    }
}

/// Runs one solver, returning the solution, the phase trace when there is
/// one, and the wall time spent.
pub fn solve(inst: &Instance, algo: Algo, opts: Options) -> Result<(Solution, Option<PhaseTrace>, Duration), Fail> {
    let start = Instant::now();
    let (sol, trace) = match algo {
        Algo::StarImprove => (star_improve(inst).map_err(from_solver)?, None),
        Algo::EdgeSwap => (edge_swap(inst, opts.k).map_err(from_solver)?, None),
        Algo::Phase => {
            let (sol, trace) = solve_phases_traced(inst).map_err(from_phase)?;
            (sol, Some(trace))
        }
        Algo::Exact => (exact_min_drivers(inst, opts.budget).map_err(from_oracle)?, None),
    };
    Ok((sol, trace, start.elapsed()))
}

pub const CSV_VERSION: &str = "# rideshare-report v1";
pub const CSV_HEADER: &str = "instance,algo,status,drivers,distance,passengers,wall_ms,valid,ratio";

/// One CSV row of a solve or compare run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub instance: String,
    pub algo: Algo,
    pub status: String,
    pub drivers: Option<usize>,
    pub distance: Option<u64>,
    pub passengers: Option<usize>,
    pub wall_ms: u128,
    pub valid: Option<bool>,
    pub ratio: Option<f64>,
    /// Exit code this row maps to; 0 for success.
    pub code: u8,
}

impl RunReport {
    pub fn failed(instance: &str, algo: Algo, fail: &Fail) -> Self {
        let status = match fail.code {
            EXIT_PRECONDITION => format!("skipped: {}", fail.message.trim_start_matches("precondition: ")),
            EXIT_BUDGET => "skipped: oracle budget exceeded".to_string(),
            _ => format!("error: {}", fail.message),
        };
        Self {
            instance: instance.to_string(),
            algo,
            status,
            drivers: None,
            distance: None,
            passengers: None,
            wall_ms: 0,
            valid: None,
            ratio: None,
            code: fail.code,
        }
    }

    pub fn solved(instance: &str, algo: Algo, inst: &Instance, sol: &Solution, wall: Option<Duration>) -> Self {
        let report = validate_solution(inst, sol);
        let distance = solution_metrics(inst, sol).ok().map(|m| m.distance);
        Self {
            instance: instance.to_string(),
            algo,
            status: if report.valid { "ok" } else { "invalid" }.to_string(),
            drivers: Some(sol.driver_count()),
            distance,
            passengers: Some(sol.passenger_count()),
            wall_ms: wall.map_or(0, |w| w.as_millis()),
            valid: Some(report.valid),
            ratio: None,
            code: if report.valid { 0 } else { EXIT_INTERNAL },
        }
    }

    pub fn csv(&self) -> String {
        fn cell<T: ToString>(v: Option<T>) -> String {
            v.map(|x| x.to_string()).unwrap_or_default()
        }
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.instance.replace(',', ";"),
            self.algo.name(),
            self.status.replace(',', ";"),
            cell(self.drivers),
            cell(self.distance),
            cell(self.passengers),
            self.wall_ms,
            cell(self.valid),
            cell(self.ratio.map(|r| format!("{r:.4}"))),
        )
    }
}
