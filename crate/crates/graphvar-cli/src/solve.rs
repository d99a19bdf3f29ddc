//! `graphvar solve` and `graphvar brute-force`: run the exact solver, or the
//! exhaustive oracle, on an instance file written by `estimate
//! --dump-instance` or by hand.
//!
//! Instance format (line-oriented, `#` starts a comment):
//!   n <count>
//!   caps <c_1> ... <c_n>
//!   forced <i> <j>
//!   weight <i> <j> <w>
//! Vertices are 1-based in the file and in the reports here.

use clap::Args;
use graphvar::{ProblemInstance, SolverConfig, SolverResult};
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use crate::report::{emit_json, sig6, FileEcho, SolverSummary};
use crate::Failure;

#[derive(Args)]
pub struct SolveArgs {
    /// Instance file
    pub instance: PathBuf,

    /// Absolute optimality gap at which the search may stop
    #[arg(long, default_value_t = 1e-9)]
    pub gap: f64,

    /// Wall-clock limit in seconds
    #[arg(long)]
    pub time_limit: Option<f64>,

    /// Branch-and-bound node budget
    #[arg(long)]
    pub node_limit: Option<u64>,

    /// Solver threads (0 = library default)
    #[arg(long, default_value_t = 0)]
    pub threads: usize,

    /// Print the report as JSON instead of the human-readable summary
    #[arg(long)]
    pub json: bool,

    /// Also write the JSON report to this file
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct BruteForceArgs {
    /// Instance file
    pub instance: PathBuf,

    /// Print the report as JSON instead of the human-readable summary
    #[arg(long)]
    pub json: bool,

    /// Also write the JSON report to this file
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Serialize)]
struct SolveReport {
    command: &'static str,
    instance: FileEcho,
    n: usize,
    free_variables: usize,
    forced_edges: usize,
    solver: SolverSummary,
    /// Edges of the maximising matrix, 1-based to match the instance file.
    matrix: Vec<(usize, usize)>,
}

fn load_instance(path: &Path) -> Result<ProblemInstance, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    ProblemInstance::load(&text)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn report_for(
    command: &'static str,
    path: &Path,
    instance: &ProblemInstance,
    result: &SolverResult,
) -> Result<SolveReport, Failure> {
    let mut matrix: Vec<(usize, usize)> = result
        .best_matrix
        .edges()
        .iter()
        .map(|&(i, j)| (i + 1, j + 1))
        .collect();
    matrix.sort_unstable();
    Ok(SolveReport {
        command,
        instance: FileEcho::new(path)?,
        n: instance.n(),
        free_variables: instance.free_count(),
        forced_edges: instance.forced_edges().len(),
        solver: SolverSummary::from_result(result),
        matrix,
    })
}

fn print_human(report: &SolveReport) {
    println!(
        "instance: {} ({} vertices, {} free variables, {} forced edges)",
        report.instance.path, report.n, report.free_variables, report.forced_edges
    );
    println!("status      = {}", report.solver.status);
    println!("objective   = {}", sig6(report.solver.objective));
    println!("upper bound = {}", sig6(report.solver.upper_bound));
    println!("gap         = {}", sig6(report.solver.gap));
    println!(
        "explored {} nodes in {:.3}s",
        report.solver.nodes_explored, report.solver.wall_seconds
    );
    println!("matrix edges ({}):", report.matrix.len());
    if report.matrix.len() <= 100 {
        for (i, j) in &report.matrix {
            println!("  {i} {j}");
        }
    } else {
        // Keep terminals usable on big matrices; the full list is in --json.
        for (i, j) in report.matrix.iter().take(100) {
            println!("  {i} {j}");
        }
        println!("  ... {} more (use --json for the full list)", report.matrix.len() - 100);
    }
}

fn finish(report: &SolveReport, json: bool, output: Option<&Path>) -> Result<(), Failure> {
    let printed = emit_json(report, json, output)?;
    if !printed {
        print_human(report);
    }
    if !report.solver.is_optimal() {
        return Err(Failure::Solver(format!(
            "search stopped with status {} (gap {})",
            report.solver.status, report.solver.gap
        )));
    }
    Ok(())
}

pub fn run_solve(args: SolveArgs) -> Result<(), Failure> {
    let instance = load_instance(&args.instance)?;
    let config = SolverConfig {
        gap_tolerance: args.gap,
        time_limit: args.time_limit.map(Duration::from_secs_f64),
        node_limit: args.node_limit,
        threads: args.threads,
    };
    let result = graphvar::solve(&instance, &config);
    let report = report_for("solve", &args.instance, &instance, &result)?;
    finish(&report, args.json, args.output.as_deref())
}

pub fn run_brute_force(args: BruteForceArgs) -> Result<(), Failure> {
    let instance = load_instance(&args.instance)?;
    let result = graphvar::brute_force(&instance).map_err(|e| match e {
        graphvar::solver::SolverError::TooLargeForBruteForce { free, cap } => {
            Failure::Input(format!(
                "{}: instance has {free} free variables, over the brute-force cap \
                 of {cap}; use `graphvar solve` instead",
                args.instance.display()
            ))
        }
    })?;
    let report = report_for("brute-force", &args.instance, &instance, &result)?;
    finish(&report, args.json, args.output.as_deref())
}
