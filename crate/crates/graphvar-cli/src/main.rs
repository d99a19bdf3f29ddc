//! Command-line front end for the `graphvar` library.
//!
//! Four subcommands cover the workflow end to end: `estimate` reads outcome
//! and edge files and prints dependence-aware confidence intervals, `solve`
//! and `brute-force` operate on instance files for the underlying 0-1
//! program, and `simulate` runs the Monte Carlo studies from a JSON config.
//!
//! Exit codes are stable so scripts can dispatch on them:
//!   0  success
//!   2  usage error (malformed flags, unknown subcommand; produced by clap)
//!   3  input error (unreadable or malformed files, bad config)
//!   4  the solver stopped before proving optimality
//!   5  a `--check` gate failed

mod estimate;
mod report;
mod simulate;
mod solve;

use clap::{Parser, Subcommand};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "graphvar",
    version,
    about = "Conservative variance estimation for dependent observations",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate a mean with dependence-aware conservative confidence intervals
    Estimate(estimate::EstimateArgs),
    /// Maximise an estimator over compatible graphs, reading an instance file
    Solve(solve::SolveArgs),
    /// Solve a small instance by exhaustive enumeration (cross-check path)
    BruteForce(solve::BruteForceArgs),
    /// Run a Monte Carlo coverage or consistency study from a JSON config
    Simulate(simulate::SimulateArgs),
}

/// Failure modes that map onto the documented exit codes.
pub(crate) enum Failure {
    /// Unreadable, malformed, or structurally invalid input. Exit code 3.
    Input(String),
    /// The branch-and-bound search hit a limit before closing the gap. Exit code 4.
    Solver(String),
    /// One or more `--check` gates failed. Exit code 5.
    Check(Vec<String>),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 3,
            Failure::Solver(_) => 4,
            Failure::Check(_) => 5,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Estimate(args) => estimate::run(args),
        Command::Solve(args) => solve::run_solve(args),
        Command::BruteForce(args) => solve::run_brute_force(args),
        Command::Simulate(args) => simulate::run(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Input(message) => eprintln!("error: {message}"),
                Failure::Solver(message) => eprintln!("error: {message}"),
                Failure::Check(messages) => {
                    for message in messages {
                        eprintln!("check failed: {message}");
                    }
                }
            }
            ExitCode::from(failure.exit_code())
        }
    }
}
