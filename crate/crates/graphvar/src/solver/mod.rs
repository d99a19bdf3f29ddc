//! Exact maximisation of the variance estimators over compatible matrices.
//!
//! The optimisation is a maximum-weight degree-constrained subgraph problem
//! with forced edges: choose upper-triangular 0-1 variables to maximise
//! `Σ w_ij a_ij` subject to per-vertex degree caps, with the observed edges
//! fixed to 1. [`solve`] runs an exact branch-and-bound:
//!
//! * presolve drops free non-positive weights (they can never help and only
//!   consume degree budget) and splits the rest into connected components;
//! * each component gets an exact LP-relaxation bound at the root, computed
//!   combinatorially (see [`flow`]) together with dual multipliers;
//! * odd-set cuts derived from the half-integral LP support tighten the
//!   root bound, and the resulting dual values price every search node in
//!   O(1) incrementally;
//! * branching follows weight times root-LP fractionality, ties broken
//!   lexicographically, include branch first.
//!
//! Pruning compares bounds against the incumbent with no slack, so an
//! exhausted search is exact; the configured gap tolerance is used for
//! early termination only. [`brute_force`] is the independent oracle for
//! small instances and shares nothing with the branch-and-bound beyond the
//! instance type and the final objective recomputation.

mod bnb;
mod brute;
mod fastpath;
mod flow;
mod instance;

use std::fmt;
use std::time::Duration;

use thiserror::Error;

use crate::data::AdjacencyMatrix;
use crate::numeric::CompensatedSum;

pub use fastpath::max_v2_fast_path;
pub use instance::{build_v1_instance, build_v2_instance, InstanceError, ProblemInstance};

/// Free-variable cap for the brute-force oracle: 28 variables, i.e. all
/// pair variables of an 8-vertex instance.
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 28;

#[derive(Debug, Error, PartialEq)]
pub enum SolverError {
    #[error(
        "instance has {free} free variables, over the brute-force cap of {cap}; \
         use solve() for instances of this size"
    )]
    TooLargeForBruteForce { free: usize, cap: usize },
}

/// Termination state of a solver run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    /// The reported objective is within the configured gap tolerance of the
    /// true maximum (exactly equal when the search ran to exhaustion).
    Optimal,
    /// The node budget ran out with the gap still above tolerance.
    GapLimit,
    /// The wall-clock limit ran out with the gap still above tolerance.
    TimeLimit,
    /// The instance admits no compatible matrix.
    Infeasible,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::GapLimit => "gap_limit",
            SolveStatus::TimeLimit => "time_limit",
            SolveStatus::Infeasible => "infeasible",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Branch-and-bound nodes expanded (leaves included).
    pub nodes: u64,
    pub wall: Duration,
}

/// Outcome of [`solve`] or [`brute_force`].
#[derive(Clone, Debug)]
pub struct SolverResult {
    pub best_matrix: AdjacencyMatrix,
    /// `Σ_{i<j} w_ij a_ij` at `best_matrix`, single-count convention.
    pub objective: f64,
    /// Best proven relaxation bound on the objective.
    pub upper_bound: f64,
    /// `max(upper_bound − objective, 0)`.
    pub gap: f64,
    pub status: SolveStatus,
    pub stats: SolveStats,
}

/// Search limits. The defaults solve to proven optimality with no time
/// limit; the gap tolerance is absolute and permits early termination once
/// the remaining gap is provably below it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub gap_tolerance: f64,
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
    /// Worker threads for independent subproblems: 1 forces sequential
    /// execution, 0 uses the library default. The objective value and
    /// status are identical at every thread count.
    pub threads: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            gap_tolerance: 1e-9,
            time_limit: None,
            node_limit: None,
            threads: 0,
        }
    }
}

/// Maximises the instance objective exactly. See the module docs for the
/// algorithm; the determinism contract is: identical objective value,
/// bound, and status for identical instance and config at any thread count
/// (runs cut short by the wall-clock limit excepted).
pub fn solve(instance: &ProblemInstance, config: &SolverConfig) -> SolverResult {
    bnb::solve(instance, config)
}

/// Optimum of the continuous relaxation (`a_ij ∈ [0,1]`, forced variables
/// at 1). The value returned is the dual objective at the computed
/// multipliers, so it upper-bounds the integer optimum by construction
/// even in the face of floating-point error.
pub fn lp_relaxation_bound(instance: &ProblemInstance) -> f64 {
    bnb::lp_relaxation_bound(instance)
}

/// Exhaustive oracle over all 0-1 assignments of the free variables,
/// filtered by the degree caps. Refuses instances with more than
/// [`DEFAULT_BRUTE_FORCE_CAP`] free variables.
pub fn brute_force(instance: &ProblemInstance) -> Result<SolverResult, SolverError> {
    brute::run(instance, DEFAULT_BRUTE_FORCE_CAP)
}

/// [`brute_force`] with an explicit free-variable cap.
pub fn brute_force_with_cap(
    instance: &ProblemInstance,
    cap: usize,
) -> Result<SolverResult, SolverError> {
    brute::run(instance, cap)
}

/// Final-objective recomputation shared by every solver entry point: the
/// compensated sum of the chosen edges' weights in sorted order. Using one
/// procedure everywhere makes objective values comparable across solvers to
/// the last bit, independent of each search's accumulation order.
pub(crate) fn objective_of(instance: &ProblemInstance, edges: &[(usize, usize)]) -> f64 {
    let mut acc = CompensatedSum::new();
    for &(i, j) in edges {
        acc.add(instance.weight_of(i, j));
    }
    acc.value()
}
