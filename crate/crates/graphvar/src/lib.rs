//! Conservative variance estimation for the mean of dependent observations.
//!
//! The setting: outcomes `X_1, ..., X_n` are observed on the vertices of a
//! dependency graph that is only partially known. We see some of the edges
//! and, for every vertex, an upper bound on its degree (typically a reported
//! degree in a larger graph). Any adjacency matrix that contains the observed
//! edges and respects the degree bounds is *compatible* with the data, and the
//! variance of the sample mean under the true graph is bounded by the maximum
//! of a quadratic estimator over the compatible set.
//!
//! The crate is organised around that maximisation:
//!
//! * [`data`] holds the observed data model, adjacency matrices, and
//!   compatibility checking.
//! * [`estimators`] evaluates the variance estimators at a given matrix.
//! * [`solver`] maximises an estimator over the compatible set with an exact
//!   branch-and-bound search, plus an LP relaxation bound, a constructive
//!   fast path for the unit-weight objective, and a brute-force oracle.
//! * [`inference`] turns a variance estimate into a Wald-type confidence
//!   interval.
//! * [`simulation`] generates synthetic data with a known dependency graph
//!   and known `var(X̄)`, and runs consistency / coverage studies.
//! * [`io`] reads the delimited outcome and edge files used by the CLI.
//!
//! Vertices are indexed `0..n` throughout the library; external string IDs
//! are mapped to dense indices at ingestion time and mapped back on output.
//!
//! The `parallel` feature (enabled by default) runs simulation replicates and
//! independent solver subproblems on a rayon pool. Results are identical with
//! the feature disabled: replicates draw from counter-derived RNG streams and
//! all reductions are performed in a fixed order.

pub mod data;
pub mod estimators;
pub mod inference;
pub mod io;
mod numeric;
pub mod simulation;
pub mod solver;

pub use data::{
    is_compatible, sample_mean, sample_variance, truncated_degrees, AdjacencyMatrix,
    CompatibilityReport, DataError, ObservedData, Violation,
};
pub use estimators::{naive, v1, v2, v2_prime, EstimatorKind, VarianceEstimate};
pub use inference::{normal_quantile, wald_ci, ConfidenceInterval, InferenceError};
pub use solver::{
    brute_force, build_v1_instance, build_v2_instance, lp_relaxation_bound, max_v2_fast_path,
    solve, InstanceError, ProblemInstance, SolveStatus, SolverConfig, SolverResult,
};
