//! Variance estimators for the sample mean under partial graph knowledge.
//!
//! Throughout, `X̄` is the sample mean, `σ̂²  = n⁻¹ Σ (X_i − X̄)²` is the
//! plug-in sample variance (1/n divisor), and `A` ranges over candidate
//! adjacency matrices for the dependency subgraph on the sample. Four
//! estimators of `var(X̄)` are provided:
//!
//! * naive:      `σ̂² / n` — correct under independence, anti-conservative
//!               in general.
//! * general:    `V̂₁(A) = n⁻² [ n σ̂² + Σ_i Σ_j A_ij (X_i − X̄)(X_j − X̄) ]`
//!               — adds the residual cross-products over the edges of `A`.
//! * count:      `V̂₂(A) = (σ̂²/n) [ 1 + n⁻¹ Σ_i Σ_j A_ij ]` — under
//!               homoskedasticity only the edge count matters.
//! * closed form: `V̂₂′ = (σ̂²/n) [ 1 + n⁻¹ Σ_i d′_i ]` with
//!               `d′_i = min(d_i, n−1)` — the degree bounds alone, no
//!               matrix or optimisation involved.
//!
//! The double sums run over both orientations of every edge, exactly as the
//! defining formulas are written, so each unordered edge contributes twice.
//! Internally this shows up as a factor of 2 on single-counted edge sums.
//! The single-count convention is used only inside the solver's objective.
//!
//! `V̂₁` evaluated at an adversarial matrix can be negative; the value is
//! returned as computed, and confidence-interval construction downstream
//! rejects negative variances loudly rather than clamping here.

use std::fmt;

use crate::data::{
    sample_variance, truncated_degrees, AdjacencyMatrix, DataError, ObservedData,
};
use crate::numeric::CompensatedSum;

/// Which estimator produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EstimatorKind {
    Naive,
    V1,
    V2,
    V2Prime,
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            EstimatorKind::Naive => "naive",
            EstimatorKind::V1 => "v1",
            EstimatorKind::V2 => "v2",
            EstimatorKind::V2Prime => "v2_prime",
        };
        f.write_str(name)
    }
}

/// A point estimate of `var(X̄)` together with the matrix it was evaluated
/// at. `at_matrix` is `None` for the naive and closed-form estimators, which
/// do not depend on a matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct VarianceEstimate {
    pub kind: EstimatorKind,
    pub value: f64,
    pub at_matrix: Option<AdjacencyMatrix>,
}

fn check_dimensions(a: &AdjacencyMatrix, data: &ObservedData) -> Result<(), DataError> {
    if a.n() != data.n() {
        return Err(DataError::DimensionMismatch {
            matrix_n: a.n(),
            data_n: data.n(),
        });
    }
    Ok(())
}

/// General estimator `V̂₁(A)`. `A` need not be compatible with the data;
/// compatibility is the caller's concern. The value can be negative for
/// matrices that concentrate on negative residual products.
pub fn v1(a: &AdjacencyMatrix, data: &ObservedData) -> Result<VarianceEstimate, DataError> {
    check_dimensions(a, data)?;
    let n = data.n() as f64;
    let mean = crate::data::sample_mean(data.outcomes())?;
    let sigma_sq = sample_variance(data.outcomes())?;
    let mut cross = CompensatedSum::new();
    for &(i, j) in a.edges() {
        let ri = data.outcomes()[i] - mean;
        let rj = data.outcomes()[j] - mean;
        cross.add(ri * rj);
    }
    // Each unordered edge appears in the defining double sum twice.
    let value = (n * sigma_sq + 2.0 * cross.value()) / (n * n);
    Ok(VarianceEstimate {
        kind: EstimatorKind::V1,
        value,
        at_matrix: Some(a.clone()),
    })
}

/// Count estimator `V̂₂(A)`: depends on `A` only through its edge count.
pub fn v2(a: &AdjacencyMatrix, data: &ObservedData) -> Result<VarianceEstimate, DataError> {
    check_dimensions(a, data)?;
    let n = data.n() as f64;
    let sigma_sq = sample_variance(data.outcomes())?;
    let doubled_edges = 2.0 * a.edge_count() as f64;
    let value = sigma_sq / n * (1.0 + doubled_edges / n);
    Ok(VarianceEstimate {
        kind: EstimatorKind::V2,
        value,
        at_matrix: Some(a.clone()),
    })
}

/// Closed-form estimator `V̂₂′` from the truncated degree bounds alone.
/// Ignores the observed edges entirely: the truncated degree sum already
/// dominates the edge count of every compatible matrix.
pub fn v2_prime(data: &ObservedData) -> Result<VarianceEstimate, DataError> {
    let n = data.n() as f64;
    let sigma_sq = sample_variance(data.outcomes())?;
    let degree_sum: f64 = truncated_degrees(data).iter().map(|&d| d as f64).sum();
    let value = sigma_sq / n * (1.0 + degree_sum / n);
    Ok(VarianceEstimate {
        kind: EstimatorKind::V2Prime,
        value,
        at_matrix: None,
    })
}

/// Independence-assuming estimator `σ̂² / n`.
pub fn naive(data: &ObservedData) -> Result<VarianceEstimate, DataError> {
    let n = data.n() as f64;
    let sigma_sq = sample_variance(data.outcomes())?;
    Ok(VarianceEstimate {
        kind: EstimatorKind::Naive,
        value: sigma_sq / n,
        at_matrix: None,
    })
}
