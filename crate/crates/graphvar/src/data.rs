//! Observed data, adjacency matrices, and compatibility checking.
//!
//! The data model mirrors what a link-tracing network study actually yields:
//! an outcome `X_i` per sampled vertex, a reported degree `d_i` giving that
//! vertex's degree in the full (unobserved) graph, and a set of observed
//! edges between sampled vertices. Reported degrees refer to the full graph,
//! so `d_i > n - 1` is legal and only truncated where a formula requires it.
//!
//! An [`AdjacencyMatrix`] is a candidate for the subgraph induced on the
//! sample: symmetric, zero diagonal, stored canonically as the sorted set of
//! upper-triangular index pairs. A matrix is *compatible* with the data when
//! it contains every observed edge and its row sums do not exceed the
//! reported degrees; [`is_compatible`] reports every violation rather than
//! failing on the first one.
//!
//! All types are immutable after construction and safe to share across
//! threads.

use std::fmt;

use crate::numeric::CompensatedSum;
use thiserror::Error;

/// Structural errors raised when constructing or combining data types.
/// Violations of the statistical conventions (degree bounds, required edges)
/// are not errors; they are reported as [`CompatibilityReport`] data.
#[derive(Debug, Error, PartialEq)]
pub enum DataError {
    #[error("outcomes are empty; at least one observation is required")]
    EmptyOutcomes,
    #[error("outcomes ({outcomes}) and degrees ({degrees}) have different lengths")]
    LengthMismatch { outcomes: usize, degrees: usize },
    #[error("outcome at index {index} is not finite")]
    NonFiniteOutcome { index: usize },
    #[error("edge ({i}, {j}) is a self-loop")]
    SelfLoop { i: usize, j: usize },
    #[error("vertex index {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("matrix is over {matrix_n} vertices but the data has {data_n}")]
    DimensionMismatch { matrix_n: usize, data_n: usize },
    #[error("vertex {vertex} appears more than once in the subset")]
    DuplicateSubsetVertex { vertex: usize },
}

/// Symmetric 0-1 matrix with zero diagonal over `n` vertices, stored as the
/// sorted, duplicate-free list of upper-triangular pairs `(i, j)` with
/// `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl AdjacencyMatrix {
    /// Builds a matrix from an edge list. Pairs are normalised to `i < j`
    /// and deduplicated; self-loops and out-of-range indices are rejected.
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, DataError> {
        let mut normalised = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(DataError::SelfLoop { i: a, j: b });
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if j >= n {
                return Err(DataError::VertexOutOfRange { vertex: j, n });
            }
            normalised.push((i, j));
        }
        normalised.sort_unstable();
        normalised.dedup();
        Ok(Self {
            n,
            edges: normalised,
        })
    }

    /// The matrix with no edges.
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as sorted upper-triangular pairs.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        if a == b {
            return false;
        }
        let key = if a < b { (a, b) } else { (b, a) };
        self.edges.binary_search(&key).is_ok()
    }

    /// Row sums, i.e. vertex degrees within the represented subgraph.
    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.n];
        for &(i, j) in &self.edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg
    }

    /// Subgraph on `subset`, keeping exactly the edges with both endpoints in
    /// the subset and reindexing vertices to `0..subset.len()` in input order.
    pub fn induced_subgraph(&self, subset: &[usize]) -> Result<AdjacencyMatrix, DataError> {
        let mut position = vec![usize::MAX; self.n];
        for (new_idx, &v) in subset.iter().enumerate() {
            if v >= self.n {
                return Err(DataError::VertexOutOfRange { vertex: v, n: self.n });
            }
            if position[v] != usize::MAX {
                return Err(DataError::DuplicateSubsetVertex { vertex: v });
            }
            position[v] = new_idx;
        }
        let kept = self.edges.iter().filter_map(|&(i, j)| {
            let (pi, pj) = (position[i], position[j]);
            (pi != usize::MAX && pj != usize::MAX).then_some((pi, pj))
        });
        AdjacencyMatrix::new(subset.len(), kept)
    }
}

/// Outcomes, reported degrees, and the observed edge set of one study.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservedData {
    outcomes: Vec<f64>,
    degrees: Vec<u32>,
    observed_edges: AdjacencyMatrix,
}

impl ObservedData {
    /// Assembles a data set, enforcing the structural invariants: equal
    /// lengths, n >= 1, finite outcomes, and a well-formed edge set.
    /// Degree consistency with the observed edges is deliberately not
    /// enforced here; [`ObservedData::validate`] reports it instead, so
    /// callers can surface every problem in a file at once.
    pub fn new(
        outcomes: Vec<f64>,
        degrees: Vec<u32>,
        observed_edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, DataError> {
        if outcomes.is_empty() {
            return Err(DataError::EmptyOutcomes);
        }
        if outcomes.len() != degrees.len() {
            return Err(DataError::LengthMismatch {
                outcomes: outcomes.len(),
                degrees: degrees.len(),
            });
        }
        if let Some(index) = outcomes.iter().position(|x| !x.is_finite()) {
            return Err(DataError::NonFiniteOutcome { index });
        }
        let observed_edges = AdjacencyMatrix::new(outcomes.len(), observed_edges)?;
        Ok(Self {
            outcomes,
            degrees,
            observed_edges,
        })
    }

    pub fn n(&self) -> usize {
        self.outcomes.len()
    }

    pub fn outcomes(&self) -> &[f64] {
        &self.outcomes
    }

    /// Reported degrees in the full graph; values may exceed `n - 1`.
    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn observed_edges(&self) -> &AdjacencyMatrix {
        &self.observed_edges
    }

    /// Checks the internal-consistency invariant: each vertex's degree within
    /// the observed edges must not exceed its reported degree. Violations are
    /// data, not failures, so inconsistent rows are all reported.
    pub fn validate(&self) -> CompatibilityReport {
        let mut violations = Vec::new();
        let observed_deg = self.observed_edges.degrees();
        for (vertex, (&seen, &reported)) in
            observed_deg.iter().zip(self.degrees.iter()).enumerate()
        {
            if seen > reported {
                violations.push(Violation::DegreeExceeded {
                    vertex,
                    actual: seen,
                    limit: reported,
                });
            }
        }
        CompatibilityReport::from_violations(violations)
    }
}

/// One reason a matrix or data set fails a compatibility check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// An observed edge is absent from the candidate matrix.
    MissingRequiredEdge { i: usize, j: usize },
    /// A vertex has more incident edges than its reported degree allows.
    DegreeExceeded { vertex: usize, actual: u32, limit: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingRequiredEdge { i, j } => {
                write!(f, "observed edge ({i}, {j}) is missing from the matrix")
            }
            Violation::DegreeExceeded {
                vertex,
                actual,
                limit,
            } => write!(
                f,
                "vertex {vertex} has degree {actual}, exceeding its bound {limit}"
            ),
        }
    }
}

/// Outcome of a compatibility check. `compatible` holds exactly when
/// `violations` is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibilityReport {
    pub compatible: bool,
    pub violations: Vec<Violation>,
}

impl CompatibilityReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        Self {
            compatible: violations.is_empty(),
            violations,
        }
    }
}

/// Checks whether `a` is compatible with `data`: every observed edge present
/// in `a`, and each row sum of `a` within the reported degree. Dimension
/// mismatch is a caller bug and an error rather than a violation.
pub fn is_compatible(
    a: &AdjacencyMatrix,
    data: &ObservedData,
) -> Result<CompatibilityReport, DataError> {
    if a.n() != data.n() {
        return Err(DataError::DimensionMismatch {
            matrix_n: a.n(),
            data_n: data.n(),
        });
    }
    let mut violations = Vec::new();
    for &(i, j) in data.observed_edges().edges() {
        if !a.contains(i, j) {
            violations.push(Violation::MissingRequiredEdge { i, j });
        }
    }
    for (vertex, (&actual, &limit)) in a
        .degrees()
        .iter()
        .zip(data.degrees().iter())
        .enumerate()
    {
        if actual > limit {
            violations.push(Violation::DegreeExceeded {
                vertex,
                actual,
                limit,
            });
        }
    }
    Ok(CompatibilityReport::from_violations(violations))
}

/// Reported degrees truncated at `n - 1`, the most any vertex can realise
/// within the sample: `d'_i = min(d_i, n - 1)`.
pub fn truncated_degrees(data: &ObservedData) -> Vec<u32> {
    let cap = (data.n() - 1) as u32;
    data.degrees().iter().map(|&d| d.min(cap)).collect()
}

/// Arithmetic mean of the outcomes.
pub fn sample_mean(outcomes: &[f64]) -> Result<f64, DataError> {
    if outcomes.is_empty() {
        return Err(DataError::EmptyOutcomes);
    }
    let mut acc = CompensatedSum::new();
    for &x in outcomes {
        acc.add(x);
    }
    Ok(acc.value() / outcomes.len() as f64)
}

/// Plug-in sample variance with the 1/n divisor:
/// `σ̂² = n⁻¹ Σ (X_i − X̄)²`. No Bessel correction; the downstream
/// estimator algebra depends on this exact form.
pub fn sample_variance(outcomes: &[f64]) -> Result<f64, DataError> {
    let mean = sample_mean(outcomes)?;
    let mut acc = CompensatedSum::new();
    for &x in outcomes {
        let r = x - mean;
        acc.add(r * r);
    }
    Ok(acc.value() / outcomes.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(
        outcomes: &[f64],
        degrees: &[u32],
        edges: &[(usize, usize)],
    ) -> ObservedData {
        ObservedData::new(outcomes.to_vec(), degrees.to_vec(), edges.iter().copied()).unwrap()
    }

    #[test]
    fn matrix_normalises_orientation_and_duplicates() {
        let a = AdjacencyMatrix::new(4, [(2, 0), (0, 2), (3, 1)]).unwrap();
        assert_eq!(a.edges(), &[(0, 2), (1, 3)]);
        assert!(a.contains(2, 0));
        assert!(!a.contains(0, 1));
    }

    #[test]
    fn matrix_rejects_self_loops_and_bad_indices() {
        assert_eq!(
            AdjacencyMatrix::new(3, [(1, 1)]),
            Err(DataError::SelfLoop { i: 1, j: 1 })
        );
        assert_eq!(
            AdjacencyMatrix::new(3, [(0, 3)]),
            Err(DataError::VertexOutOfRange { vertex: 3, n: 3 })
        );
    }

    #[test]
    fn degrees_are_row_sums() {
        let a = AdjacencyMatrix::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(a.degrees(), vec![3, 1, 1, 1]);
    }

    #[test]
    fn validate_accepts_empty_graph() {
        let report = data(&[0.0, 1.0], &[0, 0], &[]).validate();
        assert!(report.compatible);
        assert!(report.violations.is_empty());
    }

    #[test]
    fn validate_flags_observed_degree_over_reported() {
        let report = data(&[0.0, 1.0], &[0, 1], &[(0, 1)]).validate();
        assert!(!report.compatible);
        assert_eq!(
            report.violations,
            vec![Violation::DegreeExceeded {
                vertex: 0,
                actual: 1,
                limit: 0
            }]
        );
    }

    #[test]
    fn validate_accepts_consistent_partial_graph() {
        let report = data(&[0.0, 0.0, 1.0, 1.0], &[1, 1, 1, 1], &[(0, 2)]).validate();
        assert!(report.compatible);
    }

    #[test]
    fn zero_matrix_is_compatible_without_observed_edges() {
        let d = data(&[0.0, 1.0, 2.0], &[5, 0, 1], &[]);
        let report = is_compatible(&AdjacencyMatrix::empty(3), &d).unwrap();
        assert!(report.compatible);
    }

    #[test]
    fn missing_observed_edge_is_reported() {
        let d = data(&[0.0, 1.0], &[1, 1], &[(0, 1)]);
        let report = is_compatible(&AdjacencyMatrix::empty(2), &d).unwrap();
        assert_eq!(
            report.violations,
            vec![Violation::MissingRequiredEdge { i: 0, j: 1 }]
        );
    }

    #[test]
    fn matching_within_unit_degrees_is_compatible() {
        let d = data(&[0.0, 0.0, 1.0, 1.0], &[1, 1, 1, 1], &[]);
        let a = AdjacencyMatrix::new(4, [(0, 1), (2, 3)]).unwrap();
        assert!(is_compatible(&a, &d).unwrap().compatible);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let d = data(&[0.0, 1.0], &[1, 1], &[]);
        let a = AdjacencyMatrix::empty(3);
        assert_eq!(
            is_compatible(&a, &d),
            Err(DataError::DimensionMismatch {
                matrix_n: 3,
                data_n: 2
            })
        );
    }

    #[test]
    fn truncation_caps_at_n_minus_one() {
        assert_eq!(
            truncated_degrees(&data(&[0.0; 4], &[1, 1, 1, 1], &[])),
            vec![1, 1, 1, 1]
        );
        assert_eq!(
            truncated_degrees(&data(&[0.0; 4], &[10, 2, 3, 1], &[])),
            vec![3, 2, 3, 1]
        );
        assert_eq!(truncated_degrees(&data(&[0.0], &[5], &[])), vec![0]);
    }

    #[test]
    fn truncation_is_idempotent_and_dominated() {
        let d = data(&[0.0; 5], &[9, 0, 4, 4, 100], &[]);
        let once = truncated_degrees(&d);
        let again = ObservedData::new(d.outcomes().to_vec(), once.clone(), []).unwrap();
        assert_eq!(truncated_degrees(&again), once);
        for (t, r) in once.iter().zip(d.degrees()) {
            assert!(t <= r);
        }
    }

    #[test]
    fn mean_and_variance_match_hand_values() {
        assert_eq!(sample_mean(&[0.0, 0.0, 1.0, 1.0]).unwrap(), 0.5);
        assert_eq!(sample_mean(&[2.0, 4.0, 6.0]).unwrap(), 4.0);
        assert_eq!(sample_variance(&[0.0, 0.0, 1.0, 1.0]).unwrap(), 0.25);
        assert_eq!(sample_variance(&[3.5, 3.5, 3.5]).unwrap(), 0.0);
    }

    #[test]
    fn variance_is_shift_invariant() {
        let xs = [0.125, -1.5, 2.0, 0.75, 0.75];
        let shifted: Vec<f64> = xs.iter().map(|x| x + 7.25).collect();
        let v0 = sample_variance(&xs).unwrap();
        let v1 = sample_variance(&shifted).unwrap();
        assert!((v0 - v1).abs() < 1e-12);
    }

    #[test]
    fn empty_outcomes_error() {
        assert_eq!(sample_mean(&[]), Err(DataError::EmptyOutcomes));
        assert_eq!(sample_variance(&[]), Err(DataError::EmptyOutcomes));
        assert_eq!(
            ObservedData::new(vec![], vec![], []),
            Err(DataError::EmptyOutcomes)
        );
    }

    #[test]
    fn induced_subgraph_keeps_interior_edges_only() {
        let triangle = AdjacencyMatrix::new(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        let sub = triangle.induced_subgraph(&[0, 1]).unwrap();
        assert_eq!(sub.edges(), &[(0, 1)]);

        let path = AdjacencyMatrix::new(3, [(0, 1), (1, 2)]).unwrap();
        let ends = path.induced_subgraph(&[0, 2]).unwrap();
        assert_eq!(ends.edge_count(), 0);
    }

    #[test]
    fn induced_subgraph_on_all_vertices_is_identity() {
        let g = AdjacencyMatrix::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(g.induced_subgraph(&[0, 1, 2, 3]).unwrap(), g);
    }

    #[test]
    fn induced_subgraph_reindexes_in_subset_order() {
        let g = AdjacencyMatrix::new(4, [(1, 3)]).unwrap();
        let sub = g.induced_subgraph(&[3, 0, 1]).unwrap();
        assert_eq!(sub.edges(), &[(0, 2)]);
    }

    #[test]
    fn induced_subgraph_rejects_bad_subsets() {
        let g = AdjacencyMatrix::empty(3);
        assert_eq!(
            g.induced_subgraph(&[0, 7]),
            Err(DataError::VertexOutOfRange { vertex: 7, n: 3 })
        );
        assert_eq!(
            g.induced_subgraph(&[1, 1]),
            Err(DataError::DuplicateSubsetVertex { vertex: 1 })
        );
    }

    #[test]
    fn non_finite_outcomes_rejected() {
        assert_eq!(
            ObservedData::new(vec![0.0, f64::NAN], vec![0, 0], []),
            Err(DataError::NonFiniteOutcome { index: 1 })
        );
    }
}
