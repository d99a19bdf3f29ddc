//! Constructive fast path for the edge-count objective.
//!
//! The count estimator is maximised by any compatible matrix with the most
//! edges, and no compatible matrix can have row sums above the truncated
//! degrees `d′`. So if a compatible matrix with row sums exactly `d′`
//! exists, it is a maximiser, and the count estimator at it equals the
//! closed-form value. This module attempts to build such a matrix by a
//! greedy degree-sequence realisation that respects the already-observed
//! edges; with forbidden adjacencies in play the greedy rule is only a
//! heuristic, so the result is verified before it is returned and `None`
//! comes back on any shortfall. Callers fall back to the full solver.

use crate::data::{truncated_degrees, AdjacencyMatrix, ObservedData};

/// Tries to build a compatible matrix whose row sums equal the truncated
/// degrees exactly. On success the matrix is a provable maximiser of the
/// edge-count objective; `None` means "could not construct one", which is
/// expected when the residual degree sum is odd or the sequence is not
/// realisable around the observed edges.
pub fn max_v2_fast_path(data: &ObservedData) -> Option<AdjacencyMatrix> {
    let n = data.n();
    let target = truncated_degrees(data);
    let observed = data.observed_edges();

    // Residual degrees to be met on top of the observed edges.
    let mut residual = vec![0i64; n];
    for (i, (&t, &have)) in target.iter().zip(observed.degrees().iter()).enumerate() {
        residual[i] = t as i64 - have as i64;
        if residual[i] < 0 {
            return None;
        }
    }
    if residual.iter().sum::<i64>() % 2 != 0 {
        return None;
    }

    let mut adjacent: std::collections::HashSet<(usize, usize)> =
        observed.edges().iter().copied().collect();
    let mut added: Vec<(usize, usize)> = Vec::new();

    // Greedy realisation: repeatedly satisfy the vertex with the largest
    // residual by connecting it to the largest-residual non-neighbours.
    loop {
        let v = match (0..n).filter(|&v| residual[v] > 0).max_by_key(|&v| {
            (residual[v], std::cmp::Reverse(v))
        }) {
            Some(v) => v,
            None => break,
        };
        let need = residual[v] as usize;
        let mut candidates: Vec<usize> = (0..n)
            .filter(|&u| {
                u != v
                    && residual[u] > 0
                    && !adjacent.contains(&(u.min(v), u.max(v)))
            })
            .collect();
        if candidates.len() < need {
            return None;
        }
        candidates.sort_unstable_by_key(|&u| (std::cmp::Reverse(residual[u]), u));
        for &u in &candidates[..need] {
            let key = (u.min(v), u.max(v));
            adjacent.insert(key);
            added.push(key);
            residual[u] -= 1;
        }
        residual[v] = 0;
    }

    let mut edges: Vec<(usize, usize)> = observed.edges().to_vec();
    edges.extend(added);
    let matrix = AdjacencyMatrix::new(n, edges).ok()?;

    // The greedy step is heuristic around forbidden adjacencies; accept the
    // construction only if it hits the target row sums exactly.
    let achieved = matrix.degrees();
    if achieved
        .iter()
        .zip(target.iter())
        .all(|(&got, &want)| got == want)
    {
        Some(matrix)
    } else {
        None
    }
}
