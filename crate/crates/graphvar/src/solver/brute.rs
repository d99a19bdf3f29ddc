//! Exhaustive oracle for small instances.
//!
//! Depth-first enumeration of every 0-1 assignment to the free variables.
//! The only pruning is feasibility itself: a branch that would overrun a
//! degree cap is skipped because no completion of it is feasible. No bounds
//! are used, so this shares no reasoning with the branch-and-bound solver
//! and is a genuinely independent oracle.

use std::time::Instant;

use crate::data::AdjacencyMatrix;

use super::{
    objective_of, ProblemInstance, SolveStats, SolveStatus, SolverError, SolverResult,
};

struct Search<'a> {
    free: &'a [(usize, usize, f64)],
    rem: Vec<u32>,
    chosen: u64,
    best_chosen: u64,
    best_value: f64,
    nodes: u64,
}

impl Search<'_> {
    fn dfs(&mut self, idx: usize, value: f64) {
        self.nodes += 1;
        if idx == self.free.len() {
            // Strict improvement keeps the first maximiser found, which
            // makes the reported matrix deterministic.
            if value > self.best_value {
                self.best_value = value;
                self.best_chosen = self.chosen;
            }
            return;
        }
        let (i, j, w) = self.free[idx];
        if self.rem[i] > 0 && self.rem[j] > 0 {
            self.rem[i] -= 1;
            self.rem[j] -= 1;
            self.chosen |= 1 << idx;
            self.dfs(idx + 1, value + w);
            self.chosen &= !(1 << idx);
            self.rem[i] += 1;
            self.rem[j] += 1;
        }
        self.dfs(idx + 1, value);
    }
}

pub(super) fn run(instance: &ProblemInstance, cap: usize) -> Result<SolverResult, SolverError> {
    let start = Instant::now();
    let free: Vec<(usize, usize, f64)> = instance
        .weights()
        .iter()
        .copied()
        .filter(|&(i, j, _)| !instance.is_forced(i, j))
        .collect();
    if free.len() > cap || free.len() > 63 {
        return Err(SolverError::TooLargeForBruteForce {
            free: free.len(),
            cap,
        });
    }

    let mut rem = vec![0u32; instance.n()];
    for (slot, (&c, &f)) in rem
        .iter_mut()
        .zip(instance.degree_caps().iter().zip(instance.forced_degrees().iter()))
    {
        *slot = c - f;
    }

    let mut search = Search {
        free: &free,
        rem,
        chosen: 0,
        best_chosen: 0,
        best_value: f64::NEG_INFINITY,
        nodes: 0,
    };
    search.dfs(0, 0.0);

    let mut edges: Vec<(usize, usize)> = instance.forced_edges().to_vec();
    for (idx, &(i, j, _)) in free.iter().enumerate() {
        if search.best_chosen >> idx & 1 == 1 {
            edges.push((i, j));
        }
    }
    edges.sort_unstable();
    let objective = objective_of(instance, &edges);
    let best_matrix = AdjacencyMatrix::new(instance.n(), edges)
        .expect("edges come from a validated instance");

    Ok(SolverResult {
        best_matrix,
        objective,
        upper_bound: objective,
        gap: 0.0,
        status: SolveStatus::Optimal,
        stats: SolveStats {
            nodes: search.nodes,
            wall: start.elapsed(),
        },
    })
}
