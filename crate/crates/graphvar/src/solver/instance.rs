//! Problem instances for the compatible-matrix maximisation.
//!
//! An instance is the 0-1 program in upper-triangular form: one decision
//! variable per listed pair `{i, j}`, objective `Σ_{i<j} w_ij a_ij`
//! (single-count convention), per-vertex constraints
//! `Σ_{j<i} a_ji + Σ_{j>i} a_ij ≤ d_i`, and forced variables `a_ij = 1` for
//! the observed edges. Pairs not listed in `weights` are not decision
//! variables; the builders list every pair, so nothing is lost.

use std::fmt::Write as _;

use thiserror::Error;

use crate::data::ObservedData;

#[derive(Debug, Error, PartialEq)]
pub enum InstanceError {
    #[error("pair ({i}, {j}) is a self-pair")]
    SelfPair { i: usize, j: usize },
    #[error("vertex index {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("degree caps have length {caps} but n = {n}")]
    CapsLengthMismatch { caps: usize, n: usize },
    #[error("pair ({i}, {j}) listed with more than one weight")]
    DuplicateWeight { i: usize, j: usize },
    #[error("weight for pair ({i}, {j}) is not finite")]
    NonFiniteWeight { i: usize, j: usize },
    #[error(
        "vertex {vertex} has {forced} forced edges but degree cap {cap}; \
         the instance is infeasible"
    )]
    ForcedDegreeExceedsCap { vertex: usize, forced: u32, cap: u32 },
    #[error("dump line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Validated, immutable instance of the maximisation program.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemInstance {
    n: usize,
    degree_caps: Vec<u32>,
    /// Sorted upper-triangular pairs with their objective weights.
    weights: Vec<(usize, usize, f64)>,
    /// Sorted upper-triangular pairs fixed to 1.
    forced_edges: Vec<(usize, usize)>,
}

impl ProblemInstance {
    pub fn new(
        n: usize,
        degree_caps: Vec<u32>,
        weights: impl IntoIterator<Item = (usize, usize, f64)>,
        forced_edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, InstanceError> {
        if degree_caps.len() != n {
            return Err(InstanceError::CapsLengthMismatch {
                caps: degree_caps.len(),
                n,
            });
        }
        let normalise = |a: usize, b: usize| -> Result<(usize, usize), InstanceError> {
            if a == b {
                return Err(InstanceError::SelfPair { i: a, j: b });
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if j >= n {
                return Err(InstanceError::VertexOutOfRange { vertex: j, n });
            }
            Ok((i, j))
        };

        let mut weight_list = Vec::new();
        for (a, b, w) in weights {
            let (i, j) = normalise(a, b)?;
            if !w.is_finite() {
                return Err(InstanceError::NonFiniteWeight { i, j });
            }
            weight_list.push((i, j, w));
        }
        weight_list.sort_unstable_by_key(|&(i, j, _)| (i, j));
        for pair in weight_list.windows(2) {
            if (pair[0].0, pair[0].1) == (pair[1].0, pair[1].1) {
                return Err(InstanceError::DuplicateWeight {
                    i: pair[0].0,
                    j: pair[0].1,
                });
            }
        }

        let mut forced = Vec::new();
        for (a, b) in forced_edges {
            forced.push(normalise(a, b)?);
        }
        forced.sort_unstable();
        forced.dedup();

        let mut forced_deg = vec![0u32; n];
        for &(i, j) in &forced {
            forced_deg[i] += 1;
            forced_deg[j] += 1;
        }
        for (vertex, (&fd, &cap)) in forced_deg.iter().zip(degree_caps.iter()).enumerate() {
            if fd > cap {
                return Err(InstanceError::ForcedDegreeExceedsCap {
                    vertex,
                    forced: fd,
                    cap,
                });
            }
        }

        Ok(Self {
            n,
            degree_caps,
            weights: weight_list,
            forced_edges: forced,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree_caps(&self) -> &[u32] {
        &self.degree_caps
    }

    /// Sorted `(i, j, w)` triples, `i < j`, one per decision variable.
    pub fn weights(&self) -> &[(usize, usize, f64)] {
        &self.weights
    }

    pub fn forced_edges(&self) -> &[(usize, usize)] {
        &self.forced_edges
    }

    /// Objective weight of a pair; pairs without a listed weight contribute
    /// nothing.
    pub fn weight_of(&self, a: usize, b: usize) -> f64 {
        let key = (a.min(b), a.max(b));
        match self
            .weights
            .binary_search_by_key(&key, |&(i, j, _)| (i, j))
        {
            Ok(pos) => self.weights[pos].2,
            Err(_) => 0.0,
        }
    }

    pub fn is_forced(&self, a: usize, b: usize) -> bool {
        let key = (a.min(b), a.max(b));
        self.forced_edges.binary_search(&key).is_ok()
    }

    /// Number of free decision variables (listed pairs that are not forced).
    pub fn free_count(&self) -> usize {
        self.weights
            .iter()
            .filter(|&&(i, j, _)| !self.is_forced(i, j))
            .count()
    }

    /// Per-vertex count of forced edges.
    pub fn forced_degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.n];
        for &(i, j) in &self.forced_edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg
    }

    /// Plain-text dump for debugging and cross-implementation testing.
    /// Vertices are 1-based in the dump. Weights print in shortest
    /// round-trip form, so `load` reproduces the instance exactly.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n {}", self.n);
        let caps: Vec<String> = self.degree_caps.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "caps {}", caps.join(" "));
        for &(i, j) in &self.forced_edges {
            let _ = writeln!(out, "forced {} {}", i + 1, j + 1);
        }
        for &(i, j, w) in &self.weights {
            let _ = writeln!(out, "weight {} {} {}", i + 1, j + 1, w);
        }
        out
    }

    /// Parses the [`ProblemInstance::dump`] format. Blank lines and lines
    /// starting with `#` are ignored; `n` must precede everything else.
    pub fn load(text: &str) -> Result<Self, InstanceError> {
        let mut n: Option<usize> = None;
        let mut caps: Option<Vec<u32>> = None;
        let mut weights = Vec::new();
        let mut forced = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let keyword = parts.next().unwrap();
            let parse_err = |message: String| InstanceError::Parse {
                line: line_no,
                message,
            };
            match keyword {
                "n" => {
                    let value = parts
                        .next()
                        .ok_or_else(|| parse_err("expected vertex count after 'n'".into()))?;
                    n = Some(
                        value
                            .parse()
                            .map_err(|_| parse_err(format!("bad vertex count '{value}'")))?,
                    );
                }
                "caps" => {
                    if n.is_none() {
                        return Err(parse_err("'caps' before 'n'".into()));
                    }
                    let parsed: Result<Vec<u32>, _> = parts.map(str::parse).collect();
                    caps = Some(
                        parsed.map_err(|_| parse_err("bad degree cap".into()))?,
                    );
                }
                "forced" | "weight" => {
                    if n.is_none() {
                        return Err(parse_err(format!("'{keyword}' before 'n'")));
                    }
                    let mut vertex = |what: &str| -> Result<usize, InstanceError> {
                        let value = parts
                            .next()
                            .ok_or_else(|| InstanceError::Parse {
                                line: line_no,
                                message: format!("expected {what}"),
                            })?;
                        let v: usize = value.parse().map_err(|_| InstanceError::Parse {
                            line: line_no,
                            message: format!("bad vertex '{value}'"),
                        })?;
                        if v == 0 {
                            return Err(InstanceError::Parse {
                                line: line_no,
                                message: "vertices are 1-based in dumps".into(),
                            });
                        }
                        Ok(v - 1)
                    };
                    let i = vertex("first vertex")?;
                    let j = vertex("second vertex")?;
                    if keyword == "forced" {
                        forced.push((i, j));
                    } else {
                        let value = parts
                            .next()
                            .ok_or_else(|| parse_err("expected weight value".into()))?;
                        let w: f64 = value
                            .parse()
                            .map_err(|_| parse_err(format!("bad weight '{value}'")))?;
                        weights.push((i, j, w));
                    }
                }
                other => {
                    return Err(parse_err(format!("unknown directive '{other}'")));
                }
            }
        }

        let n = n.ok_or(InstanceError::Parse {
            line: 0,
            message: "missing 'n' line".into(),
        })?;
        let caps = caps.unwrap_or_else(|| vec![0; n]);
        ProblemInstance::new(n, caps, weights, forced)
    }
}

/// Instance for the general objective: weights are residual cross-products
/// `(X_i − X̄)(X_j − X̄)` over every pair, caps are the raw reported degrees,
/// and the observed edges are forced.
pub fn build_v1_instance(data: &ObservedData) -> Result<ProblemInstance, InstanceError> {
    let n = data.n();
    let mean = crate::data::sample_mean(data.outcomes()).expect("non-empty by construction");
    let residuals: Vec<f64> = data.outcomes().iter().map(|x| x - mean).collect();
    let mut weights = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            weights.push((i, j, residuals[i] * residuals[j]));
        }
    }
    ProblemInstance::new(
        n,
        data.degrees().to_vec(),
        weights,
        data.observed_edges().edges().iter().copied(),
    )
}

/// Instance for the edge-count objective: every pair has weight 1.
pub fn build_v2_instance(data: &ObservedData) -> Result<ProblemInstance, InstanceError> {
    let n = data.n();
    let mut weights = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            weights.push((i, j, 1.0));
        }
    }
    ProblemInstance::new(
        n,
        data.degrees().to_vec(),
        weights,
        data.observed_edges().edges().iter().copied(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture_data() -> ObservedData {
        ObservedData::new(vec![0.0, 0.0, 1.0, 1.0], vec![1, 1, 1, 1], []).unwrap()
    }

    #[test]
    fn v1_weights_are_residual_products() {
        let inst = build_v1_instance(&fixture_data()).unwrap();
        assert_eq!(inst.weight_of(0, 1), 0.25);
        assert_eq!(inst.weight_of(0, 2), -0.25);
        assert_eq!(inst.weight_of(2, 3), 0.25);
        assert_eq!(inst.weights().len(), 6);
        assert_eq!(inst.degree_caps(), &[1, 1, 1, 1]);
    }

    #[test]
    fn constant_outcomes_give_zero_weights() {
        let data = ObservedData::new(vec![3.0; 4], vec![1; 4], []).unwrap();
        let inst = build_v1_instance(&data).unwrap();
        assert!(inst.weights().iter().all(|&(_, _, w)| w == 0.0));
    }

    #[test]
    fn v2_weights_are_all_unit() {
        let data = ObservedData::new(vec![1.0, 2.0, 3.0], vec![2, 2, 2], []).unwrap();
        let inst = build_v2_instance(&data).unwrap();
        assert_eq!(inst.weights().len(), 3);
        assert!(inst.weights().iter().all(|&(_, _, w)| w == 1.0));
    }

    #[test]
    fn observed_edges_become_forced() {
        let data =
            ObservedData::new(vec![0.0, 0.0, 1.0, 1.0], vec![1, 1, 1, 1], [(0, 1)]).unwrap();
        let inst = build_v1_instance(&data).unwrap();
        assert_eq!(inst.forced_edges(), &[(0, 1)]);
        assert!(inst.is_forced(1, 0));
        assert_eq!(inst.free_count(), 5);
    }

    #[test]
    fn forced_edges_over_caps_are_rejected() {
        let err = ProblemInstance::new(
            3,
            vec![1, 1, 1],
            [(0, 1, 1.0), (0, 2, 1.0)],
            [(0, 1), (0, 2)],
        )
        .unwrap_err();
        assert_eq!(
            err,
            InstanceError::ForcedDegreeExceedsCap {
                vertex: 0,
                forced: 2,
                cap: 1
            }
        );
    }

    #[test]
    fn duplicate_weight_entries_are_rejected() {
        let err = ProblemInstance::new(3, vec![1; 3], [(0, 1, 1.0), (1, 0, 2.0)], []).unwrap_err();
        assert_eq!(err, InstanceError::DuplicateWeight { i: 0, j: 1 });
    }

    #[test]
    fn pairs_normalise_orientation() {
        let inst = ProblemInstance::new(3, vec![1; 3], [(2, 0, 0.5)], [(2, 1)]).unwrap();
        assert_eq!(inst.weights(), &[(0, 2, 0.5)]);
        assert_eq!(inst.forced_edges(), &[(1, 2)]);
    }

    #[test]
    fn dump_load_round_trip_is_exact() {
        let inst = ProblemInstance::new(
            4,
            vec![1, 2, 0, 3],
            [
                (0, 1, 0.1 + 0.2), // deliberately non-dyadic
                (0, 2, -0.25),
                (2, 3, 1e-300),
            ],
            [(0, 1)],
        )
        .unwrap();
        let text = inst.dump();
        let back = ProblemInstance::load(&text).unwrap();
        assert_eq!(inst, back);
    }

    #[test]
    fn load_reports_line_numbers() {
        let text = "n 3\ncaps 1 1 1\nweight 1 oops 2\n";
        match ProblemInstance::load(text).unwrap_err() {
            InstanceError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {other:?}"),
        }
        let missing_n = "caps 1 1\n";
        assert!(matches!(
            ProblemInstance::load(missing_n).unwrap_err(),
            InstanceError::Parse { line: 1, .. }
        ));
    }

    #[test]
    fn load_accepts_comments_and_blank_lines() {
        let text = "# a test instance\n\nn 2\ncaps 1 1\nweight 1 2 0.5\n";
        let inst = ProblemInstance::load(text).unwrap();
        assert_eq!(inst.n(), 2);
        assert_eq!(inst.weight_of(0, 1), 0.5);
    }
}
