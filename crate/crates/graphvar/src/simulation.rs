//! Synthetic dependency graphs and Monte Carlo studies of the estimators.
//!
//! The generating process is an edge-factor model: each vertex draws a
//! private factor, each edge of a fixed dependency graph draws a shared
//! factor, and an outcome is the model mean plus the scaled sum of its
//! incident factors. Outcomes of adjacent vertices share an edge factor
//! and are dependent; non-adjacent outcomes are independent, so the true
//! dependency structure is exactly the graph and the variance of the
//! sample mean has a closed form to test against.
//!
//! Two study drivers sit on top: a consistency study tracking the general
//! estimator at the true matrix as `n` grows, and a coverage study running
//! the full estimation pipeline (solver included) over replicated draws.
//! Replicates are independent by construction: each one seeds its own
//! stream cipher from the study seed and its index, so results are
//! identical whether replicates run sequentially or in parallel, and
//! reports serialize to byte-identical JSON either way.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::data::{sample_mean, AdjacencyMatrix, ObservedData};
use crate::estimators;
use crate::inference::wald_ci;
use crate::solver::{
    self, build_v1_instance, build_v2_instance, max_v2_fast_path, SolveStatus, SolverConfig,
};

#[derive(Debug, Error, PartialEq)]
pub enum SimulationError {
    #[error("graph degree must be below the vertex count: degree {degree}, n {n}")]
    DegreeTooLarge { degree: usize, n: usize },
    #[error("no {degree}-regular graph on {n} vertices: n * degree is odd")]
    OddRegularProduct { degree: usize, n: usize },
    #[error("study needs at least two vertices: n = {n}")]
    TooFewVertices { n: usize },
    #[error("replicate count must be positive")]
    NoReplicates,
    #[error("observation probability must lie in [0, 1]: got {value}")]
    ObserveProbabilityDomain { value: f64 },
    #[error("alpha must lie strictly between 0 and 1: got {value}")]
    AlphaDomain { value: f64 },
}

/// Degree structure of a synthetic dependency graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphShape {
    /// Every vertex has degree exactly `degree`.
    Regular,
    /// Degrees vary but never exceed `degree`.
    BoundedRandom,
}

/// Builds a synthetic dependency graph on `n` vertices with the requested
/// degree structure, deterministically in `seed`.
pub fn generate_graph(
    n: usize,
    degree: usize,
    shape: GraphShape,
    seed: u64,
) -> Result<AdjacencyMatrix, SimulationError> {
    if degree >= n {
        return Err(SimulationError::DegreeTooLarge { degree, n });
    }
    match shape {
        GraphShape::Regular => regular_graph(n, degree, seed),
        GraphShape::BoundedRandom => Ok(bounded_random_graph(n, degree, seed)),
    }
}

/// Random regular graph by stub matching: each vertex contributes `degree`
/// stubs, a shuffle pairs them up, and the pairing is accepted if it forms
/// a simple graph. A handful of shuffles almost always suffices; the
/// deterministic circulant construction is the fallback so the function
/// never fails on feasible parameters.
fn regular_graph(
    n: usize,
    degree: usize,
    seed: u64,
) -> Result<AdjacencyMatrix, SimulationError> {
    if n * degree % 2 != 0 {
        return Err(SimulationError::OddRegularProduct { degree, n });
    }
    if degree == 0 {
        return Ok(AdjacencyMatrix::empty(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, degree)).collect();
    'attempt: for _ in 0..200 {
        stubs.shuffle(&mut rng);
        let mut seen = std::collections::HashSet::with_capacity(stubs.len() / 2);
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0], pair[1]);
            if a == b || !seen.insert((a.min(b), a.max(b))) {
                continue 'attempt;
            }
        }
        let edges = stubs.chunks_exact(2).map(|p| (p[0], p[1]));
        return Ok(AdjacencyMatrix::new(n, edges).expect("stub pairing is simple"));
    }
    // Circulant fallback: neighbours at offsets 1..=degree/2 in both
    // directions, plus the antipode when the degree is odd (n is even
    // then, since n * degree is even).
    let mut edges = Vec::with_capacity(n * degree / 2);
    for v in 0..n {
        for k in 1..=degree / 2 {
            edges.push((v, (v + k) % n));
        }
    }
    if degree % 2 == 1 {
        for v in 0..n / 2 {
            edges.push((v, v + n / 2));
        }
    }
    Ok(AdjacencyMatrix::new(n, edges).expect("circulant is simple"))
}

/// Random graph with degrees bounded by `degree`: repeatedly pick a random
/// pair and keep it when both endpoints still have headroom. The attempt
/// budget keeps expected degrees close to (but below) the bound without
/// chasing the last few hard-to-place edges.
fn bounded_random_graph(n: usize, degree: usize, seed: u64) -> AdjacencyMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adjacent = std::collections::HashSet::new();
    let mut remaining: Vec<usize> = vec![degree; n];
    let mut edges = Vec::new();
    for _ in 0..2 * n * degree {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u == v || remaining[u] == 0 || remaining[v] == 0 {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if adjacent.insert(key) {
            remaining[u] -= 1;
            remaining[v] -= 1;
            edges.push(key);
        }
    }
    AdjacencyMatrix::new(n, edges).expect("pairs are checked before insertion")
}

/// Outcome-generating process over a fixed dependency graph.
///
/// `X_i = mu + vertex_scale · Z_i + edge_scale · Σ_{e ∋ i} U_e` with all
/// factors independent Uniform(−1, 1). Adjacent outcomes share exactly one
/// edge factor; everything else is private.
#[derive(Clone, Debug)]
pub struct EdgeFactorModel {
    graph: AdjacencyMatrix,
    mu: f64,
    vertex_scale: f64,
    edge_scale: f64,
}

impl EdgeFactorModel {
    pub fn new(graph: AdjacencyMatrix, mu: f64, vertex_scale: f64, edge_scale: f64) -> Self {
        Self {
            graph,
            mu,
            vertex_scale,
            edge_scale,
        }
    }

    pub fn graph(&self) -> &AdjacencyMatrix {
        &self.graph
    }

    pub fn mean(&self) -> f64 {
        self.mu
    }

    /// Closed-form `var(X̄)`. A Uniform(−1, 1) factor has variance 1/3;
    /// each vertex contributes its private factor and one shared factor
    /// per incident edge, and each edge links exactly one pair, so
    /// `var(X̄) = (n·a² + 4·|E|·b²) / (3n²)`.
    pub fn mean_variance(&self) -> f64 {
        let n = self.graph.n() as f64;
        let edges = self.graph.edge_count() as f64;
        let a = self.vertex_scale;
        let b = self.edge_scale;
        (n * a * a + 4.0 * edges * b * b) / (3.0 * n * n)
    }

    /// One outcome vector. Vertex factors are drawn first, then edge
    /// factors in edge order, so the draw is reproducible from the rng
    /// state alone.
    pub fn sample_outcomes(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut outcomes: Vec<f64> = (0..self.graph.n())
            .map(|_| self.mu + self.vertex_scale * rng.random_range(-1.0..1.0))
            .collect();
        for &(i, j) in self.graph.edges() {
            let shared = self.edge_scale * rng.random_range(-1.0..1.0);
            outcomes[i] += shared;
            outcomes[j] += shared;
        }
        outcomes
    }
}

/// One study draw: outcomes from the model, the true degrees as the
/// reported degree bounds, and an observed edge set that keeps each true
/// edge independently with probability `observe_probability`.
pub fn sample_observed(
    model: &EdgeFactorModel,
    observe_probability: f64,
    rng: &mut ChaCha8Rng,
) -> ObservedData {
    let outcomes = model.sample_outcomes(rng);
    let observed = model
        .graph()
        .edges()
        .iter()
        .copied()
        .filter(|_| rng.random_range(0.0..1.0) < observe_probability)
        .collect::<Vec<_>>();
    ObservedData::new(outcomes, model.graph().degrees(), observed)
        .expect("model data is structurally valid")
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Derives an independent stream key from a seed and a context index.
fn mix(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ index.wrapping_mul(0x9E3779B97F4A7C15))
}

/// Maps replicate indices to outputs, in parallel when the feature is on.
/// Collection preserves index order, so downstream folds are independent
/// of the thread count.
fn map_replicates<T: Send>(count: usize, job: impl Fn(usize) -> T + Send + Sync) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        (0..count).into_par_iter().map(job).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(job).collect()
    }
}

/// Parameters of a consistency study: how the scaled general estimator at
/// the true matrix behaves as `n` grows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConsistencyConfig {
    pub sizes: Vec<usize>,
    pub replicates: usize,
    pub degree: usize,
    pub shape: GraphShape,
    pub mu: f64,
    pub vertex_scale: f64,
    pub edge_scale: f64,
    pub seed: u64,
}

/// Behaviour of `n · V̂₁(Å)` at one sample size.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConsistencyRow {
    pub n: usize,
    pub replicates: usize,
    /// `n · var(X̄)` under the model, the estimand of the scaled estimator.
    pub scaled_truth: f64,
    pub mean_scaled_estimate: f64,
    pub bias: f64,
    pub rmse: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub rows: Vec<ConsistencyRow>,
}

/// Runs the consistency study: for each size, draw outcomes over a fresh
/// graph, evaluate the general estimator at the true matrix with the graph
/// fully observed, and aggregate bias and root-mean-square error of the
/// scaled estimates.
pub fn run_consistency_study(
    config: &ConsistencyConfig,
) -> Result<ConsistencyReport, SimulationError> {
    if config.replicates == 0 {
        return Err(SimulationError::NoReplicates);
    }
    let mut rows = Vec::with_capacity(config.sizes.len());
    for (size_index, &n) in config.sizes.iter().enumerate() {
        if n < 2 {
            return Err(SimulationError::TooFewVertices { n });
        }
        let graph_seed = mix(config.seed, size_index as u64);
        let graph = generate_graph(n, config.degree, config.shape, graph_seed)?;
        let model = EdgeFactorModel::new(graph, config.mu, config.vertex_scale, config.edge_scale);
        let truth = (n as f64) * model.mean_variance();

        let scaled: Vec<f64> = map_replicates(config.replicates, |r| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix(graph_seed, 1 + r as u64));
            let data = sample_observed(&model, 1.0, &mut rng);
            let estimate = estimators::v1(model.graph(), &data)
                .expect("dimensions match by construction");
            n as f64 * estimate.value
        });

        let count = scaled.len() as f64;
        let mean = scaled.iter().sum::<f64>() / count;
        let mse = scaled.iter().map(|s| (s - truth) * (s - truth)).sum::<f64>() / count;
        rows.push(ConsistencyRow {
            n,
            replicates: config.replicates,
            scaled_truth: truth,
            mean_scaled_estimate: mean,
            bias: mean - truth,
            rmse: mse.sqrt(),
        });
    }
    Ok(ConsistencyReport { rows })
}

/// Parameters of a coverage study: the full pipeline (estimate, maximise,
/// interval) over replicated draws from one model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverageConfig {
    pub n: usize,
    pub replicates: usize,
    pub degree: usize,
    pub shape: GraphShape,
    /// Probability that a true edge lands in the observed set.
    pub observe_probability: f64,
    pub alpha: f64,
    pub mu: f64,
    pub vertex_scale: f64,
    pub edge_scale: f64,
    pub seed: u64,
    /// Solver gap tolerance; `None` means the solver default.
    #[serde(default)]
    pub gap_tolerance: Option<f64>,
    /// Per-solve wall-clock limit in seconds; `None` means unlimited.
    #[serde(default)]
    pub time_limit_seconds: Option<f64>,
}

/// Aggregate behaviour of one estimator across replicates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimatorSummary {
    pub estimator: String,
    /// Fraction of replicates whose interval contains the model mean.
    pub coverage: f64,
    pub mean_interval_width: f64,
    pub mean_estimate: f64,
    /// Fraction of replicates with an estimate below the true `var(X̄)`.
    pub underestimate_fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverageReport {
    pub n: usize,
    pub replicates: usize,
    pub alpha: f64,
    pub true_mean: f64,
    pub true_variance: f64,
    /// Summaries in pipeline order: naive, v1, v2, v2_prime.
    pub estimators: Vec<EstimatorSummary>,
    /// Replicates where a solve ended non-optimal (time or budget). The
    /// affected estimates still enter every aggregate above; this count
    /// flags them rather than dropping them.
    pub solver_flagged: u64,
    /// Replicates violating the dominance relations between estimators at
    /// the true and maximising matrices. Always zero unless a solve ended
    /// non-optimal or the arithmetic misbehaved.
    pub ordering_violations: u64,
    /// Replicates where the general estimator was negative even at its
    /// maximiser, leaving no usable interval; counted as non-covering
    /// with a zero-width interval.
    pub negative_estimates: u64,
}

/// Crossing counts from one replicate, in estimator order naive, v1, v2,
/// v2_prime.
struct ReplicateOutcome {
    hits: [bool; 4],
    widths: [f64; 4],
    estimates: [f64; 4],
    under: [bool; 4],
    flagged: bool,
    ordering_violation: bool,
    negative_estimate: bool,
}

/// Runs the coverage study. The graph is drawn once; replicates redraw
/// outcomes and the observed edge subset, then run the full pipeline:
/// naive and closed-form estimators directly, the general and count
/// estimators at maximisers found by the solver (the count estimator
/// through the constructive fast path when it applies).
pub fn run_coverage_study(config: &CoverageConfig) -> Result<CoverageReport, SimulationError> {
    if config.replicates == 0 {
        return Err(SimulationError::NoReplicates);
    }
    if config.n < 2 {
        return Err(SimulationError::TooFewVertices { n: config.n });
    }
    if !(0.0..=1.0).contains(&config.observe_probability) {
        return Err(SimulationError::ObserveProbabilityDomain {
            value: config.observe_probability,
        });
    }
    if !(config.alpha > 0.0 && config.alpha < 1.0) {
        return Err(SimulationError::AlphaDomain {
            value: config.alpha,
        });
    }

    let graph_seed = mix(config.seed, 0);
    let graph = generate_graph(config.n, config.degree, config.shape, graph_seed)?;
    let model = EdgeFactorModel::new(graph, config.mu, config.vertex_scale, config.edge_scale);
    let truth = model.mean_variance();
    let solver_config = SolverConfig {
        gap_tolerance: config
            .gap_tolerance
            .unwrap_or(SolverConfig::default().gap_tolerance),
        time_limit: config.time_limit_seconds.map(std::time::Duration::from_secs_f64),
        // Replicates already saturate the thread pool; nested parallel
        // solves would only fight them for cores.
        threads: 1,
        ..SolverConfig::default()
    };

    let outcomes: Vec<ReplicateOutcome> = map_replicates(config.replicates, |r| {
        let mut rng = ChaCha8Rng::seed_from_u64(mix(graph_seed, 1 + r as u64));
        let data = sample_observed(&model, config.observe_probability, &mut rng);
        run_replicate(&model, &data, config.alpha, truth, &solver_config)
    });

    let count = config.replicates as f64;
    let mut hits = [0u64; 4];
    let mut widths = [0.0f64; 4];
    let mut estimates = [0.0f64; 4];
    let mut under = [0u64; 4];
    let mut flagged = 0u64;
    let mut violations = 0u64;
    let mut negatives = 0u64;
    for outcome in &outcomes {
        for k in 0..4 {
            hits[k] += outcome.hits[k] as u64;
            widths[k] += outcome.widths[k];
            estimates[k] += outcome.estimates[k];
            under[k] += outcome.under[k] as u64;
        }
        flagged += outcome.flagged as u64;
        violations += outcome.ordering_violation as u64;
        negatives += outcome.negative_estimate as u64;
    }

    let names = ["naive", "v1", "v2", "v2_prime"];
    let estimators = (0..4)
        .map(|k| EstimatorSummary {
            estimator: names[k].to_string(),
            coverage: hits[k] as f64 / count,
            mean_interval_width: widths[k] / count,
            mean_estimate: estimates[k] / count,
            underestimate_fraction: under[k] as f64 / count,
        })
        .collect();

    Ok(CoverageReport {
        n: config.n,
        replicates: config.replicates,
        alpha: config.alpha,
        true_mean: model.mean(),
        true_variance: truth,
        estimators,
        solver_flagged: flagged,
        ordering_violations: violations,
        negative_estimates: negatives,
    })
}

fn run_replicate(
    model: &EdgeFactorModel,
    data: &ObservedData,
    alpha: f64,
    truth: f64,
    solver_config: &SolverConfig,
) -> ReplicateOutcome {
    let mean = sample_mean(data.outcomes()).expect("outcomes are non-empty");
    let mut flagged = false;

    let naive = estimators::naive(data).expect("non-empty outcomes");

    let v1_instance = build_v1_instance(data).expect("model data is consistent");
    let v1_result = solver::solve(&v1_instance, solver_config);
    flagged |= v1_result.status != SolveStatus::Optimal;
    let v1_max = estimators::v1(&v1_result.best_matrix, data).expect("dimensions match");

    let v2_matrix = match max_v2_fast_path(data) {
        Some(matrix) => matrix,
        None => {
            let instance = build_v2_instance(data).expect("model data is consistent");
            let result = solver::solve(&instance, solver_config);
            flagged |= result.status != SolveStatus::Optimal;
            result.best_matrix
        }
    };
    let v2_max = estimators::v2(&v2_matrix, data).expect("dimensions match");
    let v2_prime = estimators::v2_prime(data).expect("non-empty outcomes");

    // Dominance at the reported maximisers: the true matrix is compatible
    // with its own data, so an exact maximiser cannot fall below it, and
    // the closed-form bound dominates every compatible edge count.
    let tolerance = 1e-9 * (1.0 + v1_max.value.abs().max(v2_prime.value.abs()));
    let v1_true = estimators::v1(model.graph(), data).expect("dimensions match");
    let v2_true = estimators::v2(model.graph(), data).expect("dimensions match");
    let ordering_violation = v1_true.value > v1_max.value + tolerance
        || v2_true.value > v2_max.value + tolerance
        || v2_max.value > v2_prime.value + tolerance;

    let mut hits = [false; 4];
    let mut widths = [0.0f64; 4];
    let mut ests = [0.0f64; 4];
    let mut under = [false; 4];
    let mut negative_estimate = false;
    for (k, estimate) in [&naive, &v1_max, &v2_max, &v2_prime].into_iter().enumerate() {
        ests[k] = estimate.value;
        under[k] = estimate.value < truth;
        match wald_ci(mean, estimate.value.max(0.0), alpha) {
            Ok(interval) => {
                hits[k] = interval.lower <= model.mean() && model.mean() <= interval.upper;
                widths[k] = interval.upper - interval.lower;
            }
            Err(_) => unreachable!("variance is clamped and alpha validated"),
        }
        if estimate.value < 0.0 {
            negative_estimate = true;
            hits[k] = mean == model.mean();
        }
    }

    ReplicateOutcome {
        hits,
        widths,
        estimates: ests,
        under,
        flagged,
        ordering_violation,
        negative_estimate,
    }
}

pub mod ks {
    //! Kolmogorov–Smirnov distance to the standard normal, with the
    //! asymptotic tail probability for large samples.

    use crate::inference::normal_cdf;

    /// Supremum distance between the empirical distribution of `samples`
    /// and the standard normal.
    pub fn distance_to_standard_normal(samples: &[f64]) -> f64 {
        let mut sorted = samples.to_vec();
        sorted.sort_unstable_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let mut distance: f64 = 0.0;
        for (i, &x) in sorted.iter().enumerate() {
            let cdf = normal_cdf(x);
            let below = i as f64 / n;
            let above = (i + 1) as f64 / n;
            distance = distance.max(cdf - below).max(above - cdf);
        }
        distance
    }

    /// Asymptotic p-value of a distance `d` from `n` samples:
    /// `P(√n·D > x) → 2 Σ_{k≥1} (−1)^{k−1} exp(−2k²x²)`. Accurate for the
    /// sample sizes the studies use (hundreds and up).
    pub fn asymptotic_p_value(distance: f64, n: usize) -> f64 {
        let x = distance * (n as f64).sqrt();
        if x <= 0.0 {
            return 1.0;
        }
        let mut sum = 0.0;
        let mut sign = 1.0;
        for k in 1..=100u32 {
            let term = (-2.0 * (k * k) as f64 * x * x).exp();
            sum += sign * term;
            if term < 1e-12 {
                break;
            }
            sign = -sign;
        }
        (2.0 * sum).clamp(0.0, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_graph_hits_the_degree_exactly() {
        for (n, degree) in [(8, 3), (9, 4), (20, 6), (15, 2)] {
            let graph = generate_graph(n, degree, GraphShape::Regular, 7).unwrap();
            assert!(graph.degrees().iter().all(|&d| d as usize == degree));
        }
    }

    #[test]
    fn infeasible_regular_parameters_are_rejected() {
        assert_eq!(
            generate_graph(5, 3, GraphShape::Regular, 1),
            Err(SimulationError::OddRegularProduct { degree: 3, n: 5 })
        );
        assert_eq!(
            generate_graph(4, 4, GraphShape::Regular, 1),
            Err(SimulationError::DegreeTooLarge { degree: 4, n: 4 })
        );
    }

    #[test]
    fn bounded_random_graph_respects_the_bound() {
        let graph = generate_graph(40, 5, GraphShape::BoundedRandom, 11).unwrap();
        assert!(graph.degrees().iter().all(|&d| d <= 5));
        assert!(graph.edge_count() > 0);
    }

    #[test]
    fn graph_generation_is_deterministic_in_the_seed() {
        for shape in [GraphShape::Regular, GraphShape::BoundedRandom] {
            let a = generate_graph(30, 4, shape, 42).unwrap();
            let b = generate_graph(30, 4, shape, 42).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn outcomes_are_bounded_by_the_scales() {
        let graph = generate_graph(50, 4, GraphShape::Regular, 3).unwrap();
        let model = EdgeFactorModel::new(graph, 2.0, 0.5, 0.25);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let outcomes = model.sample_outcomes(&mut rng);
        // |X - mu| <= a + d * b with every factor in (-1, 1).
        let limit = 0.5 + 4.0 * 0.25;
        assert!(outcomes.iter().all(|&x| (x - 2.0).abs() <= limit));
    }

    /// Monte Carlo check of the closed-form variance: the empirical
    /// variance of the sample mean over many draws has relative standard
    /// error ~ sqrt(2 / replicates), so 4000 replicates pin it to a few
    /// percent.
    #[test]
    fn closed_form_variance_matches_monte_carlo() {
        let graph = generate_graph(24, 3, GraphShape::Regular, 5).unwrap();
        let model = EdgeFactorModel::new(graph, 1.0, 1.0, 0.75);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let replicates = 4000;
        let means: Vec<f64> = (0..replicates)
            .map(|_| {
                let outcomes = model.sample_outcomes(&mut rng);
                outcomes.iter().sum::<f64>() / outcomes.len() as f64
            })
            .collect();
        let grand = means.iter().sum::<f64>() / replicates as f64;
        let empirical =
            means.iter().map(|m| (m - grand) * (m - grand)).sum::<f64>() / replicates as f64;
        let truth = model.mean_variance();
        assert!(
            (empirical - truth).abs() < 0.12 * truth,
            "empirical {empirical} vs closed form {truth}"
        );
    }

    #[test]
    fn observed_data_thins_edges_but_keeps_degrees() {
        let graph = generate_graph(30, 4, GraphShape::Regular, 21).unwrap();
        let model = EdgeFactorModel::new(graph, 0.0, 1.0, 1.0);

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let full = sample_observed(&model, 1.0, &mut rng);
        assert_eq!(full.observed_edges(), model.graph());

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let none = sample_observed(&model, 0.0, &mut rng);
        assert_eq!(none.observed_edges().edge_count(), 0);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let half = sample_observed(&model, 0.5, &mut rng);
        assert!(half
            .observed_edges()
            .edges()
            .iter()
            .all(|&(i, j)| model.graph().contains(i, j)));
        assert_eq!(half.degrees(), model.graph().degrees().as_slice());
    }

    #[test]
    fn consistency_study_tightens_with_sample_size() {
        let config = ConsistencyConfig {
            sizes: vec![40, 160],
            replicates: 400,
            degree: 3,
            shape: GraphShape::Regular,
            mu: 0.0,
            vertex_scale: 1.0,
            edge_scale: 0.5,
            seed: 31,
        };
        let report = run_consistency_study(&config).unwrap();
        assert_eq!(report.rows.len(), 2);
        let small = &report.rows[0];
        let large = &report.rows[1];
        assert!(large.rmse < small.rmse, "rmse {} vs {}", large.rmse, small.rmse);
        assert!(large.bias.abs() < 0.1 * large.scaled_truth);
    }

    #[test]
    fn coverage_study_reports_are_sane_and_reproducible() {
        let config = CoverageConfig {
            n: 24,
            replicates: 40,
            degree: 3,
            shape: GraphShape::Regular,
            observe_probability: 0.5,
            alpha: 0.1,
            mu: 1.0,
            vertex_scale: 1.0,
            edge_scale: 0.7,
            seed: 77,
            gap_tolerance: None,
            time_limit_seconds: None,
        };
        let report = run_coverage_study(&config).unwrap();
        assert_eq!(report.estimators.len(), 4);
        for summary in &report.estimators {
            assert!((0.0..=1.0).contains(&summary.coverage));
            assert!(summary.mean_interval_width >= 0.0);
            assert!((0.0..=1.0).contains(&summary.underestimate_fraction));
        }
        assert_eq!(report.ordering_violations, 0);
        assert_eq!(report.solver_flagged, 0);

        let again = run_coverage_study(&config).unwrap();
        assert_eq!(
            serde_json::to_string(&report).unwrap(),
            serde_json::to_string(&again).unwrap()
        );
    }

    /// The maximised conservative estimators should never cover less than
    /// the naive estimator on dependent data; with positively correlated
    /// outcomes the gap is strict for reasonable replicate counts.
    #[test]
    fn conservative_intervals_are_wider_than_naive() {
        let config = CoverageConfig {
            n: 30,
            replicates: 60,
            degree: 4,
            shape: GraphShape::Regular,
            observe_probability: 0.3,
            alpha: 0.1,
            mu: 0.0,
            vertex_scale: 0.5,
            edge_scale: 1.0,
            seed: 123,
            gap_tolerance: None,
            time_limit_seconds: None,
        };
        let report = run_coverage_study(&config).unwrap();
        let width = |name: &str| {
            report
                .estimators
                .iter()
                .find(|s| s.estimator == name)
                .unwrap()
                .mean_interval_width
        };
        assert!(width("v1") > width("naive"));
        assert!(width("v2") > width("naive"));
        assert!(width("v2_prime") >= width("v2") - 1e-12);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn studies_are_thread_count_independent() {
        let config = CoverageConfig {
            n: 20,
            replicates: 24,
            degree: 3,
            shape: GraphShape::BoundedRandom,
            observe_probability: 0.6,
            alpha: 0.05,
            mu: 0.5,
            vertex_scale: 1.0,
            edge_scale: 0.5,
            seed: 9000,
            gap_tolerance: None,
            time_limit_seconds: None,
        };
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_coverage_study(&config).unwrap());
        let several = rayon::ThreadPoolBuilder::new()
            .num_threads(3)
            .build()
            .unwrap()
            .install(|| run_coverage_study(&config).unwrap());
        assert_eq!(
            serde_json::to_string(&single).unwrap(),
            serde_json::to_string(&several).unwrap()
        );
    }

    #[test]
    fn ks_distance_is_small_for_normal_quantiles() {
        // An ideal sample: the quantiles of the standard normal itself.
        let n = 500;
        let samples: Vec<f64> = (1..=n)
            .map(|i| {
                crate::inference::normal_quantile((i as f64 - 0.5) / n as f64).unwrap()
            })
            .collect();
        let d = ks::distance_to_standard_normal(&samples);
        assert!(d <= 0.5 / n as f64 + 1e-12, "distance {d}");
        assert!(ks::asymptotic_p_value(d, n) > 0.99);
    }

    #[test]
    fn ks_tail_probability_matches_tabulated_values() {
        // Kolmogorov's limit distribution: Q(1.0) ~ 0.2700, Q(0.5) ~ 0.9639.
        let q = |x: f64| ks::asymptotic_p_value(x, 1);
        assert!((q(1.0) - 0.2700).abs() < 1e-3);
        assert!((q(0.5) - 0.9639).abs() < 1e-3);
        assert!(q(2.0) < 7e-4);
        assert_eq!(q(0.0), 1.0);
    }

    #[test]
    fn invalid_study_configs_are_rejected() {
        let base = CoverageConfig {
            n: 10,
            replicates: 5,
            degree: 2,
            shape: GraphShape::Regular,
            observe_probability: 0.5,
            alpha: 0.05,
            mu: 0.0,
            vertex_scale: 1.0,
            edge_scale: 1.0,
            seed: 0,
            gap_tolerance: None,
            time_limit_seconds: None,
        };
        let bad_p = CoverageConfig {
            observe_probability: 1.5,
            ..base.clone()
        };
        assert!(matches!(
            run_coverage_study(&bad_p),
            Err(SimulationError::ObserveProbabilityDomain { .. })
        ));
        let bad_alpha = CoverageConfig {
            alpha: 0.0,
            ..base.clone()
        };
        assert!(matches!(
            run_coverage_study(&bad_alpha),
            Err(SimulationError::AlphaDomain { .. })
        ));
        let no_reps = CoverageConfig {
            replicates: 0,
            ..base
        };
        assert!(matches!(
            run_coverage_study(&no_reps),
            Err(SimulationError::NoReplicates)
        ));
    }
}
