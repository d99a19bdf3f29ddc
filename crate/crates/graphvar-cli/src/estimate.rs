//! `graphvar estimate`: read outcomes (and optionally observed edges), pick
//! a set of estimators, maximise the solver-backed ones over the compatible
//! graphs, and print point estimates with Wald confidence intervals.

use clap::Args;
use graphvar::io::{build_observed_data, read_edges, read_outcomes};
use graphvar::{
    estimators, wald_ci, EstimatorKind, ObservedData, SolverConfig, VarianceEstimate,
};
use serde::Serialize;
use std::fs;
use std::path::PathBuf;
use std::time::Duration;

use crate::report::{emit_json, sig6, FileEcho, SolverSummary};
use crate::Failure;

#[derive(Args)]
pub struct EstimateArgs {
    /// Outcomes file: delimited text with header `id,x` or `id,x,d`
    pub outcomes: PathBuf,

    /// Observed-edges file: delimited text with header `id_i,id_j`
    #[arg(long)]
    pub edges: Option<PathBuf>,

    /// Significance level of the confidence intervals
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,

    /// Comma-separated estimators to run: naive, v1, v2, v2_prime
    #[arg(long, value_delimiter = ',')]
    pub estimators: Option<Vec<String>>,

    /// Also run the homoskedastic-style estimators (v2, v2_prime)
    #[arg(long)]
    pub assume_homoskedastic: bool,

    /// Degree bound applied to every vertex, replacing the file's `d` column
    #[arg(long)]
    pub global_degree_bound: Option<u32>,

    /// Absolute optimality gap at which the solver may stop
    #[arg(long, default_value_t = 1e-9)]
    pub gap: f64,

    /// Wall-clock limit per solve, in seconds
    #[arg(long)]
    pub time_limit: Option<f64>,

    /// Solver threads (0 = library default)
    #[arg(long, default_value_t = 0)]
    pub threads: usize,

    /// Recorded in the report for provenance; estimation is deterministic
    #[arg(long)]
    pub seed: Option<u64>,

    /// Fail (exit 5) if the observed edges contradict the reported degrees
    #[arg(long)]
    pub check: bool,

    /// Print the report as JSON instead of the human-readable table
    #[arg(long)]
    pub json: bool,

    /// Also write the JSON report to this file
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Write the solver instance to this file and exit without solving
    #[arg(long)]
    pub dump_instance: Option<PathBuf>,
}

#[derive(Serialize)]
struct InputsEcho {
    outcomes: FileEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    edges: Option<FileEcho>,
    n: usize,
    observed_edges: usize,
}

#[derive(Serialize)]
struct IntervalEcho {
    lower: f64,
    upper: f64,
    half_width: f64,
}

#[derive(Serialize)]
struct EstimateRow {
    estimator: String,
    variance: f64,
    /// `sqrt(variance)`; absent when the variance estimate is negative.
    #[serde(skip_serializing_if = "Option::is_none")]
    standard_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    interval: Option<IntervalEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    solver: Option<SolverSummary>,
}

#[derive(Serialize)]
struct EstimateReport {
    command: &'static str,
    alpha: f64,
    assume_homoskedastic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    global_degree_bound: Option<u32>,
    gap_tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    time_limit_seconds: Option<f64>,
    threads: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    inputs: InputsEcho,
    sample_mean: f64,
    sample_variance: f64,
    estimates: Vec<EstimateRow>,
    warnings: Vec<String>,
}

fn parse_estimator(name: &str) -> Result<EstimatorKind, Failure> {
    match name.trim() {
        "naive" => Ok(EstimatorKind::Naive),
        "v1" => Ok(EstimatorKind::V1),
        "v2" => Ok(EstimatorKind::V2),
        "v2_prime" | "v2-prime" => Ok(EstimatorKind::V2Prime),
        other => Err(Failure::Input(format!(
            "unknown estimator {other:?}; expected naive, v1, v2, or v2_prime"
        ))),
    }
}

/// The estimators to run, in report order. Explicit `--estimators` wins;
/// otherwise naive and v1 always run and `--assume-homoskedastic` adds the
/// two estimators whose guarantee needs that assumption.
fn select_estimators(args: &EstimateArgs) -> Result<Vec<EstimatorKind>, Failure> {
    let mut selected = match &args.estimators {
        Some(names) => {
            let mut kinds = Vec::new();
            for name in names {
                kinds.push(parse_estimator(name)?);
            }
            kinds
        }
        None => {
            let mut kinds = vec![EstimatorKind::Naive, EstimatorKind::V1];
            if args.assume_homoskedastic {
                kinds.push(EstimatorKind::V2);
                kinds.push(EstimatorKind::V2Prime);
            }
            kinds
        }
    };
    if selected.is_empty() {
        return Err(Failure::Input("no estimators selected".into()));
    }
    let order = |k: &EstimatorKind| match k {
        EstimatorKind::Naive => 0,
        EstimatorKind::V1 => 1,
        EstimatorKind::V2 => 2,
        EstimatorKind::V2Prime => 3,
    };
    selected.sort_by_key(order);
    selected.dedup();
    Ok(selected)
}

fn solver_config(args: &EstimateArgs) -> SolverConfig {
    SolverConfig {
        gap_tolerance: args.gap,
        time_limit: args.time_limit.map(Duration::from_secs_f64),
        node_limit: None,
        threads: args.threads,
    }
}

/// Evaluates one estimator, solving for the maximising matrix when the
/// estimator depends on the unknown part of the graph. Returns the variance
/// estimate plus the solver summary for solver-backed estimators.
fn evaluate(
    kind: EstimatorKind,
    data: &ObservedData,
    config: &SolverConfig,
) -> Result<(VarianceEstimate, Option<SolverSummary>), Failure> {
    let map_err = |e: graphvar::DataError| Failure::Input(e.to_string());
    match kind {
        EstimatorKind::Naive => Ok((estimators::naive(data).map_err(map_err)?, None)),
        EstimatorKind::V2Prime => Ok((estimators::v2_prime(data).map_err(map_err)?, None)),
        EstimatorKind::V1 => {
            let instance =
                graphvar::build_v1_instance(data).map_err(|e| Failure::Input(e.to_string()))?;
            let result = graphvar::solve(&instance, config);
            let estimate = estimators::v1(&result.best_matrix, data).map_err(map_err)?;
            Ok((estimate, Some(SolverSummary::from_result(&result))))
        }
        EstimatorKind::V2 => {
            if let Some(matrix) = graphvar::max_v2_fast_path(data) {
                let estimate = estimators::v2(&matrix, data).map_err(map_err)?;
                return Ok((estimate, None));
            }
            let instance =
                graphvar::build_v2_instance(data).map_err(|e| Failure::Input(e.to_string()))?;
            let result = graphvar::solve(&instance, config);
            let estimate = estimators::v2(&result.best_matrix, data).map_err(map_err)?;
            Ok((estimate, Some(SolverSummary::from_result(&result))))
        }
    }
}

pub fn run(args: EstimateArgs) -> Result<(), Failure> {
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        return Err(Failure::Input(format!(
            "alpha {} outside the open interval (0, 1)",
            args.alpha
        )));
    }
    let selected = select_estimators(&args)?;

    let table = read_outcomes(&args.outcomes).map_err(|e| Failure::Input(e.to_string()))?;
    let mut warnings = Vec::new();
    let (edge_pairs, edges_echo) = match &args.edges {
        Some(path) => {
            let list = read_edges(path, &table).map_err(|e| Failure::Input(e.to_string()))?;
            warnings.extend(list.warnings);
            (list.edges, Some(FileEcho::new(path)?))
        }
        None => (Vec::new(), None),
    };

    if table.degrees.is_none() && args.global_degree_bound.is_none() {
        let fallback = (table.n() - 1) as u32;
        warnings.push(format!(
            "{}: no degree column and no --global-degree-bound; treating every \
             vertex as possibly adjacent to all others (degree bound {fallback}), \
             which makes the conservative intervals their widest",
            args.outcomes.display()
        ));
        eprintln!("warning: {}", warnings.last().unwrap());
    }
    let degree_fill = match (args.global_degree_bound, table.degrees.is_some()) {
        (Some(bound), _) => Some(bound),
        (None, true) => None,
        (None, false) => Some((table.n() - 1) as u32),
    };
    let data = build_observed_data(&table, &edge_pairs, degree_fill)
        .map_err(|e| Failure::Input(e.to_string()))?;

    let compat = data.validate();
    for violation in &compat.violations {
        warnings.push(violation.to_string());
    }
    if args.check && !compat.compatible {
        return Err(Failure::Check(
            compat.violations.iter().map(|v| v.to_string()).collect(),
        ));
    }

    if let Some(path) = &args.dump_instance {
        // The v1 instance carries the residual-product weights; it is the
        // one worth inspecting or replaying through `graphvar solve`.
        let instance =
            graphvar::build_v1_instance(&data).map_err(|e| Failure::Input(e.to_string()))?;
        fs::write(path, instance.dump())
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        println!("wrote instance ({} vertices) to {}", data.n(), path.display());
        return Ok(());
    }

    let config = solver_config(&args);
    let mean = graphvar::sample_mean(data.outcomes()).map_err(|e| Failure::Input(e.to_string()))?;
    let sample_variance =
        graphvar::sample_variance(data.outcomes()).map_err(|e| Failure::Input(e.to_string()))?;

    let mut rows = Vec::new();
    let mut non_optimal: Vec<String> = Vec::new();
    for kind in &selected {
        let (estimate, solver) = evaluate(*kind, &data, &config)?;
        if let Some(summary) = &solver {
            if !summary.is_optimal() {
                non_optimal.push(format!(
                    "{} solve stopped with status {} (gap {})",
                    kind, summary.status, summary.gap
                ));
            }
        }
        let (standard_error, interval) = if estimate.value >= 0.0 {
            let ci = wald_ci(mean, estimate.value, args.alpha)
                .map_err(|e| Failure::Input(e.to_string()))?;
            (
                Some(estimate.value.sqrt()),
                Some(IntervalEcho {
                    lower: ci.lower,
                    upper: ci.upper,
                    half_width: ci.half_width,
                }),
            )
        } else {
            warnings.push(format!(
                "{kind} variance estimate is negative ({}); no interval reported",
                estimate.value
            ));
            (None, None)
        };
        rows.push(EstimateRow {
            estimator: kind.to_string(),
            variance: estimate.value,
            standard_error,
            interval,
            solver,
        });
    }

    let report = EstimateReport {
        command: "estimate",
        alpha: args.alpha,
        assume_homoskedastic: args.assume_homoskedastic,
        global_degree_bound: args.global_degree_bound,
        gap_tolerance: args.gap,
        time_limit_seconds: args.time_limit,
        threads: args.threads,
        seed: args.seed,
        inputs: InputsEcho {
            outcomes: FileEcho::new(&args.outcomes)?,
            edges: edges_echo,
            n: data.n(),
            observed_edges: data.observed_edges().edge_count(),
        },
        sample_mean: mean,
        sample_variance,
        estimates: rows,
        warnings,
    };

    let printed = emit_json(&report, args.json, args.output.as_deref())?;
    if !printed {
        print_human(&report);
    }

    if let Some(first) = non_optimal.into_iter().next() {
        return Err(Failure::Solver(first));
    }
    Ok(())
}

fn print_human(report: &EstimateReport) {
    println!(
        "n = {} ({} observed edge{})",
        report.inputs.n,
        report.inputs.observed_edges,
        if report.inputs.observed_edges == 1 { "" } else { "s" }
    );
    println!("sample mean     = {}", sig6(report.sample_mean));
    println!("sample variance = {}", sig6(report.sample_variance));
    println!();
    let level = 100.0 * (1.0 - report.alpha);
    println!(
        "{:<10} {:>14} {:>12}   {}% interval",
        "estimator", "variance", "std.error", level
    );
    for row in &report.estimates {
        let se = row
            .standard_error
            .map(|s| sig6(s))
            .unwrap_or_else(|| "-".into());
        let interval = row
            .interval
            .as_ref()
            .map(|ci| format!("({}, {})", sig6(ci.lower), sig6(ci.upper)))
            .unwrap_or_else(|| "-".into());
        let mut line = format!(
            "{:<10} {:>14} {:>12}   {}",
            row.estimator,
            sig6(row.variance),
            se,
            interval
        );
        if let Some(solver) = &row.solver {
            line.push_str(&format!(
                "   [solver: {}, {} nodes, {:.3}s]",
                solver.status, solver.nodes_explored, solver.wall_seconds
            ));
        }
        println!("{line}");
    }
    for warning in &report.warnings {
        println!("warning: {warning}");
    }
}
