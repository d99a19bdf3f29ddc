//! `graphvar simulate`: run a Monte Carlo study described by a JSON config.
//!
//! The config is the library's study config plus a `"study"` tag and an
//! optional `"gates"` block:
//!
//! ```json
//! {
//!   "study": "coverage",
//!   "n": 200, "replicates": 500, "degree": 2, "shape": "regular",
//!   "observe_probability": 0.5, "alpha": 0.05,
//!   "mu": 0.0, "vertex_scale": 1.0, "edge_scale": 1.0, "seed": 7,
//!   "gates": { "min_coverage": { "v1": 0.92 }, "max_coverage": { "naive": 0.92 } }
//! }
//! ```
//!
//! Gates are evaluated only under `--check`. Reports are byte-identical
//! across runs and thread counts for a fixed config.

use clap::Args;
use graphvar::simulation::{
    run_consistency_study, run_coverage_study, ConsistencyConfig, ConsistencyReport,
    CoverageConfig, CoverageReport,
};
use serde::Deserialize;
use serde_json::Value;
use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use crate::report::{emit_json, sig6};
use crate::Failure;

#[derive(Args)]
pub struct SimulateArgs {
    /// JSON config file
    pub config: PathBuf,

    /// Worker threads for replicates (0 = one per core)
    #[arg(long, default_value_t = 0)]
    pub threads: usize,

    /// Fail (exit 5) if the report violates the config's gates
    #[arg(long)]
    pub check: bool,

    /// Print the report as JSON instead of the human-readable summary
    #[arg(long)]
    pub json: bool,

    /// Also write the JSON report to this file
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Pass/fail thresholds applied under `--check`. Coverage bounds are keyed
/// by estimator name; RMSE gates apply to consistency studies.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Gates {
    #[serde(default)]
    min_coverage: BTreeMap<String, f64>,
    #[serde(default)]
    max_coverage: BTreeMap<String, f64>,
    #[serde(default)]
    max_final_rmse: Option<f64>,
    #[serde(default)]
    require_decreasing_rmse: bool,
}

impl Gates {
    fn is_empty(&self) -> bool {
        self.min_coverage.is_empty()
            && self.max_coverage.is_empty()
            && self.max_final_rmse.is_none()
            && !self.require_decreasing_rmse
    }
}

enum Study {
    Coverage(CoverageConfig),
    Consistency(ConsistencyConfig),
}

fn parse_config(text: &str, path: &PathBuf) -> Result<(Study, Gates), Failure> {
    let input = |message: String| Failure::Input(format!("{}: {message}", path.display()));
    let mut value: Value =
        serde_json::from_str(text).map_err(|e| input(format!("invalid JSON: {e}")))?;
    let object = value
        .as_object_mut()
        .ok_or_else(|| input("config must be a JSON object".into()))?;
    let study_tag = match object.remove("study") {
        Some(Value::String(tag)) => tag,
        Some(_) => return Err(input("\"study\" must be a string".into())),
        None => {
            return Err(input(
                "missing \"study\" key; expected \"coverage\" or \"consistency\"".into(),
            ))
        }
    };
    let gates: Gates = match object.remove("gates") {
        Some(block) => serde_json::from_value(block)
            .map_err(|e| input(format!("invalid \"gates\" block: {e}")))?,
        None => Gates::default(),
    };
    let study = match study_tag.as_str() {
        "coverage" => Study::Coverage(
            serde_json::from_value(value).map_err(|e| input(format!("coverage config: {e}")))?,
        ),
        "consistency" => Study::Consistency(
            serde_json::from_value(value)
                .map_err(|e| input(format!("consistency config: {e}")))?,
        ),
        other => {
            return Err(input(format!(
                "unknown study {other:?}; expected \"coverage\" or \"consistency\""
            )))
        }
    };
    if let Study::Consistency(_) = &study {
        if !(gates.min_coverage.is_empty() && gates.max_coverage.is_empty()) {
            return Err(input(
                "coverage gates cannot apply to a consistency study".into(),
            ));
        }
    }
    Ok((study, gates))
}

fn check_coverage_gates(report: &CoverageReport, gates: &Gates) -> Vec<String> {
    let mut failures = Vec::new();
    // A flagged solve or an ordering violation means some estimate in the
    // aggregates is not what the method promises; that is always a failure
    // under --check, gates or no gates.
    if report.solver_flagged > 0 {
        failures.push(format!(
            "{} replicate solve(s) stopped before proving optimality",
            report.solver_flagged
        ));
    }
    if report.ordering_violations > 0 {
        failures.push(format!(
            "{} replicate(s) violated the dominance ordering of the estimators",
            report.ordering_violations
        ));
    }
    let coverage_of = |name: &str| -> Option<f64> {
        report
            .estimators
            .iter()
            .find(|s| s.estimator == name)
            .map(|s| s.coverage)
    };
    for (name, &bound) in &gates.min_coverage {
        match coverage_of(name) {
            Some(coverage) if coverage < bound => failures.push(format!(
                "{name} coverage {} below the configured minimum {bound}",
                coverage
            )),
            None => failures.push(format!("min_coverage names unknown estimator {name:?}")),
            _ => {}
        }
    }
    for (name, &bound) in &gates.max_coverage {
        match coverage_of(name) {
            Some(coverage) if coverage > bound => failures.push(format!(
                "{name} coverage {} above the configured maximum {bound}",
                coverage
            )),
            None => failures.push(format!("max_coverage names unknown estimator {name:?}")),
            _ => {}
        }
    }
    failures
}

fn check_consistency_gates(report: &ConsistencyReport, gates: &Gates) -> Vec<String> {
    let mut failures = Vec::new();
    if gates.require_decreasing_rmse {
        for pair in report.rows.windows(2) {
            if pair[1].rmse >= pair[0].rmse {
                failures.push(format!(
                    "rmse did not decrease from n={} ({}) to n={} ({})",
                    pair[0].n, pair[0].rmse, pair[1].n, pair[1].rmse
                ));
            }
        }
    }
    if let Some(bound) = gates.max_final_rmse {
        if let Some(last) = report.rows.last() {
            if last.rmse > bound {
                failures.push(format!(
                    "final rmse {} at n={} above the configured maximum {bound}",
                    last.rmse, last.n
                ));
            }
        }
    }
    failures
}

fn print_coverage(report: &CoverageReport) {
    println!(
        "coverage study: n = {}, {} replicates, alpha = {}",
        report.n, report.replicates, report.alpha
    );
    println!(
        "true mean = {}, true var(mean) = {}",
        sig6(report.true_mean),
        sig6(report.true_variance)
    );
    println!();
    println!(
        "{:<10} {:>9} {:>12} {:>14} {:>12}",
        "estimator", "coverage", "mean width", "mean estimate", "under-frac"
    );
    for summary in &report.estimators {
        println!(
            "{:<10} {:>9.4} {:>12} {:>14} {:>12.4}",
            summary.estimator,
            summary.coverage,
            sig6(summary.mean_interval_width),
            sig6(summary.mean_estimate),
            summary.underestimate_fraction
        );
    }
    println!();
    println!(
        "solver flagged: {}, ordering violations: {}, negative estimates: {}",
        report.solver_flagged, report.ordering_violations, report.negative_estimates
    );
}

fn print_consistency(report: &ConsistencyReport) {
    println!("consistency study:");
    println!(
        "{:>8} {:>11} {:>14} {:>14} {:>12} {:>12}",
        "n", "replicates", "scaled truth", "mean estimate", "bias", "rmse"
    );
    for row in &report.rows {
        println!(
            "{:>8} {:>11} {:>14} {:>14} {:>12} {:>12}",
            row.n,
            row.replicates,
            sig6(row.scaled_truth),
            sig6(row.mean_scaled_estimate),
            sig6(row.bias),
            sig6(row.rmse)
        );
    }
}

pub fn run(args: SimulateArgs) -> Result<(), Failure> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| Failure::Input(format!("{}: {e}", args.config.display())))?;
    let (study, gates) = parse_config(&text, &args.config)?;

    if args.threads > 0 {
        // Replicates run on the global pool; a failure here means another
        // pool was already installed in this process, which cannot happen
        // in the CLI (one study per invocation).
        rayon::ThreadPoolBuilder::new()
            .num_threads(args.threads)
            .build_global()
            .map_err(|e| Failure::Input(format!("cannot configure {} threads: {e}", args.threads)))?;
    }

    let failures = match study {
        Study::Coverage(config) => {
            let report = run_coverage_study(&config)
                .map_err(|e| Failure::Input(format!("{}: {e}", args.config.display())))?;
            let printed = emit_json(&report, args.json, args.output.as_deref())?;
            if !printed {
                print_coverage(&report);
            }
            if args.check {
                check_coverage_gates(&report, &gates)
            } else {
                Vec::new()
            }
        }
        Study::Consistency(config) => {
            let report = run_consistency_study(&config)
                .map_err(|e| Failure::Input(format!("{}: {e}", args.config.display())))?;
            let printed = emit_json(&report, args.json, args.output.as_deref())?;
            if !printed {
                print_consistency(&report);
            }
            if args.check {
                check_consistency_gates(&report, &gates)
            } else {
                Vec::new()
            }
        }
    };

    if !args.check && !gates.is_empty() {
        eprintln!("note: config declares gates but --check was not given; gates not evaluated");
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(failures))
    }
}
