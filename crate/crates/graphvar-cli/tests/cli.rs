//! End-to-end tests of the `graphvar` binary: real subprocesses, real files,
//! assertions on stdout, stderr, exit codes, and the JSON reports.

use serde_json::Value;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn graphvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphvar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

fn code_of(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn json_of(output: &Output) -> Value {
    serde_json::from_str(&stdout_of(output)).expect("stdout is JSON")
}

fn write_fixture(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, content).expect("fixture written");
    path.display().to_string()
}

const OUTCOMES_WITH_DEGREES: &str = "id,x,d\na,1.0,2\nb,2.5,1\nc,0.5,2\nd,1.5,1\ne,2.0,2\n";
const EDGES: &str = "id_i,id_j\na,b\nc,e\n";

#[test]
fn estimate_prints_a_row_per_estimator() {
    let dir = tempfile::tempdir().unwrap();
    let outcomes = write_fixture(dir.path(), "outcomes.csv", OUTCOMES_WITH_DEGREES);
    let edges = write_fixture(dir.path(), "edges.csv", EDGES);

    let output = graphvar(&[
        "estimate",
        &outcomes,
        "--edges",
        &edges,
        "--assume-homoskedastic",
    ]);
    assert_eq!(code_of(&output), 0, "stderr: {}", stderr_of(&output));
    let text = stdout_of(&output);
    assert!(text.contains("n = 5 (2 observed edges)"), "{text}");
    for name in ["naive", "v1", "v2", "v2_prime"] {
        assert!(text.contains(name), "missing {name} in:\n{text}");
    }
    assert!(text.contains("95% interval"), "{text}");
}

#[test]
fn estimate_json_report_carries_digests_and_exact_naive_variance() {
    let dir = tempfile::tempdir().unwrap();
    let outcomes = write_fixture(dir.path(), "outcomes.csv", OUTCOMES_WITH_DEGREES);
    let edges = write_fixture(dir.path(), "edges.csv", EDGES);

    let output = graphvar(&["estimate", &outcomes, "--edges", &edges, "--json"]);
    assert_eq!(code_of(&output), 0, "stderr: {}", stderr_of(&output));
    let report = json_of(&output);

    assert_eq!(report["command"], "estimate");
    assert_eq!(report["inputs"]["n"], 5);
    assert_eq!(report["inputs"]["observed_edges"], 2);
    let digest = report["inputs"]["outcomes"]["sha256"].as_str().unwrap();
    assert_eq!(digest.len(), 64);
    assert!(digest.chars().all(|c| c.is_ascii_hexdigit()));

    // Outcomes 1.0, 2.5, 0.5, 1.5, 2.0: mean 1.5, plug-in variance 0.5,
    // naive estimate 0.5 / 5. All dyadic, so equality is exact.
    assert_eq!(report["sample_mean"], 1.5);
    assert_eq!(report["sample_variance"], 0.5);
    let rows = report["estimates"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["estimator"], "naive");
    assert_eq!(rows[0]["variance"], 0.1);
    assert!(rows[0].get("solver").is_none());
    assert_eq!(rows[1]["estimator"], "v1");
    assert_eq!(rows[1]["solver"]["status"], "optimal");
}

#[test]
fn estimate_respects_an_explicit_estimator_list() {
    let dir = tempfile::tempdir().unwrap();
    let outcomes = write_fixture(dir.path(), "outcomes.csv", OUTCOMES_WITH_DEGREES);

    let output = graphvar(&[
        "estimate",
        &outcomes,
        "--estimators",
        "v2_prime,naive",
        "--json",
    ]);
    assert_eq!(code_of(&output), 0, "stderr: {}", stderr_of(&output));
    let report = json_of(&output);
    let names: Vec<&str> = report["estimates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|row| row["estimator"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["naive", "v2_prime"], "fixed report order");

    let bad = graphvar(&["estimate", &outcomes, "--estimators", "v3"]);
    assert_eq!(code_of(&bad), 3);
    assert!(stderr_of(&bad).contains("unknown estimator"));
}

#[test]
fn estimate_without_degree_information_warns_and_uses_the_widest_bound() {
    let dir = tempfile::tempdir().unwrap();
    let outcomes = write_fixture(dir.path(), "outcomes.csv", "id,x\na,1.0\nb,2.5\nc,0.5\nd,1.5\ne,2.0\n");

    let output = graphvar(&["estimate", &outcomes, "--json"]);
    assert_eq!(code_of(&output), 0);
    assert!(
        stderr_of(&output).contains("no degree column"),
        "stderr: {}",
        stderr_of(&output)
    );
    let report = json_of(&output);
    let warnings = report["warnings"].as_array().unwrap();
    assert!(warnings
        .iter()
        .any(|w| w.as_str().unwrap().contains("degree bound 4")));

    // With an explicit bound the warning disappears.
    let bounded = graphvar(&["estimate", &outcomes, "--global-degree-bound", "2", "--json"]);
    assert_eq!(code_of(&bounded), 0);
    assert!(stderr_of(&bounded).is_empty());
    let report = json_of(&bounded);
    assert_eq!(report["global_degree_bound"], 2);
    assert!(report["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn estimate_check_rejects_contradictory_degrees() {
    let dir = tempfile::tempdir().unwrap();
    // Vertex a reports degree 0 but appears in an observed edge.
    let outcomes = write_fixture(dir.path(), "outcomes.csv", "id,x,d\na,1.0,0\nb,2.0,1\nc,3.0,1\n");
    let edges = write_fixture(dir.path(), "edges.csv", "id_i,id_j\na,b\n");

    let checked = graphvar(&["estimate", &outcomes, "--edges", &edges, "--check"]);
    assert_eq!(code_of(&checked), 5);
    assert!(stderr_of(&checked).contains("check failed"));

    // Without --check the data still cannot feed the solver-backed
    // estimators: the forced edge makes the instance infeasible.
    let unchecked = graphvar(&["estimate", &outcomes, "--edges", &edges]);
    assert_eq!(code_of(&unchecked), 3);
    assert!(stderr_of(&unchecked).contains("infeasible"));

    // The closed-form estimators do not build an instance, so they run,
    // with the contradiction surfaced as a warning.
    let closed_form = graphvar(&[
        "estimate",
        &outcomes,
        "--edges",
        &edges,
        "--estimators",
        "naive,v2_prime",
        "--json",
    ]);
    assert_eq!(code_of(&closed_form), 0);
    let report = json_of(&closed_form);
    assert!(!report["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn dumped_instance_round_trips_through_solve_and_brute_force() {
    let dir = tempfile::tempdir().unwrap();
    let outcomes = write_fixture(dir.path(), "outcomes.csv", OUTCOMES_WITH_DEGREES);
    let edges = write_fixture(dir.path(), "edges.csv", EDGES);
    let instance = dir.path().join("instance.txt").display().to_string();

    let dump = graphvar(&[
        "estimate",
        &outcomes,
        "--edges",
        &edges,
        "--dump-instance",
        &instance,
    ]);
    assert_eq!(code_of(&dump), 0, "stderr: {}", stderr_of(&dump));

    let direct = graphvar(&["estimate", &outcomes, "--edges", &edges, "--json"]);
    let report = json_of(&direct);
    let v1_objective = report["estimates"][1]["solver"]["objective"].as_f64().unwrap();

    let solved = graphvar(&["solve", &instance, "--json"]);
    assert_eq!(code_of(&solved), 0, "stderr: {}", stderr_of(&solved));
    let solved = json_of(&solved);
    assert_eq!(solved["solver"]["status"], "optimal");
    assert_eq!(solved["solver"]["objective"].as_f64().unwrap(), v1_objective);
    assert_eq!(solved["forced_edges"], 2);

    let brute = graphvar(&["brute-force", &instance, "--json"]);
    assert_eq!(code_of(&brute), 0, "stderr: {}", stderr_of(&brute));
    let brute = json_of(&brute);
    assert_eq!(brute["solver"]["objective"].as_f64().unwrap(), v1_objective);
}

#[test]
fn solve_exits_four_when_the_time_limit_interrupts() {
    // Frozen instance with a root relaxation gap, so a zero time limit
    // cannot terminate with a proof. 31 nodes to optimality.
    let dir = tempfile::tempdir().unwrap();
    let instance = write_fixture(
        dir.path(),
        "gap.txt",
        "n 5\ncaps 1 1 2 1 2\n\
         weight 1 2 1.5\nweight 1 3 1.625\nweight 1 4 0.125\nweight 1 5 1.375\n\
         weight 2 3 0.5\nweight 2 4 1.875\nweight 2 5 0.375\nweight 3 4 1.25\n\
         weight 3 5 0.25\nweight 4 5 1.75\n",
    );

    let exact = graphvar(&["solve", &instance, "--json"]);
    assert_eq!(code_of(&exact), 0);
    assert_eq!(json_of(&exact)["solver"]["objective"], 3.875);

    let clipped = graphvar(&["solve", &instance, "--gap", "0", "--time-limit", "0"]);
    assert_eq!(code_of(&clipped), 4);
    assert!(stderr_of(&clipped).contains("time_limit"));
}

#[test]
fn brute_force_rejects_oversized_instances() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("n 9\ncaps 8 8 8 8 8 8 8 8 8\n");
    for i in 1..=9u32 {
        for j in (i + 1)..=9 {
            text.push_str(&format!("weight {i} {j} 1.0\n"));
        }
    }
    let instance = write_fixture(dir.path(), "big.txt", &text);

    let output = graphvar(&["brute-force", &instance]);
    assert_eq!(code_of(&output), 3);
    let message = stderr_of(&output);
    assert!(message.contains("36 free variables"), "{message}");
    assert!(message.contains("graphvar solve"), "{message}");
}

const COVERAGE_CONFIG: &str = r#"{
  "study": "coverage",
  "n": 24, "replicates": 40, "degree": 2, "shape": "regular",
  "observe_probability": 0.5, "alpha": 0.1,
  "mu": 0.0, "vertex_scale": 1.0, "edge_scale": 1.0, "seed": 11
}"#;

#[test]
fn simulate_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_fixture(dir.path(), "coverage.json", COVERAGE_CONFIG);
    let out_a = dir.path().join("a.json");
    let out_b = dir.path().join("b.json");

    let first = graphvar(&[
        "simulate",
        &config,
        "--threads",
        "1",
        "--output",
        out_a.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&first), 0, "stderr: {}", stderr_of(&first));
    let second = graphvar(&[
        "simulate",
        &config,
        "--threads",
        "2",
        "--output",
        out_b.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&second), 0, "stderr: {}", stderr_of(&second));

    let bytes_a = fs::read(&out_a).unwrap();
    let bytes_b = fs::read(&out_b).unwrap();
    assert!(!bytes_a.is_empty());
    assert_eq!(bytes_a, bytes_b, "reports must not depend on thread count");

    let report: Value = serde_json::from_slice(&bytes_a).unwrap();
    assert_eq!(report["n"], 24);
    assert_eq!(report["estimators"].as_array().unwrap().len(), 4);
}

#[test]
fn simulate_gate_failure_exits_five() {
    let dir = tempfile::tempdir().unwrap();
    let config = COVERAGE_CONFIG.replace(
        "\"seed\": 11\n",
        "\"seed\": 11,\n  \"gates\": { \"min_coverage\": { \"naive\": 0.9999 } }\n",
    );
    assert!(config.contains("gates"), "fixture edit applied");
    let path = write_fixture(dir.path(), "gated.json", &config);

    let unchecked = graphvar(&["simulate", &path]);
    assert_eq!(code_of(&unchecked), 0, "gates ignored without --check");
    assert!(stderr_of(&unchecked).contains("gates not evaluated"));

    let checked = graphvar(&["simulate", &path, "--check"]);
    assert_eq!(code_of(&checked), 5);
    assert!(stderr_of(&checked).contains("naive coverage"));
}

#[test]
fn simulate_rejects_malformed_configs() {
    let dir = tempfile::tempdir().unwrap();

    let typo = COVERAGE_CONFIG.replace("\"replicates\"", "\"replicate\"");
    let path = write_fixture(dir.path(), "typo.json", &typo);
    let output = graphvar(&["simulate", &path]);
    assert_eq!(code_of(&output), 3);
    assert!(stderr_of(&output).contains("replicate"), "{}", stderr_of(&output));

    let untagged = write_fixture(dir.path(), "untagged.json", "{\"n\": 10}");
    let output = graphvar(&["simulate", &untagged]);
    assert_eq!(code_of(&output), 3);
    assert!(stderr_of(&output).contains("\"study\""));
}

#[test]
fn usage_errors_exit_two() {
    let unknown_subcommand = graphvar(&["frobnicate"]);
    assert_eq!(code_of(&unknown_subcommand), 2);

    let unknown_flag = graphvar(&["estimate", "whatever.csv", "--no-such-flag"]);
    assert_eq!(code_of(&unknown_flag), 2);
}
