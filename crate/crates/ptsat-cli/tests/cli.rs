//! End-to-end tests driving the compiled binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ptsat() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ptsat"))
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("running ptsat")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn write_example(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("example.cnf");
    fs::write(&path, "p cnf 4 4\n1 -2 4 0\n2 -3 0\n3 4 0\n-1 -3 0\n").unwrap();
    path
}

#[test]
fn solve_exits_zero_on_satisfiable_input() {
    let dir = tempfile::tempdir().unwrap();
    let instance = write_example(dir.path());
    let output = run(ptsat()
        .arg("solve")
        .arg(&instance)
        .args(["--algorithm", "ptic-walksat", "--schedule", "[1.0, 0.1]"])
        .args(["--steps-per-episode", "100", "--max-episodes", "50"])
        .args(["--seed", "3", "--print-assignment"]));
    assert_eq!(
        output.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let text = stdout(&output);
    assert!(text.contains("status: solved"));
    assert!(text.contains("best energy: 0"));
    let assignment = text
        .lines()
        .find_map(|l| l.strip_prefix("assignment: "))
        .expect("assignment line");
    assert_eq!(assignment.len(), 4);
}

#[test]
fn solve_exits_ten_on_unsatisfiable_input() {
    let dir = tempfile::tempdir().unwrap();
    let instance = dir.path().join("unsat.cnf");
    fs::write(&instance, "p cnf 1 2\n1 0\n-1 0\n").unwrap();
    for algorithm in ["walksat", "pa-walksat", "ptic-walksat", "standard-pt"] {
        let output = run(ptsat()
            .arg("solve")
            .arg(&instance)
            .args(["--algorithm", algorithm, "--schedule", "[1.0, 0.1]"])
            .args(["--max-iterations", "200", "--steps-per-episode", "50"])
            .args(["--max-episodes", "4", "--max-sweeps", "50"]));
        assert_eq!(output.status.code(), Some(10), "algorithm {algorithm}");
        assert!(
            stdout(&output).contains("best energy: 1"),
            "algorithm {algorithm}"
        );
    }
}

#[test]
fn solve_exits_two_on_missing_file_or_bad_usage() {
    let output = run(ptsat().arg("solve").arg("/nonexistent/file.cnf"));
    assert_eq!(output.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&output.stderr).is_empty());

    let output = run(ptsat().arg("solve")); // missing required argument
    assert_eq!(output.status.code(), Some(2));

    let output = run(ptsat().arg("no-such-subcommand"));
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn generate_then_solve_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(ptsat()
        .arg("generate")
        .args([
            "--num-vars",
            "30",
            "--num-clauses",
            "100",
            "--clause-size",
            "3",
        ])
        .args(["--seed", "7", "--name", "toy"])
        .arg("--out-dir")
        .arg(dir.path()));
    assert_eq!(
        output.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    assert!(stdout(&output).contains("planted energy 0"));

    let sidecar: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("toy.json")).unwrap()).unwrap();
    assert_eq!(sidecar["seed"], 7);
    assert_eq!(sidecar["spec"]["num_vars"], 30);
    let planted = sidecar["planted_assignment"].as_str().unwrap();
    assert_eq!(planted.len(), 30);

    let output = run(ptsat().arg("solve").arg(dir.path().join("toy.cnf")).args([
        "--algorithm",
        "walksat",
        "--max-iterations",
        "100000",
        "--seed",
        "1",
    ]));
    assert_eq!(output.status.code(), Some(0));
}

#[test]
fn generate_preset_is_deterministic() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    for dir in [dir_a.path(), dir_b.path()] {
        let output = run(ptsat()
            .arg("generate")
            .args(["--preset", "group-4", "--seed", "7"])
            .arg("--out-dir")
            .arg(dir));
        assert_eq!(output.status.code(), Some(0));
    }
    let a = fs::read(dir_a.path().join("group-4-s7.cnf")).unwrap();
    let b = fs::read(dir_b.path().join("group-4-s7.cnf")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn energy_reports_headline_fraction() {
    let output = run(ptsat().arg("energy").args(["--preset", "pubo-paper"]));
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(
        text.contains("\"headline_fraction_percent\": 0.6615"),
        "output: {text}"
    );
    assert!(text.contains("headline overhead: 0.66%"));

    let output =
        run(ptsat()
            .arg("energy")
            .args(["--preset", "camsat-paper", "--num-clauses", "4500"]));
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output).contains("\"adc_resolution_bits\": 13"));
}

#[test]
fn tune_writes_a_valid_schedule_with_fixed_endpoints() {
    let dir = tempfile::tempdir().unwrap();
    let probe = dir.path().join("probe.cnf");
    // dense enough that probe episodes do not solve it immediately, so
    // exchange statistics actually accumulate
    let output = run(ptsat()
        .arg("generate")
        .args([
            "--num-vars",
            "30",
            "--num-clauses",
            "1320",
            "--clause-size",
            "6",
        ])
        .args(["--seed", "5", "--name", "probe"])
        .arg("--out-dir")
        .arg(dir.path()));
    assert_eq!(output.status.code(), Some(0));

    let out = dir.path().join("tuned.json");
    let output = run(ptsat()
        .arg("tune")
        .arg(&probe)
        .args([
            "--schedule",
            "[1.0, 0.7, 0.4, 0.1]",
            "--steps-per-episode",
            "60",
        ])
        .args(["--episodes", "40", "--repeats", "3", "--seed", "2"])
        .arg("--out")
        .arg(&out));
    assert_eq!(
        output.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let temps: Vec<f64> = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(temps.first(), Some(&1.0));
    assert_eq!(temps.last(), Some(&0.1));
    assert!(
        temps.windows(2).all(|w| w[0] > w[1]),
        "not monotone: {temps:?}"
    );
}

#[test]
fn bench_audit_and_trace_stats_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("bench.json");
    let out_dir = dir.path().join("out");
    fs::write(
        &config_path,
        r#"{
            "seed": 21,
            "gamma": 6,
            "trace": true,
            "algorithms": ["walksat", "pa-walksat", "ptic-walksat"],
            "ptic": {"schedule": {"temps": [1.0, 0.5, 0.1]}, "steps_per_episode": 300, "max_episodes": 40},
            "pa_walksat": {"schedule": {"temps": [1.0, 0.5, 0.1]}, "max_iterations": 6000},
            "walksat": {"max_iterations": 6000, "escalated_max_iterations": 12000},
            "instances": [
                {"generate": {"num_vars": 25, "num_clauses": 95, "clause_size": 3, "seed": 1}, "name": "tri-1", "group": "tri"},
                {"generate": {"num_vars": 25, "num_clauses": 95, "clause_size": 3, "seed": 2}, "name": "tri-2", "group": "tri"},
                {"generate": {"num_vars": 25, "num_clauses": 95, "clause_size": 3, "seed": 3}, "name": "tri-3", "group": "tri"}
            ]
        }"#,
    )
    .unwrap();

    let output = run(ptsat()
        .arg("bench")
        .arg("--config")
        .arg(&config_path)
        .arg("--out-dir")
        .arg(&out_dir));
    assert_eq!(
        output.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );

    // 3 instances x 3 algorithms
    let csv = fs::read_to_string(out_dir.join("results.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2 + 9, "csv:\n{csv}");

    let output = run(ptsat().arg("audit").arg(&out_dir));
    assert_eq!(
        output.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    assert!(stdout(&output).contains("audit ok"));

    // tampering with a row must fail the audit
    let results = fs::read_to_string(out_dir.join("results.json")).unwrap();
    fs::write(
        out_dir.join("results.json"),
        results.replacen("\"solved\": 6", "\"solved\": 5", 1),
    )
    .unwrap();
    let output = run(ptsat().arg("audit").arg(&out_dir));
    assert_eq!(output.status.code(), Some(1));
    fs::write(out_dir.join("results.json"), results).unwrap();

    // trace-stats over the ptic archive histogram
    let raw = out_dir.join("raw").join("tri-1__ptic-walksat.json");
    let output = run(ptsat()
        .arg("trace-stats")
        .arg("--raw")
        .arg(&raw)
        .arg("--trace-dir")
        .arg(out_dir.join("traces")));
    assert_eq!(
        output.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(report["instance"], "tri-1");
    let histogram = report["histogram"].as_array().unwrap();
    let total: u64 = histogram.iter().map(|v| v.as_u64().unwrap()).sum();
    assert_eq!(total, report["traced_repeats"].as_u64().unwrap());

    // single-file mode on one recorded trace
    let trace_file = out_dir.join("traces").join("tri-1__ptic-walksat__r0.jsonl");
    if trace_file.exists() {
        let output = run(ptsat()
            .arg("trace-stats")
            .arg("--trace-file")
            .arg(&trace_file));
        assert_eq!(output.status.code(), Some(0));
        let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
        assert_eq!(report["kappa"], 3);
    }
}

#[test]
fn config_precedence_flags_over_file() {
    let dir = tempfile::tempdir().unwrap();
    let instance = write_example(dir.path());
    let config_path = dir.path().join("cfg.json");
    fs::write(
        &config_path,
        r#"{"seed": 1, "gamma": 3, "algorithms": ["walksat"], "walksat": {"max_iterations": 500}}"#,
    )
    .unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    // same config, overridden seed must change nothing except... itself
    for (out, seed) in [(&out_a, "1"), (&out_b, "99")] {
        let output = run(ptsat()
            .arg("bench")
            .arg("--config")
            .arg(&config_path)
            .args(["--seed", seed])
            .arg("--out-dir")
            .arg(out)
            .arg(&instance));
        assert_eq!(
            output.status.code(),
            Some(0),
            "stderr: {}",
            String::from_utf8_lossy(&output.stderr)
        );
    }
    let a: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_a.join("summary.json")).unwrap()).unwrap();
    let b: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_b.join("summary.json")).unwrap()).unwrap();
    assert_eq!(a["seed"], 1);
    assert_eq!(b["seed"], 99);

    // environment variables slot in below flags but above the file
    let out_c = dir.path().join("c");
    let output = run(ptsat()
        .env("PTSAT_SEED", "7")
        .arg("bench")
        .arg("--config")
        .arg(&config_path)
        .arg("--out-dir")
        .arg(&out_c)
        .arg(&instance));
    assert_eq!(output.status.code(), Some(0));
    let c: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_c.join("summary.json")).unwrap()).unwrap();
    assert_eq!(c["seed"], 7);
}
