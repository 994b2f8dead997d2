//! Acceptance suite for the end-to-end harness: output determinism across
//! worker counts, and the scaled-down three-algorithm trend check. Each
//! test prints one PASS/FAIL line (visible with `--nocapture`).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use ptsat_cli::bench::run_bench;
use ptsat_cli::config::{
    AlgorithmId, BenchConfig, GenerateSpec, InstanceSpec, Profile, ScheduleSpec,
};

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        match $cond {
            true => {}
            false => return Err(format!($($arg)+)),
        }
    };
}

fn criterion(id: &str, description: &str, run: impl FnOnce() -> Result<(), String>) {
    match run() {
        Ok(()) => println!("ACCEPTANCE {id} PASS - {description}"),
        Err(message) => {
            println!("ACCEPTANCE {id} FAIL - {description}: {message}");
            panic!("criterion {id} failed: {message}");
        }
    }
}

/// Byte content of every file under `root`, keyed by relative path.
fn snapshot(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, files: &mut BTreeMap<PathBuf, Vec<u8>>) {
        for entry in fs::read_dir(dir).expect("readable dir") {
            let path = entry.expect("dir entry").path();
            if path.is_dir() {
                walk(root, &path, files);
            } else {
                let relative = path.strip_prefix(root).expect("under root").to_path_buf();
                files.insert(relative, fs::read(&path).expect("readable file"));
            }
        }
    }
    let mut files = BTreeMap::new();
    walk(root, root, &mut files);
    files
}

#[test]
fn criterion_10_worker_count_determinism() {
    criterion(
        "10",
        "bench over a five-instance desk suite is byte-identical for 1 and 8 workers",
        || {
            let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
            let config_path = dir.path().join("suite.json");
            let instances: Vec<String> = (0..5)
                .map(|i| {
                    format!(
                        r#"{{"generate": {{"num_vars": 25, "num_clauses": 95, "clause_size": 3, "seed": {i}}}, "name": "desk-{i}", "group": "desk"}}"#
                    )
                })
                .collect();
            let config = format!(
                r#"{{
                    "seed": 424242,
                    "gamma": 8,
                    "trace": true,
                    "algorithms": ["walksat", "pa-walksat", "ptic-walksat", "standard-pt"],
                    "walksat": {{"max_iterations": 3000, "escalated_max_iterations": 6000}},
                    "pa_walksat": {{"schedule": {{"temps": [1.0, 0.5, 0.1]}}, "max_iterations": 3000}},
                    "ptic": {{"schedule": {{"temps": [1.0, 0.5, 0.1]}}, "steps_per_episode": 200, "max_episodes": 20}},
                    "standard_pt": {{"schedule": {{"temps": [2.0, 0.5, 0.1]}}, "max_sweeps": 100}},
                    "instances": [{}]
                }}"#,
                instances.join(",\n")
            );
            fs::write(&config_path, config).map_err(|e| e.to_string())?;

            let mut outputs = Vec::new();
            for workers in ["1", "8"] {
                let out_dir = dir.path().join(format!("out-{workers}"));
                let output = Command::new(env!("CARGO_BIN_EXE_ptsat"))
                    .arg("bench")
                    .arg("--config")
                    .arg(&config_path)
                    .args(["--workers", workers])
                    .arg("--out-dir")
                    .arg(&out_dir)
                    .output()
                    .map_err(|e| e.to_string())?;
                ensure!(
                    output.status.code() == Some(0),
                    "bench with {workers} workers failed: {}",
                    String::from_utf8_lossy(&output.stderr)
                );
                outputs.push(snapshot(&out_dir));
            }
            let (one, eight) = (&outputs[0], &outputs[1]);
            let paths: Vec<_> = one.keys().collect();
            ensure!(!paths.is_empty(), "no output files were produced");
            ensure!(
                one.keys().collect::<Vec<_>>() == eight.keys().collect::<Vec<_>>(),
                "file sets differ between worker counts"
            );
            for (path, bytes) in one {
                ensure!(
                    eight.get(path) == Some(bytes),
                    "file {} differs between 1 and 8 workers",
                    path.display()
                );
            }
            ensure!(
                one.keys().any(|p| p.starts_with("traces")),
                "expected trace files in the comparison"
            );
            Ok(())
        },
    );
}

#[test]
fn criterion_11_trend_check() {
    criterion(
        "11",
        "scaled-down trend: cooperative search holds up against its parallel and serial baselines",
        || {
            let mut config = BenchConfig::for_profile(Profile::Desk);
            config.seed = 11;
            config.gamma = 20;
            config.algorithms = vec![
                AlgorithmId::Walksat,
                AlgorithmId::PaWalksat,
                AlgorithmId::PticWalksat,
            ];
            config.ptic.schedule = ScheduleSpec::Preset("paper-tuned-7".into());
            config.ptic.steps_per_episode = 1_000;
            config.ptic.max_episodes = 100;
            config.pa_walksat.schedule = ScheduleSpec::Preset("paper-tuned-7".into());
            config.pa_walksat.max_iterations = 100_000;
            config.walksat.eta = 0.5;
            config.walksat.max_iterations = 100_000;
            config.walksat.escalated_max_iterations = None;
            config.instances = (0..20)
                .map(|i| InstanceSpec::Generate {
                    generate: GenerateSpec {
                        preset: Some("group-3".into()),
                        num_vars: None,
                        num_clauses: None,
                        clause_size: None,
                        seed: 9_000 + i,
                    },
                    group: Some("group-3".into()),
                    name: Some(format!("trend-{i}")),
                })
                .collect();

            let outcome = run_bench(&config, None).map_err(|e| e.to_string())?;

            let its_of = |instance: &str, algorithm: &str| {
                outcome
                    .rows
                    .iter()
                    .find(|r| r.instance == instance && r.algorithm == algorithm)
                    .and_then(|r| r.its)
            };
            let mut solved_by_both = 0usize;
            let mut ptic_not_worse = 0usize;
            for i in 0..20 {
                let name = format!("trend-{i}");
                if let (Some(ptic), Some(pa)) =
                    (its_of(&name, "ptic-walksat"), its_of(&name, "pa-walksat"))
                {
                    solved_by_both += 1;
                    if ptic <= pa {
                        ptic_not_worse += 1;
                    }
                }
            }
            ensure!(
                solved_by_both > 0,
                "no instance was solved by both ptic and pa"
            );
            let share = ptic_not_worse as f64 / solved_by_both as f64;
            println!(
                "  trend: ptic <= pa on {ptic_not_worse}/{solved_by_both} instances solved by both ({:.0}%)",
                share * 100.0
            );
            ensure!(
                share >= 0.40,
                "ptic beat pa on only {:.0}% of {solved_by_both} instances",
                share * 100.0
            );

            let rate = |algorithm: &str| {
                outcome
                    .summary
                    .groups
                    .iter()
                    .find(|g| g.algorithm == algorithm && g.group == "group-3")
                    .map(|g| g.per_problem_success_rate)
                    .ok_or_else(|| format!("missing summary for {algorithm}"))
            };
            let ptic_rate = rate("ptic-walksat")?;
            let walksat_rate = rate("walksat")?;
            println!(
                "  trend: per-problem success ptic {ptic_rate:.1}% vs walksat {walksat_rate:.1}%"
            );
            ensure!(
                ptic_rate >= walksat_rate,
                "ptic per-problem rate {ptic_rate:.1}% below walksat {walksat_rate:.1}%"
            );
            Ok(())
        },
    );
}
