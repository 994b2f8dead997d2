//! `ptsat audit`: verify that every published table recomputes from the
//! archived raw outcomes.

use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;

use ptsat::metrics::{improvement, its99};
use ptsat::report::{self, ResultRow};

use crate::bench::{RawArchive, Summary};
use crate::config::AlgorithmId;

#[derive(Args, Debug)]
pub struct AuditArgs {
    /// Benchmark output directory (the bench --out-dir).
    pub out_dir: PathBuf,
}

pub fn run(args: &AuditArgs) -> Result<i32> {
    let dir = &args.out_dir;
    let rows_text = fs::read_to_string(dir.join("results.json"))
        .with_context(|| format!("reading {}", dir.join("results.json").display()))?;
    let rows: Vec<ResultRow> = report::rows_from_json(&rows_text)?;
    let csv_text = fs::read_to_string(dir.join("results.csv"))?;
    let summary: Summary = serde_json::from_str(&fs::read_to_string(dir.join("summary.json"))?)?;
    let subject = AlgorithmId::parse(&summary.subject)?;
    let baseline = AlgorithmId::parse(&summary.baseline)?;

    let mut archives: Vec<RawArchive> = Vec::new();
    for entry in fs::read_dir(dir.join("raw"))? {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "json") {
            let archive: RawArchive = serde_json::from_str(&fs::read_to_string(&path)?)
                .with_context(|| format!("parsing {}", path.display()))?;
            archives.push(archive);
        }
    }

    let mut failures: Vec<String> = Vec::new();

    // 1. the CSV is exactly the JSON rows re-serialized
    if csv_text != report::csv_string(&rows) {
        failures.push("results.csv does not match results.json re-serialized".to_string());
    }

    // 2. every row recomputes from its raw archive
    for row in &rows {
        let Some(archive) = archives.iter().find(|a| {
            a.instance == row.instance && a.algorithm == row.algorithm && a.tau == row.tau
        }) else {
            failures.push(format!(
                "no raw archive for ({}, {}, tau {})",
                row.instance, row.algorithm, row.tau
            ));
            continue;
        };
        let set = archive.repeat_set();
        if set.gamma() != row.gamma {
            failures.push(format!(
                "{}/{}: gamma {} vs raw {}",
                row.instance,
                row.algorithm,
                row.gamma,
                set.gamma()
            ));
        }
        if set.solved_count() != row.solved {
            failures.push(format!(
                "{}/{}: solved {} vs raw {}",
                row.instance,
                row.algorithm,
                row.solved,
                set.solved_count()
            ));
        }
        let recomputed = its99(&set).as_u64();
        if recomputed != row.its {
            failures.push(format!(
                "{}/{}: its {:?} vs recomputed {:?}",
                row.instance, row.algorithm, row.its, recomputed
            ));
        }
    }

    // 3. subject-row improvement ratios recompute against the baseline row
    let final_row = |instance: &str, algorithm: AlgorithmId| {
        rows.iter()
            .rfind(|r| r.instance == instance && r.algorithm == algorithm.as_str())
    };
    for row in &rows {
        let Some(delta) = row.delta_vs_baseline else {
            continue;
        };
        let subject_its = final_row(&row.instance, subject).and_then(|r| r.its);
        let baseline_its = final_row(&row.instance, baseline).and_then(|r| r.its);
        match (subject_its, baseline_its) {
            (Some(s), Some(b)) => {
                let (want_delta, want_bucket) = improvement(s, b);
                if (delta - want_delta).abs() > 1e-12 || row.bucket != Some(want_bucket) {
                    failures.push(format!(
                        "{}: delta {delta} / {:?} vs recomputed {want_delta} / {want_bucket:?}",
                        row.instance, row.bucket
                    ));
                }
            }
            _ => failures.push(format!(
                "{}: delta present but subject or baseline ITS is missing",
                row.instance
            )),
        }
    }

    println!(
        "audit: {} rows, {} raw archives, {} summary groups",
        rows.len(),
        archives.len(),
        summary.groups.len()
    );
    if failures.is_empty() {
        println!("audit ok: every row recomputes from its raw records");
        Ok(0)
    } else {
        for failure in &failures {
            eprintln!("audit mismatch: {failure}");
        }
        Ok(1)
    }
}
