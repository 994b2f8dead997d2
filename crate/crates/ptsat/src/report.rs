//! Benchmark result rows and their CSV/JSON serializations.
//!
//! The CSV layout is versioned by a leading comment line so downstream
//! tooling can detect schema drift. Rows are plain data; everything in them
//! recomputes from archived raw run records.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::metrics::ImprovementBucket;

/// Schema marker written as the first line of every results CSV.
pub const CSV_SCHEMA_COMMENT: &str = "# ptsat-results v1: columns instance,group,algorithm,gamma,solved,tau,its,delta_vs_baseline,bucket; its is empty when no repeat solved; delta and bucket appear on subject-algorithm rows only";

/// One benchmark outcome for an (instance, algorithm) pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub instance: String,
    pub group: String,
    pub algorithm: String,
    /// Repeats run.
    pub gamma: u64,
    /// Repeats that found a solution.
    pub solved: u64,
    /// Per-repeat iteration budget.
    pub tau: u64,
    /// Iterations-to-solution at 99% confidence; absent when unsolved.
    pub its: Option<u64>,
    /// Improvement ratio of the subject algorithm over the designated
    /// baseline; present on subject rows with both sides solved.
    pub delta_vs_baseline: Option<f64>,
    pub bucket: Option<ImprovementBucket>,
}

/// Writes the schema comment, a header record, and one record per row.
pub fn write_csv(rows: &[ResultRow], mut out: impl Write) -> io::Result<()> {
    writeln!(out, "{CSV_SCHEMA_COMMENT}")?;
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record([
        "instance",
        "group",
        "algorithm",
        "gamma",
        "solved",
        "tau",
        "its",
        "delta_vs_baseline",
        "bucket",
    ])?;
    for row in rows {
        writer.write_record([
            row.instance.as_str(),
            row.group.as_str(),
            row.algorithm.as_str(),
            &row.gamma.to_string(),
            &row.solved.to_string(),
            &row.tau.to_string(),
            &row.its.map(|v| v.to_string()).unwrap_or_default(),
            &row.delta_vs_baseline
                .map(|d| d.to_string())
                .unwrap_or_default(),
            &row.bucket.map(|b| b.to_string()).unwrap_or_default(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn csv_string(rows: &[ResultRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV output is UTF-8")
}

/// Pretty JSON array of the rows, trailing newline included.
pub fn json_string(rows: &[ResultRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}

pub fn rows_from_json(text: &str) -> serde_json::Result<Vec<ResultRow>> {
    serde_json::from_str(text)
}
