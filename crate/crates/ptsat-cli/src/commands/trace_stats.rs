//! `ptsat trace-stats`: traversal analytics over recorded episode traces.

use std::fs;
use std::io::BufRead;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use serde::Serialize;

use ptsat::metrics::trace_analytics;
use ptsat::ptic::TraceEvent;

use crate::bench::RawArchive;

#[derive(Args, Debug)]
pub struct TraceStatsArgs {
    /// Single trace file (JSON lines of episode records).
    #[arg(long, conflicts_with = "raw")]
    pub trace_file: Option<PathBuf>,
    /// Slot that solved, for distinct-temperature counting.
    #[arg(long)]
    pub successful_slot: Option<usize>,
    /// Raw archive (raw/*.json from a traced bench run); aggregates the
    /// distinct-temperature histogram over its solved repeats.
    #[arg(long)]
    pub raw: Option<PathBuf>,
    /// Directory holding the bench run's trace files.
    #[arg(long, default_value = "traces")]
    pub trace_dir: PathBuf,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn read_trace(path: &Path) -> Result<Vec<TraceEvent>> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut events = Vec::new();
    for (index, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let event: TraceEvent = serde_json::from_str(&line)
            .with_context(|| format!("{}:{}: bad trace record", path.display(), index + 1))?;
        events.push(event);
    }
    Ok(events)
}

#[derive(Serialize)]
struct SingleTraceReport {
    episodes: usize,
    kappa: usize,
    successful_config: Option<usize>,
    distinct_temperatures: Option<usize>,
    traversal: Vec<Vec<usize>>,
    slot_energy_series: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct HistogramReport {
    instance: String,
    algorithm: String,
    solved_repeats: usize,
    traced_repeats: usize,
    /// `histogram[d]` = solved repeats whose successful configuration
    /// visited exactly `d + 1` distinct temperatures.
    histogram: Vec<usize>,
    per_repeat_distinct: Vec<Option<usize>>,
}

fn emit(out: &Option<PathBuf>, body: String) -> Result<()> {
    match out {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

pub fn run(args: &TraceStatsArgs) -> Result<i32> {
    match (&args.trace_file, &args.raw) {
        (Some(path), None) => {
            let events = read_trace(path)?;
            let analytics = trace_analytics(&events, args.successful_slot)
                .map_err(|e| anyhow!("trace analytics: {e}"))?;
            let report = SingleTraceReport {
                episodes: events.len(),
                kappa: events.first().map_or(0, |e| e.occupancy.len()),
                successful_config: analytics.successful_config,
                distinct_temperatures: analytics.distinct_temperatures,
                traversal: analytics.traversal,
                slot_energy_series: analytics.slot_energy_series,
            };
            let mut body = serde_json::to_string_pretty(&report)?;
            body.push('\n');
            emit(&args.out, body)?;
            Ok(0)
        }
        (None, Some(raw_path)) => {
            let archive: RawArchive = serde_json::from_str(&fs::read_to_string(raw_path)?)
                .with_context(|| format!("parsing {}", raw_path.display()))?;
            let mut histogram: Vec<usize> = Vec::new();
            let mut per_repeat: Vec<Option<usize>> = Vec::new();
            let mut traced = 0usize;
            for (repeat, outcome) in archive.repeats.iter().enumerate() {
                if !outcome.record.solved {
                    per_repeat.push(None);
                    continue;
                }
                let path = args
                    .trace_dir
                    .join(format!("{}__r{repeat}.jsonl", archive.file_stem()));
                if !path.exists() {
                    per_repeat.push(None);
                    continue;
                }
                traced += 1;
                let events = read_trace(&path)?;
                let analytics = trace_analytics(&events, outcome.successful_slot)
                    .map_err(|e| anyhow!("repeat {repeat}: {e}"))?;
                let distinct = analytics.distinct_temperatures.ok_or_else(|| {
                    anyhow!("repeat {repeat}: solved but no successful slot recorded")
                })?;
                if histogram.len() < distinct {
                    histogram.resize(distinct, 0);
                }
                histogram[distinct - 1] += 1;
                per_repeat.push(Some(distinct));
            }
            if traced == 0 {
                bail!(
                    "no traced solved repeats found under {}",
                    args.trace_dir.display()
                );
            }
            let report = HistogramReport {
                instance: archive.instance.clone(),
                algorithm: archive.algorithm.clone(),
                solved_repeats: archive.repeats.iter().filter(|r| r.record.solved).count(),
                traced_repeats: traced,
                histogram,
                per_repeat_distinct: per_repeat,
            };
            let mut body = serde_json::to_string_pretty(&report)?;
            body.push('\n');
            emit(&args.out, body)?;
            Ok(0)
        }
        _ => bail!("give exactly one of --trace-file or --raw"),
    }
}
