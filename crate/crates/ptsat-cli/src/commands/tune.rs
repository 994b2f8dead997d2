//! `ptsat tune`: rebalance a temperature ladder on probe instances.

use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::Args;

use ptsat::cnf::Formula;
use ptsat::kernels::KernelKind;
use ptsat::schedule::tune_schedule;

use crate::bench::load_formula;
use crate::config::ScheduleSpec;

#[derive(Args, Debug)]
pub struct TuneArgs {
    /// Probe instances (DIMACS files).
    #[arg(required = true)]
    pub probes: Vec<PathBuf>,
    /// Starting schedule: preset name, inline JSON array, or @file.
    #[arg(long)]
    pub schedule: String,
    /// Kernel the probes run: walksat or metropolis-hastings.
    #[arg(long, default_value = "walksat")]
    pub kernel: String,
    /// Local updates per probe episode.
    #[arg(long, default_value_t = 6_270)]
    pub steps_per_episode: u64,
    /// Probe episode limit.
    #[arg(long, default_value_t = 100)]
    pub episodes: u64,
    /// Probe repeats per instance, aggregated into one rate profile.
    #[arg(long, default_value_t = 5)]
    pub repeats: u64,
    /// Upper bound on probe-and-nudge rounds.
    #[arg(long, default_value_t = 25)]
    pub max_rounds: usize,
    #[arg(long, env = "PTSAT_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Write the tuned schedule (JSON array) here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_kernel(name: &str) -> Result<KernelKind> {
    match name {
        "walksat" => Ok(KernelKind::WalkSat),
        "metropolis-hastings" | "mh" => Ok(KernelKind::MetropolisHastings),
        other => bail!("unknown kernel `{other}`"),
    }
}

pub fn run(args: &TuneArgs) -> Result<i32> {
    let kernel = parse_kernel(&args.kernel)?;
    let initial = ScheduleSpec::parse_flag(&args.schedule)?.resolve()?;
    let probes: Vec<Arc<Formula>> = args
        .probes
        .iter()
        .map(|p| load_formula(p).map(Arc::new))
        .collect::<Result<_>>()?;

    let outcome = tune_schedule(
        &initial,
        &probes,
        kernel,
        args.steps_per_episode,
        args.episodes,
        args.repeats,
        args.max_rounds,
        args.seed,
    )
    .context("tuning failed")?;

    for (round, step) in outcome.steps.iter().enumerate() {
        let rates: Vec<String> = step.rates.iter().map(|r| format!("{r:.4}")).collect();
        println!(
            "round {round}: variance {:.6} rates [{}]{}",
            step.variance,
            rates.join(", "),
            if step.accepted { "" } else { " (rejected)" }
        );
    }
    let body = serde_json::to_string(&outcome.schedule)?;
    println!("tuned schedule: {body}");
    if let Some(path) = &args.out {
        fs::write(path, format!("{body}\n"))
            .with_context(|| format!("writing {}", path.display()))?;
        println!("written to {}", path.display());
    }
    Ok(0)
}
