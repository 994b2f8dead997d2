//! `ptsat solve`: run one algorithm on one instance.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::Args;

use ptsat::cnf::SearchState;
use ptsat::kernels::{run_episode, KernelKind};
use ptsat::metrics::parallel_baseline_iterations;
use ptsat::ptic::{run_ptic, run_standard_pt, PticOptions, STREAM_REPLICA};
use ptsat::rng::{derive_seed, fold_bytes, Rng};

use crate::bench::load_formula;
use crate::config::{AlgorithmId, ScheduleSpec};

pub const EXIT_SOLVED: i32 = 0;
pub const EXIT_UNSOLVED: i32 = 10;

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// DIMACS CNF instance to solve.
    pub instance: PathBuf,
    /// One of: walksat, pa-walksat, ptic-walksat, standard-pt.
    #[arg(long, default_value = "ptic-walksat")]
    pub algorithm: String,
    #[arg(long, env = "PTSAT_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Walk probability for the walksat algorithm.
    #[arg(long, default_value_t = 0.5)]
    pub eta: f64,
    /// Iteration cap for walksat, per-replica cap for pa-walksat.
    #[arg(long, default_value_t = 100_000)]
    pub max_iterations: u64,
    /// Schedule: preset name, inline JSON array, or @file.
    #[arg(long, default_value = "paper-tuned-7")]
    pub schedule: String,
    /// Local updates per episode for ptic-walksat.
    #[arg(long, default_value_t = 1_000)]
    pub steps_per_episode: u64,
    /// Episode limit for ptic-walksat.
    #[arg(long, default_value_t = 100)]
    pub max_episodes: u64,
    /// Sweep limit for standard-pt.
    #[arg(long, default_value_t = 1_000)]
    pub max_sweeps: u64,
    /// Print the best assignment as a 0/1 string.
    #[arg(long)]
    pub print_assignment: bool,
    /// Write the episode trace as JSON lines (ptic-walksat and standard-pt).
    #[arg(long)]
    pub trace_out: Option<PathBuf>,
}

/// Returns the process exit code.
pub fn run(args: &SolveArgs) -> Result<i32> {
    let algorithm = AlgorithmId::parse(&args.algorithm)?;
    let formula = Arc::new(load_formula(&args.instance)?);
    let name = args
        .instance
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let run_seed = derive_seed(
        args.seed,
        &[fold_bytes(0, name.as_bytes()), algorithm.seed_tag(), 0],
    );
    let want_trace = args.trace_out.is_some();

    let (solved, energy, iterations, assignment, trace) = match algorithm {
        AlgorithmId::Walksat => {
            let mut rng = Rng::derived(run_seed, &[STREAM_REPLICA, 0]);
            let mut state = SearchState::random(formula.clone(), &mut rng);
            let outcome = run_episode(
                &mut state,
                KernelKind::WalkSat,
                args.eta,
                args.max_iterations,
                &mut rng,
            );
            (
                outcome.solved,
                outcome.final_energy,
                outcome.steps_taken,
                state.assignment().clone(),
                Vec::new(),
            )
        }
        AlgorithmId::PaWalksat => {
            let schedule = ScheduleSpec::parse_flag(&args.schedule)?.resolve()?;
            let kappa = schedule.kappa() as u64;
            let mut best: Option<(u64, SearchState)> = None;
            let mut fallback: Option<SearchState> = None;
            for slot in (0..schedule.kappa()).rev() {
                let budget = best
                    .as_ref()
                    .map_or(args.max_iterations, |(q, _)| *q.max(&1));
                let mut rng = Rng::derived(run_seed, &[STREAM_REPLICA, slot as u64]);
                let mut state = SearchState::random(formula.clone(), &mut rng);
                let outcome = run_episode(
                    &mut state,
                    KernelKind::WalkSat,
                    schedule.temp(slot),
                    budget,
                    &mut rng,
                );
                if outcome.solved && best.as_ref().is_none_or(|(q, _)| outcome.steps_taken < *q) {
                    best = Some((outcome.steps_taken, state));
                } else if fallback
                    .as_ref()
                    .is_none_or(|f| state.energy() < f.energy())
                {
                    fallback = Some(state);
                }
            }
            match best {
                Some((q, state)) => {
                    let iterations = if q == 0 {
                        0
                    } else {
                        parallel_baseline_iterations(kappa, q)
                    };
                    (true, 0, iterations, state.assignment().clone(), Vec::new())
                }
                None => {
                    let state = fallback.expect("at least one replica ran");
                    (
                        false,
                        state.energy(),
                        kappa * args.max_iterations,
                        state.assignment().clone(),
                        Vec::new(),
                    )
                }
            }
        }
        AlgorithmId::PticWalksat => {
            let schedule = ScheduleSpec::parse_flag(&args.schedule)?.resolve()?;
            let mut options = PticOptions::new(
                KernelKind::WalkSat,
                schedule,
                args.steps_per_episode,
                args.max_episodes,
                run_seed,
            );
            options.record_trace = want_trace;
            let result = run_ptic(&formula, &options)?;
            (
                result.solved,
                result.best_energy,
                result.total_iterations,
                result.best_assignment,
                result.trace,
            )
        }
        AlgorithmId::StandardPt => {
            let schedule = ScheduleSpec::parse_flag(&args.schedule)?.resolve()?;
            let result =
                run_standard_pt(&formula, schedule, args.max_sweeps, run_seed, want_trace)?;
            (
                result.solved,
                result.best_energy,
                result.total_iterations,
                result.best_assignment,
                result.trace,
            )
        }
    };

    if let Some(path) = &args.trace_out {
        let mut file = std::fs::File::create(path)
            .with_context(|| format!("creating trace file {}", path.display()))?;
        for event in &trace {
            serde_json::to_writer(&mut file, event)?;
            file.write_all(b"\n")?;
        }
    }

    println!("instance: {name}");
    println!("algorithm: {algorithm}");
    println!("status: {}", if solved { "solved" } else { "unsolved" });
    println!("best energy: {energy}");
    println!("iterations: {iterations}");
    if args.print_assignment {
        println!("assignment: {}", assignment.to_bit_string());
    }
    Ok(if solved { EXIT_SOLVED } else { EXIT_UNSOLVED })
}
