//! `ptsat`: solve SAT instances with replica-exchange local search, run
//! the benchmark suite, generate planted instances, tune temperature
//! ladders, and evaluate the accelerator energy model.
//!
//! Exit codes: 0 success (solve: solution found), 10 solve finished
//! without a solution, 1 audit found mismatches, 2 usage or input errors.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ptsat_cli::commands::{audit, bench_cmd, energy, generate, solve, trace_stats, tune};

#[derive(Parser)]
#[command(
    name = "ptsat",
    version,
    about = "Replica-exchange stochastic local search for SAT",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a single DIMACS instance.
    Solve(solve::SolveArgs),
    /// Run the benchmark suite and write result tables.
    Bench(bench_cmd::BenchArgs),
    /// Generate planted random k-SAT instances.
    Generate(generate::GenerateArgs),
    /// Tune a temperature schedule on probe instances.
    Tune(tune::TuneArgs),
    /// Evaluate the accelerator energy-overhead model.
    Energy(energy::EnergyArgs),
    /// Verify that result tables recompute from raw archives.
    Audit(audit::AuditArgs),
    /// Analyze recorded episode traces.
    TraceStats(trace_stats::TraceStatsArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(args) => solve::run(args),
        Command::Bench(args) => bench_cmd::run(args),
        Command::Generate(args) => generate::run(args),
        Command::Tune(args) => tune::run(args),
        Command::Energy(args) => energy::run(args),
        Command::Audit(args) => audit::run(args),
        Command::TraceStats(args) => trace_stats::run(args),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::from(2)
        }
    }
}
