//! Cooperative replica-exchange local search for SAT.
//!
//! The crate provides:
//!
//! - [`cnf`]: CNF formulas, DIMACS I/O, and the incremental
//!   [`cnf::SearchState`] with O(clause-degree) flips and break/make
//!   queries;
//! - [`kernels`]: the WalkSAT and Metropolis local-update steps and the
//!   episode runner;
//! - [`ptic`]: the replica-exchange orchestrator over a temperature ladder,
//!   plus standard parallel tempering as the Metropolis special case;
//! - [`schedule`]: ladder constructors, presets, and the exchange-rate
//!   balancing tuner;
//! - [`generator`]: seeded planted random k-SAT instances;
//! - [`metrics`]: iterations-to-solution at 99% confidence, iteration
//!   accounting, success rates, improvement buckets, trace analytics;
//! - [`energy`]: the accelerator energy-overhead arithmetic;
//! - [`report`]: benchmark result rows with versioned CSV/JSON output;
//! - [`rng`]: the deterministic stream derivation everything above keys
//!   its randomness from.

pub mod cnf;
pub mod energy;
pub mod generator;
pub mod kernels;
pub mod metrics;
pub mod ptic;
pub mod report;
pub mod rng;
pub mod schedule;

pub use cnf::{parse_dimacs, write_dimacs, Assignment, CnfError, Formula, Literal, SearchState};
pub use kernels::{run_episode, EpisodeOutcome, KernelKind};
pub use ptic::{
    exchange_probability, run_ptic, run_standard_pt, PticOptions, PticResult, TraceEvent,
};
pub use rng::Rng;
pub use schedule::TemperatureSchedule;
