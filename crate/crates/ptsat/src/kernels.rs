//! Local-update kernels and the episode runner.
//!
//! A kernel step is a probabilistic mapping on assignments that changes at
//! most one bit: the WalkSAT step flips exactly one variable of a violated
//! clause, the Metropolis step flips zero or one depending on acceptance.
//! Replicas run kernels concurrently on distinct states and rng streams;
//! the functions here share nothing mutable.

use serde::{Deserialize, Serialize};

use crate::cnf::SearchState;
use crate::rng::Rng;

/// Which local update a replica performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelKind {
    WalkSat,
    MetropolisHastings,
}

/// Result of one episode: up to `Q` kernel steps, stopping early only on a
/// solution, so `steps_taken < Q` implies `solved`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EpisodeOutcome {
    pub steps_taken: u64,
    pub solved: bool,
    pub final_energy: usize,
}

/// One WalkSAT iteration: pick a violated clause uniformly, score each of
/// its literals by break value, then with probability `eta` flip a uniform
/// clause position and otherwise flip the minimum-break variable. Ties on
/// the minimum break go to the first position in clause order. The noise
/// coin is tossed unconditionally, even when the minimum break is zero.
///
/// Returns the flipped variable.
///
/// # Panics
/// Panics if the state is already satisfied or `eta` is outside `[0, 1]`.
pub fn walksat_step(state: &mut SearchState, eta: f64, rng: &mut Rng) -> u32 {
    assert!(state.energy() > 0, "walksat_step on a satisfied state");
    assert!(
        (0.0..=1.0).contains(&eta),
        "walk probability {eta} outside [0, 1]"
    );
    let clause_id = state.pick_violated(rng);
    let chosen = {
        let clause = state.formula().clause(clause_id);
        // sentinel above any possible break value (at most num_clauses)
        let mut best_break = state.formula().num_clauses() as u32 + 1;
        let mut best_pos = 0;
        for (pos, lit) in clause.iter().enumerate() {
            let z = state.break_value(lit.variable());
            if best_break > z {
                best_break = z;
                best_pos = pos;
            }
        }
        let pos = if rng.next_f64() < eta {
            rng.below(clause.len() as u64) as usize
        } else {
            best_pos
        };
        clause[pos].variable()
    };
    state.flip(chosen);
    chosen
}

/// One Metropolis step on the violated-clause count: propose a uniformly
/// random single-variable flip, accept with probability
/// `min(1, exp(-delta / temperature))`. The state is mutated only on
/// acceptance; the energy change is computed incrementally beforehand.
///
/// # Panics
/// Panics if `temperature` is not positive.
pub fn mh_step(state: &mut SearchState, temperature: f64, rng: &mut Rng) -> bool {
    assert!(temperature > 0.0, "temperature must be positive");
    let variable = rng.below(state.formula().num_vars() as u64) as u32 + 1;
    let delta = state.delta_energy(variable);
    let accept = delta <= 0 || rng.next_f64() < (-(delta as f64) / temperature).exp();
    if accept {
        state.flip(variable);
    }
    accept
}

/// Runs kernel steps until the state is satisfied or `step_budget` steps
/// have been consumed. For the WalkSAT kernel the `temperature` argument is
/// the walk probability; the two are interchangeable in this framework.
///
/// # Panics
/// Panics if `step_budget` is zero.
pub fn run_episode(
    state: &mut SearchState,
    kernel: KernelKind,
    temperature: f64,
    step_budget: u64,
    rng: &mut Rng,
) -> EpisodeOutcome {
    assert!(step_budget >= 1, "episode budget must be at least 1");
    let mut steps = 0;
    while steps < step_budget && state.energy() > 0 {
        match kernel {
            KernelKind::WalkSat => {
                walksat_step(state, temperature, rng);
            }
            KernelKind::MetropolisHastings => {
                mh_step(state, temperature, rng);
            }
        }
        steps += 1;
    }
    EpisodeOutcome {
        steps_taken: steps,
        solved: state.is_satisfied(),
        final_energy: state.energy(),
    }
}
