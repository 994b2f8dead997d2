//! Replica-exchange orchestration.
//!
//! A fixed ladder of temperature slots each runs an episode of local
//! updates on its own configuration; after every episode, adjacent slots
//! probabilistically swap configurations. Slots keep their temperature and
//! rng stream forever; only configurations (and their identities, for
//! tracing) move. Episodes within one round are independent, so they may
//! run on parallel workers; results are bit-identical either way because
//! every stream is keyed by slot.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{Assignment, Formula, SearchState};
use crate::kernels::{run_episode, KernelKind};
use crate::rng::{derive_seed, Rng};
use crate::schedule::TemperatureSchedule;

/// Key part for per-slot replica streams: `derive_seed(seed, &[STREAM_REPLICA, slot])`.
pub const STREAM_REPLICA: u64 = 1;
/// Key part for the exchange-decision stream: `derive_seed(seed, &[STREAM_EXCHANGE])`.
///
/// Exchange randomness is kept off the replica streams so replica
/// trajectories do not depend on acceptance outcomes.
pub const STREAM_EXCHANGE: u64 = 2;

#[derive(Debug, Error)]
pub enum PticError {
    #[error("steps per episode must be at least 1")]
    ZeroStepBudget,
    #[error("episode limit must be at least 1")]
    ZeroEpisodeLimit,
    #[error("WalkSAT temperatures are walk probabilities and must lie in (0, 1]; got {0}")]
    TemperatureNotAProbability(f64),
}

/// Probability of swapping the configurations of two adjacent slots, given
/// their post-episode energies. `lo`/`hi` refer to slot index order (the
/// pair `(i, i+1)`), not to temperature magnitude:
/// `min(1, exp((1/t_hi - 1/t_lo) * (e_hi - e_lo)))`.
///
/// The exponential is evaluated only for negative exponents, so the result
/// is exact at 1 otherwise and cannot overflow.
///
/// # Panics
/// Panics if either temperature is not positive.
pub fn exchange_probability(energy_lo: usize, temp_lo: f64, energy_hi: usize, temp_hi: f64) -> f64 {
    assert!(
        temp_lo > 0.0 && temp_hi > 0.0,
        "temperatures must be positive"
    );
    let delta_beta = 1.0 / temp_hi - 1.0 / temp_lo;
    let delta_energy = energy_hi as f64 - energy_lo as f64;
    let exponent = delta_beta * delta_energy;
    if exponent >= 0.0 {
        1.0
    } else {
        exponent.exp()
    }
}

/// Per-episode trace record. `slot_energies[i]` is the energy of slot `i`
/// after the episode's local updates; `occupancy[c]` is the slot that
/// configuration `c` (numbered by its starting slot) occupied *during* the
/// episode, so exchanges show up in the following record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub episode: u64,
    pub slot_energies: Vec<usize>,
    pub occupancy: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct PticResult {
    pub best_assignment: Assignment,
    pub best_energy: usize,
    pub solved: bool,
    /// Episodes executed, including the final (possibly partial) one.
    pub episodes_run: u64,
    /// Lowest-index slot that reached energy 0, if any.
    pub successful_slot: Option<usize>,
    /// Steps the successful slot used in its final episode.
    pub successful_q: Option<u64>,
    /// `kappa * (Q * (s - 1) + q)` on success, `kappa * Q * S` otherwise.
    pub total_iterations: u64,
    /// Attempted swaps per adjacent pair (length `kappa - 1`).
    pub exchange_attempts: Vec<u64>,
    pub exchange_accepts: Vec<u64>,
    /// One event per episode when tracing is on, else empty.
    pub trace: Vec<TraceEvent>,
}

#[derive(Clone, Debug)]
pub struct PticOptions {
    pub kernel: KernelKind,
    pub schedule: TemperatureSchedule,
    /// Local updates per episode (Q).
    pub steps_per_episode: u64,
    /// Episode limit (S).
    pub max_episodes: u64,
    pub seed: u64,
    pub record_trace: bool,
    /// Run the slots of each episode on rayon workers. Output is identical
    /// to the serial path.
    pub parallel_replicas: bool,
    /// Test hook: when set, every exchange uses this probability instead of
    /// the energy-dependent rule.
    pub exchange_override: Option<f64>,
}

impl PticOptions {
    pub fn new(
        kernel: KernelKind,
        schedule: TemperatureSchedule,
        steps_per_episode: u64,
        max_episodes: u64,
        seed: u64,
    ) -> Self {
        PticOptions {
            kernel,
            schedule,
            steps_per_episode,
            max_episodes,
            seed,
            record_trace: false,
            parallel_replicas: false,
            exchange_override: None,
        }
    }
}

struct Slot {
    temperature: f64,
    state: SearchState,
    rng: Rng,
    /// Which starting configuration currently lives here.
    config_id: usize,
    last_steps: u64,
}

impl Slot {
    fn run(&mut self, kernel: KernelKind, step_budget: u64) {
        let outcome = run_episode(
            &mut self.state,
            kernel,
            self.temperature,
            step_budget,
            &mut self.rng,
        );
        self.last_steps = outcome.steps_taken;
    }
}

/// Swaps configurations between adjacent slots, pair by pair in ladder
/// order, using the current (post-swap) slot energies for each decision.
/// Returns nothing; counters record attempts and accepts per pair.
fn exchange_phase(
    slots: &mut [Slot],
    rng: &mut Rng,
    override_probability: Option<f64>,
    attempts: &mut [u64],
    accepts: &mut [u64],
) {
    for i in 0..slots.len() - 1 {
        let p = override_probability.unwrap_or_else(|| {
            exchange_probability(
                slots[i].state.energy(),
                slots[i].temperature,
                slots[i + 1].state.energy(),
                slots[i + 1].temperature,
            )
        });
        attempts[i] += 1;
        if rng.next_f64() < p {
            accepts[i] += 1;
            let (a, b) = slots.split_at_mut(i + 1);
            std::mem::swap(&mut a[i].state, &mut b[0].state);
            std::mem::swap(&mut a[i].config_id, &mut b[0].config_id);
        }
    }
}

/// Runs the cooperative replica-exchange search until some slot satisfies
/// the formula or `max_episodes` episodes complete.
///
/// Solutions are checked after all slots finish their episode (so parallel
/// and serial execution agree); if several slots solve in the same episode
/// the lowest slot index is recorded, and the remaining slots' partial work
/// is not counted, matching the optimistic-halt accounting.
pub fn run_ptic(formula: &Arc<Formula>, options: &PticOptions) -> Result<PticResult, PticError> {
    if options.steps_per_episode == 0 {
        return Err(PticError::ZeroStepBudget);
    }
    if options.max_episodes == 0 {
        return Err(PticError::ZeroEpisodeLimit);
    }
    if options.kernel == KernelKind::WalkSat && !options.schedule.fits_walk_probability() {
        let worst = options
            .schedule
            .temps()
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        return Err(PticError::TemperatureNotAProbability(worst));
    }

    let kappa = options.schedule.kappa();
    let q = options.steps_per_episode;
    let mut slots: Vec<Slot> = (0..kappa)
        .map(|i| {
            let mut rng = Rng::derived(options.seed, &[STREAM_REPLICA, i as u64]);
            let state = SearchState::random(formula.clone(), &mut rng);
            Slot {
                temperature: options.schedule.temp(i),
                state,
                rng,
                config_id: i,
                last_steps: 0,
            }
        })
        .collect();
    let mut exchange_rng = Rng::from_seed(derive_seed(options.seed, &[STREAM_EXCHANGE]));

    let mut best = slots
        .iter()
        .min_by_key(|slot| slot.state.energy())
        .expect("at least two slots");
    let mut best_assignment = best.state.assignment().clone();
    let mut best_energy = best.state.energy();

    let mut attempts = vec![0u64; kappa - 1];
    let mut accepts = vec![0u64; kappa - 1];
    let mut trace = Vec::new();

    for episode in 1..=options.max_episodes {
        if options.parallel_replicas {
            slots
                .par_iter_mut()
                .for_each(|slot| slot.run(options.kernel, q));
        } else {
            for slot in &mut slots {
                slot.run(options.kernel, q);
            }
        }

        if options.record_trace {
            let mut occupancy = vec![0usize; kappa];
            for (index, slot) in slots.iter().enumerate() {
                occupancy[slot.config_id] = index;
            }
            trace.push(TraceEvent {
                episode,
                slot_energies: slots.iter().map(|s| s.state.energy()).collect(),
                occupancy,
            });
        }

        if let Some(winner) = slots.iter().position(|s| s.state.is_satisfied()) {
            let steps = slots[winner].last_steps;
            return Ok(PticResult {
                best_assignment: slots[winner].state.assignment().clone(),
                best_energy: 0,
                solved: true,
                episodes_run: episode,
                successful_slot: Some(winner),
                successful_q: Some(steps),
                total_iterations: kappa as u64 * (q * (episode - 1) + steps),
                exchange_attempts: attempts,
                exchange_accepts: accepts,
                trace,
            });
        }

        best = slots
            .iter()
            .min_by_key(|slot| slot.state.energy())
            .expect("at least two slots");
        if best.state.energy() < best_energy {
            best_energy = best.state.energy();
            best_assignment = best.state.assignment().clone();
        }

        exchange_phase(
            &mut slots,
            &mut exchange_rng,
            options.exchange_override,
            &mut attempts,
            &mut accepts,
        );
    }

    Ok(PticResult {
        best_assignment,
        best_energy,
        solved: false,
        episodes_run: options.max_episodes,
        successful_slot: None,
        successful_q: None,
        total_iterations: kappa as u64 * q * options.max_episodes,
        exchange_attempts: attempts,
        exchange_accepts: accepts,
        trace,
    })
}

/// Standard parallel tempering: Metropolis updates with one sweep (one
/// update attempt per variable) per episode. The step budget is fixed to
/// the variable count regardless of any caller preference.
pub fn run_standard_pt(
    formula: &Arc<Formula>,
    schedule: TemperatureSchedule,
    max_sweeps: u64,
    seed: u64,
    record_trace: bool,
) -> Result<PticResult, PticError> {
    let options = PticOptions {
        kernel: KernelKind::MetropolisHastings,
        schedule,
        steps_per_episode: formula.num_vars() as u64,
        max_episodes: max_sweeps,
        seed,
        record_trace,
        parallel_replicas: false,
        exchange_override: None,
    };
    run_ptic(formula, &options)
}
