//! Temperature schedules: validated ladders, uniform and inverse-linear
//! constructors, named presets, and the exchange-rate balancing tuner.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::Formula;
use crate::kernels::KernelKind;
use crate::ptic::{run_ptic, PticError, PticOptions};
use crate::rng::derive_seed;

/// The reference seven-temperature ladder shipped as preset `paper-tuned-7`.
pub const TUNED_7: [f64; 7] = [1.0, 0.6, 0.25, 0.18, 0.14, 0.12, 0.1];

#[derive(Debug, Error)]
pub enum ScheduleError {
    #[error("schedule needs at least two temperatures, got {0}")]
    TooShort(usize),
    #[error("temperature {0} is not positive and finite")]
    NonPositive(f64),
    #[error("temperatures must be strictly monotone; entries {0} and {1} violate that")]
    NotMonotone(f64, f64),
    #[error("temperature bounds must satisfy 0 < t_min < t_max, got [{t_min}, {t_max}]")]
    BadBounds { t_min: f64, t_max: f64 },
}

#[derive(Debug, Error)]
pub enum TuneError {
    #[error("probe run attempted no exchanges; result is inconclusive")]
    Inconclusive,
    #[error("no probe problems supplied")]
    NoProbes,
    #[error("probe repeat count must be at least 1")]
    NoRepeats,
    #[error(transparent)]
    Ptic(#[from] PticError),
}

/// An ordered ladder of distinct positive temperatures, one per replica
/// slot. Strictly monotone in one direction; constructors produce hottest
/// first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct TemperatureSchedule {
    temps: Vec<f64>,
}

impl TemperatureSchedule {
    pub fn new(temps: Vec<f64>) -> Result<Self, ScheduleError> {
        if temps.len() < 2 {
            return Err(ScheduleError::TooShort(temps.len()));
        }
        for &t in &temps {
            if !(t.is_finite() && t > 0.0) {
                return Err(ScheduleError::NonPositive(t));
            }
        }
        let descending = temps[0] > temps[1];
        for pair in temps.windows(2) {
            let ok = if descending {
                pair[0] > pair[1]
            } else {
                pair[0] < pair[1]
            };
            if !ok {
                return Err(ScheduleError::NotMonotone(pair[0], pair[1]));
            }
        }
        Ok(TemperatureSchedule { temps })
    }

    /// Number of replica slots.
    pub fn kappa(&self) -> usize {
        self.temps.len()
    }

    pub fn temps(&self) -> &[f64] {
        &self.temps
    }

    pub fn temp(&self, slot: usize) -> f64 {
        self.temps[slot]
    }

    /// True when every temperature is a valid walk probability.
    pub fn fits_walk_probability(&self) -> bool {
        self.temps.iter().all(|&t| t <= 1.0)
    }
}

impl TryFrom<Vec<f64>> for TemperatureSchedule {
    type Error = ScheduleError;
    fn try_from(temps: Vec<f64>) -> Result<Self, ScheduleError> {
        TemperatureSchedule::new(temps)
    }
}

impl From<TemperatureSchedule> for Vec<f64> {
    fn from(s: TemperatureSchedule) -> Vec<f64> {
        s.temps
    }
}

fn check_bounds(kappa: usize, t_min: f64, t_max: f64) -> Result<(), ScheduleError> {
    if kappa < 2 {
        return Err(ScheduleError::TooShort(kappa));
    }
    if !(t_min.is_finite() && t_max.is_finite() && 0.0 < t_min && t_min < t_max) {
        return Err(ScheduleError::BadBounds { t_min, t_max });
    }
    Ok(())
}

/// Temperatures equally spaced from `t_max` down to `t_min`.
pub fn uniform_schedule(
    kappa: usize,
    t_min: f64,
    t_max: f64,
) -> Result<TemperatureSchedule, ScheduleError> {
    check_bounds(kappa, t_min, t_max)?;
    let step = (t_max - t_min) / (kappa - 1) as f64;
    let mut temps: Vec<f64> = (0..kappa).map(|i| t_max - i as f64 * step).collect();
    temps[kappa - 1] = t_min;
    TemperatureSchedule::new(temps)
}

/// Inverse temperatures equally spaced: `1/T` runs linearly from `1/t_max`
/// to `1/t_min`, so the ladder is dense near the cold end.
pub fn inverse_linear_schedule(
    kappa: usize,
    t_min: f64,
    t_max: f64,
) -> Result<TemperatureSchedule, ScheduleError> {
    check_bounds(kappa, t_min, t_max)?;
    let beta_lo = 1.0 / t_max;
    let beta_hi = 1.0 / t_min;
    let step = (beta_hi - beta_lo) / (kappa - 1) as f64;
    let mut temps: Vec<f64> = (0..kappa)
        .map(|i| 1.0 / (beta_lo + i as f64 * step))
        .collect();
    temps[0] = t_max;
    temps[kappa - 1] = t_min;
    TemperatureSchedule::new(temps)
}

/// Named schedules addressable from configuration files.
pub fn preset(name: &str) -> Option<TemperatureSchedule> {
    match name {
        "paper-tuned-7" => Some(TemperatureSchedule::new(TUNED_7.to_vec()).unwrap()),
        _ => None,
    }
}

/// Empirical exchange acceptance per adjacent slot pair over a probe run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExchangeRateProfile {
    /// Acceptance fraction per pair, each in `[0, 1]`.
    pub rates: Vec<f64>,
    /// Attempt count per pair; all positive for a valid profile.
    pub attempts: Vec<u64>,
}

impl ExchangeRateProfile {
    pub fn from_counts(accepts: &[u64], attempts: &[u64]) -> Result<Self, TuneError> {
        if attempts.is_empty() || attempts.contains(&0) {
            return Err(TuneError::Inconclusive);
        }
        let rates = accepts
            .iter()
            .zip(attempts)
            .map(|(&acc, &att)| acc as f64 / att as f64)
            .collect();
        Ok(ExchangeRateProfile {
            rates,
            attempts: attempts.to_vec(),
        })
    }
}

/// Population variance.
pub fn rate_variance(rates: &[f64]) -> f64 {
    let n = rates.len() as f64;
    let mean = rates.iter().sum::<f64>() / n;
    rates.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / n
}

/// One probe-and-update round of the tuner.
#[derive(Clone, Debug)]
pub struct TuneStep {
    /// The schedule that was probed.
    pub schedule: TemperatureSchedule,
    pub rates: Vec<f64>,
    pub variance: f64,
    /// False only for the final round whose variance increased.
    pub accepted: bool,
}

#[derive(Clone, Debug)]
pub struct TuneOutcome {
    /// The schedule from the last round whose variance did not increase.
    pub schedule: TemperatureSchedule,
    pub steps: Vec<TuneStep>,
}

/// Index of the temperature the weakest pair adjusts: the pair member
/// farther from its nearest endpoint, ties to the colder side. Endpoints
/// are never selected for `kappa >= 3`.
fn nudge_target(kappa: usize, pair: usize) -> usize {
    let dist = |i: usize| i.min(kappa - 1 - i);
    if dist(pair + 1) >= dist(pair) {
        pair + 1
    } else {
        pair
    }
}

/// Moves one temperature adjacent to the weakest-exchanging pair to the
/// midpoint of the pair. Midpoints preserve order, so monotonicity holds.
fn nudged(
    schedule: &TemperatureSchedule,
    pair: usize,
) -> Result<TemperatureSchedule, ScheduleError> {
    let mut temps = schedule.temps().to_vec();
    let target = nudge_target(temps.len(), pair);
    temps[target] = (temps[pair] + temps[pair + 1]) / 2.0;
    TemperatureSchedule::new(temps)
}

/// Iteratively rebalances exchange rates: probe the current schedule,
/// measure the per-pair acceptance variance, stop once it increases, and
/// otherwise nudge a temperature next to the weakest pair toward its
/// neighbour. Endpoint temperatures are never modified; a two-temperature
/// schedule has nothing adjustable and is returned unchanged.
///
/// `probe` maps a schedule to its measured [`ExchangeRateProfile`];
/// `max_rounds` bounds the loop for probes whose variance never increases.
pub fn tune_schedule_with<F>(
    initial: &TemperatureSchedule,
    max_rounds: usize,
    mut probe: F,
) -> Result<TuneOutcome, TuneError>
where
    F: FnMut(&TemperatureSchedule) -> Result<ExchangeRateProfile, TuneError>,
{
    if initial.kappa() == 2 {
        return Ok(TuneOutcome {
            schedule: initial.clone(),
            steps: Vec::new(),
        });
    }
    let mut accepted = initial.clone();
    let mut current = initial.clone();
    let mut best_variance = f64::INFINITY;
    let mut steps = Vec::new();
    for _ in 0..max_rounds {
        let profile = probe(&current)?;
        let variance = rate_variance(&profile.rates);
        if variance > best_variance {
            steps.push(TuneStep {
                schedule: current,
                rates: profile.rates,
                variance,
                accepted: false,
            });
            break;
        }
        best_variance = variance;
        accepted = current.clone();
        let weakest = profile
            .rates
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).expect("rates are finite"))
            .map(|(i, _)| i)
            .expect("profile is nonempty");
        steps.push(TuneStep {
            schedule: current.clone(),
            rates: profile.rates,
            variance,
            accepted: true,
        });
        match nudged(&current, weakest) {
            Ok(next) => current = next,
            // adjacent temperatures too close to split further
            Err(_) => break,
        }
    }
    Ok(TuneOutcome {
        schedule: accepted,
        steps,
    })
}

/// Empirical exchange acceptance of a schedule, aggregated over replica-
/// exchange runs on every probe formula and `repeats` seeds per formula.
/// Probe seeds derive from `(seed, formula index, repeat)`.
pub fn measure_exchange_profile(
    schedule: &TemperatureSchedule,
    probes: &[Arc<Formula>],
    kernel: KernelKind,
    steps_per_episode: u64,
    probe_episodes: u64,
    repeats: u64,
    seed: u64,
) -> Result<ExchangeRateProfile, TuneError> {
    if probes.is_empty() {
        return Err(TuneError::NoProbes);
    }
    if repeats == 0 {
        return Err(TuneError::NoRepeats);
    }
    let pairs = schedule.kappa() - 1;
    let mut accepts = vec![0u64; pairs];
    let mut attempts = vec![0u64; pairs];
    for (index, formula) in probes.iter().enumerate() {
        for repeat in 0..repeats {
            let options = PticOptions::new(
                kernel,
                schedule.clone(),
                steps_per_episode,
                probe_episodes,
                derive_seed(seed, &[index as u64, repeat]),
            );
            let result = run_ptic(formula, &options)?;
            for pair in 0..pairs {
                accepts[pair] += result.exchange_accepts[pair];
                attempts[pair] += result.exchange_attempts[pair];
            }
        }
    }
    ExchangeRateProfile::from_counts(&accepts, &attempts)
}

/// [`tune_schedule_with`] over the real probe: replica-exchange runs on the
/// supplied formulas measure each candidate schedule's exchange rates.
#[allow(clippy::too_many_arguments)]
pub fn tune_schedule(
    initial: &TemperatureSchedule,
    probes: &[Arc<Formula>],
    kernel: KernelKind,
    steps_per_episode: u64,
    probe_episodes: u64,
    repeats: u64,
    max_rounds: usize,
    seed: u64,
) -> Result<TuneOutcome, TuneError> {
    if probes.is_empty() {
        return Err(TuneError::NoProbes);
    }
    tune_schedule_with(initial, max_rounds, |schedule| {
        measure_exchange_profile(
            schedule,
            probes,
            kernel,
            steps_per_episode,
            probe_episodes,
            repeats,
            seed,
        )
    })
}
