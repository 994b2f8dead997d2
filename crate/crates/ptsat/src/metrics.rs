//! Evaluation mathematics: iterations-to-solution with 99% confidence,
//! iteration-accounting conventions, success rates, improvement buckets,
//! and trace analytics.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ptic::TraceEvent;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("repeat set is empty")]
    EmptyRepeatSet,
    #[error("records disagree on the iteration budget: {0} vs {1}")]
    MixedBudgets(u64, u64),
    #[error("instance group is empty")]
    EmptyGroup,
    #[error("repeat sets disagree on gamma: {0} vs {1}")]
    MixedGamma(u64, u64),
    #[error("trace is empty")]
    EmptyTrace,
    #[error("malformed trace: {0}")]
    MalformedTrace(String),
}

/// Outcome of one repeat of a solver run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub solved: bool,
    /// Iterations the run is charged with, per the algorithm's counting
    /// convention (all replicas included).
    pub iterations_used: u64,
    /// The per-repeat iteration upper bound tau.
    pub budget: u64,
}

/// All repeats of one (instance, algorithm) pair, sharing one budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepeatSet {
    records: Vec<RunRecord>,
}

impl RepeatSet {
    pub fn new(records: Vec<RunRecord>) -> Result<Self, MetricsError> {
        let first = records.first().ok_or(MetricsError::EmptyRepeatSet)?;
        let budget = first.budget;
        for r in &records {
            if r.budget != budget {
                return Err(MetricsError::MixedBudgets(budget, r.budget));
            }
        }
        Ok(RepeatSet { records })
    }

    pub fn gamma(&self) -> u64 {
        self.records.len() as u64
    }

    pub fn tau(&self) -> u64 {
        self.records[0].budget
    }

    pub fn solved_count(&self) -> u64 {
        self.records.iter().filter(|r| r.solved).count() as u64
    }

    /// Empirical per-repeat success probability.
    pub fn success_fraction(&self) -> f64 {
        self.solved_count() as f64 / self.gamma() as f64
    }

    pub fn records(&self) -> &[RunRecord] {
        &self.records
    }
}

/// Iterations-to-solution at 99% confidence, or the marker for a pair that
/// never solved (a value, not an error).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Its {
    Iterations(u64),
    Unsolved,
}

impl Its {
    pub fn as_u64(self) -> Option<u64> {
        match self {
            Its::Iterations(v) => Some(v),
            Its::Unsolved => None,
        }
    }
}

impl fmt::Display for Its {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Its::Iterations(v) => write!(f, "{v}"),
            Its::Unsolved => write!(f, "unsolved"),
        }
    }
}

/// Repeats needed for 99% solution confidence at per-repeat success rate
/// `p_hat`; `None` when `p_hat` is zero. Rates of 0.99 and above
/// short-circuit to 1, which also avoids `ln(0)` at `p_hat = 1`.
pub fn r99(p_hat: f64) -> Option<u64> {
    assert!(
        (0.0..=1.0).contains(&p_hat),
        "success rate {p_hat} outside [0, 1]"
    );
    if p_hat <= 0.0 {
        None
    } else if p_hat >= 0.99 {
        Some(1)
    } else {
        Some((0.01f64.ln() / (1.0 - p_hat).ln()).ceil() as u64)
    }
}

/// `tau * R99` over the repeat set's empirical success rate.
pub fn its99(repeats: &RepeatSet) -> Its {
    match r99(repeats.success_fraction()) {
        Some(r) => Its::Iterations(repeats.tau() * r),
        None => Its::Unsolved,
    }
}

/// Total iterations charged to a cooperative run that succeeded in episode
/// `s` after `q` steps of the final episode: `kappa * (Q * (s - 1) + q)`.
///
/// # Panics
/// Panics unless `s >= 1` and `1 <= q <= steps_per_episode`.
pub fn ptic_iterations(kappa: u64, steps_per_episode: u64, episodes: u64, final_steps: u64) -> u64 {
    assert!(episodes >= 1, "episode count must be at least 1");
    assert!(
        final_steps >= 1 && final_steps <= steps_per_episode,
        "final episode steps {final_steps} outside 1..={steps_per_episode}"
    );
    kappa * (steps_per_episode * (episodes - 1) + final_steps)
}

/// Iterations charged to independent parallel replicas under the
/// optimistic-halt rule: the winner's step count times the replica count.
///
/// # Panics
/// Panics if `winner_steps` is zero.
pub fn parallel_baseline_iterations(kappa: u64, winner_steps: u64) -> u64 {
    assert!(
        winner_steps >= 1,
        "winner must have taken at least one step"
    );
    kappa * winner_steps
}

fn check_group(group: &[RepeatSet]) -> Result<(), MetricsError> {
    let first = group.first().ok_or(MetricsError::EmptyGroup)?;
    for set in group {
        if set.gamma() != first.gamma() {
            return Err(MetricsError::MixedGamma(first.gamma(), set.gamma()));
        }
    }
    Ok(())
}

/// Mean fraction of successful repeats across the group, as a percentage.
pub fn per_problem_success_rate(group: &[RepeatSet]) -> Result<f64, MetricsError> {
    check_group(group)?;
    let sum: f64 = group.iter().map(RepeatSet::success_fraction).sum();
    Ok(sum / group.len() as f64 * 100.0)
}

/// Fraction of instances with at least one successful repeat, as a
/// percentage.
pub fn per_group_success_rate(group: &[RepeatSet]) -> Result<f64, MetricsError> {
    check_group(group)?;
    let hits = group.iter().filter(|s| s.solved_count() > 0).count();
    Ok(hits as f64 / group.len() as f64 * 100.0)
}

/// Relative-improvement buckets over the ratio
/// `delta = (baseline - subject) / subject`. Boundaries at 0, 0.2, and 0.8
/// belong to the bucket on their right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ImprovementBucket {
    Decline,
    Small,
    Medium,
    Significant,
}

impl fmt::Display for ImprovementBucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ImprovementBucket::Decline => "decline",
            ImprovementBucket::Small => "small",
            ImprovementBucket::Medium => "medium",
            ImprovementBucket::Significant => "significant",
        };
        write!(f, "{name}")
    }
}

pub fn bucket_for(delta: f64) -> ImprovementBucket {
    if delta < 0.0 {
        ImprovementBucket::Decline
    } else if delta < 0.2 {
        ImprovementBucket::Small
    } else if delta < 0.8 {
        ImprovementBucket::Medium
    } else {
        ImprovementBucket::Significant
    }
}

/// Improvement of the subject over a baseline:
/// `delta = (baseline_its - subject_its) / subject_its` as a dimensionless
/// ratio, positive when the subject needs fewer iterations.
///
/// # Panics
/// Panics if `subject_its` is zero.
pub fn improvement(subject_its: u64, baseline_its: u64) -> (f64, ImprovementBucket) {
    assert!(subject_its > 0, "subject ITS must be positive");
    let delta = (baseline_its as f64 - subject_its as f64) / subject_its as f64;
    (delta, bucket_for(delta))
}

/// Per-configuration view of a trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceAnalytics {
    /// `traversal[c][e]` is the slot configuration `c` occupied during the
    /// `e`-th traced episode.
    pub traversal: Vec<Vec<usize>>,
    /// `slot_energy_series[i][e]` is slot `i`'s post-episode energy.
    pub slot_energy_series: Vec<Vec<usize>>,
    /// The configuration sitting in the successful slot at the end, when a
    /// successful slot was given.
    pub successful_config: Option<usize>,
    /// Distinct slots (temperatures) that configuration visited.
    pub distinct_temperatures: Option<usize>,
}

/// Inverts a trace's slot-major records into per-configuration series and
/// counts how many distinct temperatures the successful configuration
/// visited.
pub fn trace_analytics(
    trace: &[TraceEvent],
    successful_slot: Option<usize>,
) -> Result<TraceAnalytics, MetricsError> {
    let first = trace.first().ok_or(MetricsError::EmptyTrace)?;
    let kappa = first.occupancy.len();
    let mut traversal = vec![Vec::with_capacity(trace.len()); kappa];
    let mut slot_energy_series = vec![Vec::with_capacity(trace.len()); kappa];
    for (at, event) in trace.iter().enumerate() {
        if event.occupancy.len() != kappa || event.slot_energies.len() != kappa {
            return Err(MetricsError::MalformedTrace(format!(
                "event {at} changes the slot count"
            )));
        }
        let mut seen = vec![false; kappa];
        for (config, &slot) in event.occupancy.iter().enumerate() {
            if slot >= kappa || seen[slot] {
                return Err(MetricsError::MalformedTrace(format!(
                    "event {at}: occupancy {:?} is not a permutation",
                    event.occupancy
                )));
            }
            seen[slot] = true;
            traversal[config].push(slot);
        }
        for (slot, &energy) in event.slot_energies.iter().enumerate() {
            slot_energy_series[slot].push(energy);
        }
    }
    let successful_config = match successful_slot {
        Some(slot) => {
            if slot >= kappa {
                return Err(MetricsError::MalformedTrace(format!(
                    "successful slot {slot} out of range for {kappa} slots"
                )));
            }
            let last = trace.last().expect("trace is nonempty");
            Some(
                last.occupancy
                    .iter()
                    .position(|&s| s == slot)
                    .expect("occupancy is a permutation"),
            )
        }
        None => None,
    };
    let distinct_temperatures =
        successful_config.map(|config| traversal[config].iter().collect::<BTreeSet<_>>().len());
    Ok(TraceAnalytics {
        traversal,
        slot_energy_series,
        successful_config,
        distinct_temperatures,
    })
}
