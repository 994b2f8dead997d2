//! Seeded planted random k-SAT generation.
//!
//! Clauses are drawn by sampling k distinct variables and uniform
//! polarities, rejecting any clause the planted assignment violates and any
//! duplicate of an already-emitted clause, so the planted assignment
//! satisfies every instance by construction. Plain rejection planting is
//! the default; a clause-type weight table can thin specific
//! agreement-count classes for reweighted planting.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{Assignment, Formula, Literal};
use crate::rng::Rng;

/// Resampling attempts allowed per clause before giving up on a spec.
const ATTEMPT_BUDGET: u64 = 100_000;

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("clause {clause}: no acceptable clause found within {budget} attempts")]
    AttemptBudgetExhausted { clause: usize, budget: u64 },
}

/// Parameters of one planted instance.
#[derive(Clone, Debug, PartialEq)]
pub struct PlantedSpec {
    pub num_vars: usize,
    pub num_clauses: usize,
    pub clause_size: usize,
    pub seed: u64,
    /// Fixed planted assignment; drawn from the seed when absent.
    pub planted: Option<Assignment>,
    /// Relative acceptance weight per clause type, indexed by the number of
    /// literals agreeing with the planted assignment (1..=k). Uniform when
    /// absent.
    pub type_weights: Option<Vec<f64>>,
}

impl PlantedSpec {
    pub fn new(num_vars: usize, num_clauses: usize, clause_size: usize, seed: u64) -> Self {
        PlantedSpec {
            num_vars,
            num_clauses,
            clause_size,
            seed,
            planted: None,
            type_weights: None,
        }
    }
}

/// Instance-class presets: `group-2` (random 4SAT, 100 vars, 1000
/// clauses), `group-3` (random 6SAT, 50 vars, 2200 clauses), `group-4`
/// (random 7SAT, 50 vars, 4500 clauses).
pub fn preset(name: &str, seed: u64) -> Option<PlantedSpec> {
    match name {
        "group-2" => Some(PlantedSpec::new(100, 1000, 4, seed)),
        "group-3" => Some(PlantedSpec::new(50, 2200, 6, seed)),
        "group-4" => Some(PlantedSpec::new(50, 4500, 7, seed)),
        _ => None,
    }
}

pub fn preset_names() -> &'static [&'static str] {
    &["group-2", "group-3", "group-4"]
}

/// Generates the formula and its planted assignment. Deterministic in the
/// spec, including the seed.
pub fn generate_planted(spec: &PlantedSpec) -> Result<(Formula, Assignment), GeneratorError> {
    let (n, m, k) = (spec.num_vars, spec.num_clauses, spec.clause_size);
    if k == 0 || n == 0 || m == 0 {
        return Err(GeneratorError::InvalidSpec(
            "variables, clauses, and clause size must all be positive".into(),
        ));
    }
    if k > n {
        return Err(GeneratorError::InvalidSpec(format!(
            "clause size {k} exceeds variable count {n}"
        )));
    }
    if let Some(planted) = &spec.planted {
        if planted.len() != n {
            return Err(GeneratorError::InvalidSpec(format!(
                "planted assignment has {} entries for {n} variables",
                planted.len()
            )));
        }
    }
    let weight_cap = match &spec.type_weights {
        Some(weights) => {
            if weights.len() != k {
                return Err(GeneratorError::InvalidSpec(format!(
                    "expected {k} type weights, got {}",
                    weights.len()
                )));
            }
            let cap = weights.iter().copied().fold(0.0f64, f64::max);
            if weights.iter().any(|w| !w.is_finite() || *w < 0.0) || cap <= 0.0 {
                return Err(GeneratorError::InvalidSpec(
                    "type weights must be non-negative with a positive maximum".into(),
                ));
            }
            Some(cap)
        }
        None => None,
    };

    let mut rng = Rng::from_seed(spec.seed);
    let planted = match &spec.planted {
        Some(p) => p.clone(),
        None => Assignment::random(n, &mut rng),
    };

    let mut emitted: HashSet<Vec<Literal>> = HashSet::with_capacity(m);
    let mut clauses: Vec<Vec<Literal>> = Vec::with_capacity(m);
    let mut vars: Vec<u32> = Vec::with_capacity(k);
    for clause_index in 0..m {
        let mut attempts = 0u64;
        loop {
            attempts += 1;
            if attempts > ATTEMPT_BUDGET {
                return Err(GeneratorError::AttemptBudgetExhausted {
                    clause: clause_index,
                    budget: ATTEMPT_BUDGET,
                });
            }
            vars.clear();
            while vars.len() < k {
                let v = rng.below(n as u64) as u32 + 1;
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
            vars.sort_unstable();
            let clause: Vec<Literal> = vars
                .iter()
                .map(|&v| Literal::new(v, rng.next_bool()))
                .collect();
            let agreeing = clause.iter().filter(|&&l| planted.satisfies(l)).count();
            if agreeing == 0 {
                continue; // planted assignment would violate it
            }
            if let Some(cap) = weight_cap {
                let weights = spec.type_weights.as_ref().expect("validated above");
                if rng.next_f64() >= weights[agreeing - 1] / cap {
                    continue;
                }
            }
            if emitted.contains(&clause) {
                continue;
            }
            emitted.insert(clause.clone());
            clauses.push(clause);
            break;
        }
    }
    let formula = Formula::new(n, clauses).expect("generated clauses satisfy formula invariants");
    debug_assert_eq!(formula.violated_count(&planted), 0);
    Ok((formula, planted))
}

/// Verification sidecar emitted next to a generated DIMACS file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlantedSidecar {
    pub seed: u64,
    pub spec: SidecarSpec,
    /// Planted assignment as a `0`/`1` string, one character per variable.
    pub planted_assignment: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SidecarSpec {
    pub num_vars: usize,
    pub num_clauses: usize,
    pub clause_size: usize,
}

impl PlantedSidecar {
    pub fn new(spec: &PlantedSpec, planted: &Assignment) -> Self {
        PlantedSidecar {
            seed: spec.seed,
            spec: SidecarSpec {
                num_vars: spec.num_vars,
                num_clauses: spec.num_clauses,
                clause_size: spec.clause_size,
            },
            planted_assignment: planted.to_bit_string(),
        }
    }

    pub fn planted(&self) -> Option<Assignment> {
        Assignment::from_bit_string(&self.planted_assignment)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::write_dimacs_string;

    #[test]
    fn presets_are_satisfied_by_their_planted_assignment() {
        for name in preset_names() {
            let spec = preset(name, 42).unwrap();
            let (formula, planted) = generate_planted(&spec).unwrap();
            assert_eq!(formula.num_vars(), spec.num_vars);
            assert_eq!(formula.num_clauses(), spec.num_clauses);
            assert_eq!(formula.violated_count(&planted), 0, "preset {name}");
        }
    }

    #[test]
    fn tiny_full_width_clause_is_always_satisfied() {
        // k = n = 3, one clause: exhaustive over planted assignments
        for bits in 0..8u8 {
            let planted = Assignment::from_bits((0..3).map(|i| bits >> i & 1 == 1).collect());
            for seed in 0..8 {
                let mut spec = PlantedSpec::new(3, 1, 3, seed);
                spec.planted = Some(planted.clone());
                let (formula, got) = generate_planted(&spec).unwrap();
                assert_eq!(got, planted);
                assert_eq!(formula.violated_count(&planted), 0);
            }
        }
    }

    #[test]
    fn deterministic_output() {
        let spec = PlantedSpec::new(30, 120, 3, 7);
        let (a, pa) = generate_planted(&spec).unwrap();
        let (b, pb) = generate_planted(&spec).unwrap();
        assert_eq!(write_dimacs_string(&a), write_dimacs_string(&b));
        assert_eq!(pa, pb);
        let other = PlantedSpec::new(30, 120, 3, 8);
        let (c, _) = generate_planted(&other).unwrap();
        assert_ne!(write_dimacs_string(&a), write_dimacs_string(&c));
    }

    #[test]
    fn no_repeated_variables_or_duplicate_clauses() {
        let spec = PlantedSpec::new(20, 300, 4, 99);
        let (formula, _) = generate_planted(&spec).unwrap();
        let mut seen = HashSet::new();
        for clause in formula.clauses() {
            let mut vars: Vec<u32> = clause.iter().map(|l| l.variable()).collect();
            vars.sort_unstable();
            vars.dedup();
            assert_eq!(vars.len(), clause.len(), "repeated variable");
            let mut key: Vec<i32> = clause.iter().map(|l| l.to_dimacs()).collect();
            key.sort_unstable();
            assert!(seen.insert(key), "duplicate clause");
        }
    }

    #[test]
    fn polarity_bias_matches_the_rejection_law() {
        // With an all-ones planted assignment a literal agrees iff it is
        // positive. Conditioned on the clause being satisfied, the agreeing
        // fraction is 2^(k-1) / (2^k - 1).
        let k = 4usize;
        let mut spec = PlantedSpec::new(60, 2_500, k, 4242);
        spec.planted = Some(Assignment::from_bits(vec![true; 60]));
        let (formula, _) = generate_planted(&spec).unwrap();
        let literals = 2_500 * k;
        let agreeing: usize = formula
            .clauses()
            .flat_map(|c| c.iter())
            .filter(|l| l.polarity())
            .count();
        let fraction = agreeing as f64 / literals as f64;
        let expected = 2f64.powi(k as i32 - 1) / (2f64.powi(k as i32) - 1.0);
        // per-clause agreement-count variance under the conditional law
        let norm = 2f64.powi(k as i32) - 1.0;
        let mut mean_t = 0.0;
        let mut mean_t2 = 0.0;
        for t in 1..=k {
            let p = binomial(k, t) / norm;
            mean_t += t as f64 * p;
            mean_t2 += (t * t) as f64 * p;
        }
        let var_t = mean_t2 - mean_t * mean_t;
        let sigma = (2_500.0 * var_t).sqrt() / literals as f64;
        assert!(
            (fraction - expected).abs() <= 3.0 * sigma,
            "fraction {fraction} vs expected {expected} (3 sigma = {})",
            3.0 * sigma
        );
    }

    fn binomial(n: usize, k: usize) -> f64 {
        (1..=k).fold(1.0, |acc, i| acc * (n - k + i) as f64 / i as f64)
    }

    #[test]
    fn type_weights_shift_the_distribution() {
        // forcing weight onto type k emits only fully-agreeing clauses
        let k = 3;
        let mut spec = PlantedSpec::new(30, 200, k, 5);
        spec.planted = Some(Assignment::from_bits(vec![true; 30]));
        let mut weights = vec![0.0; k];
        weights[k - 1] = 1.0;
        spec.type_weights = Some(weights);
        let (formula, _) = generate_planted(&spec).unwrap();
        for clause in formula.clauses() {
            assert!(clause.iter().all(|l| l.polarity()));
        }
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(
            generate_planted(&PlantedSpec::new(3, 1, 4, 0)),
            Err(GeneratorError::InvalidSpec(_))
        ));
        assert!(matches!(
            generate_planted(&PlantedSpec::new(0, 1, 1, 0)),
            Err(GeneratorError::InvalidSpec(_))
        ));
        let mut spec = PlantedSpec::new(4, 1, 2, 0);
        spec.planted = Some(Assignment::new_false(3));
        assert!(matches!(
            generate_planted(&spec),
            Err(GeneratorError::InvalidSpec(_))
        ));
        let mut spec = PlantedSpec::new(4, 1, 2, 0);
        spec.type_weights = Some(vec![0.0, 0.0]);
        assert!(matches!(
            generate_planted(&spec),
            Err(GeneratorError::InvalidSpec(_))
        ));
    }

    #[test]
    fn impossible_clause_count_exhausts_the_budget() {
        // n = k = 3: only 7 distinct satisfied clauses exist
        let spec = PlantedSpec::new(3, 8, 3, 1);
        assert!(matches!(
            generate_planted(&spec),
            Err(GeneratorError::AttemptBudgetExhausted { .. })
        ));
    }

    #[test]
    fn sidecar_roundtrip() {
        let spec = PlantedSpec::new(10, 30, 3, 77);
        let (_, planted) = generate_planted(&spec).unwrap();
        let sidecar = PlantedSidecar::new(&spec, &planted);
        let json = serde_json::to_string(&sidecar).unwrap();
        let back: PlantedSidecar = serde_json::from_str(&json).unwrap();
        assert_eq!(back, sidecar);
        assert_eq!(back.planted().unwrap(), planted);
    }
}
