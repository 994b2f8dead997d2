//! Brute-force oracles and small-instance helpers shared by the
//! integration suites. The oracles evaluate clauses from scratch on plain
//! assignments and deliberately share no code with the incremental path
//! they are used to check.
#![allow(dead_code)] // not every suite uses every oracle

use ptsat::cnf::{Assignment, Formula, Literal};
use ptsat::rng::Rng;

pub fn naive_energy(formula: &Formula, assignment: &Assignment) -> usize {
    formula
        .clauses()
        .filter(|clause| !clause.iter().any(|&l| assignment.satisfies(l)))
        .count()
}

pub fn naive_violated(formula: &Formula, assignment: &Assignment) -> Vec<u32> {
    formula
        .clauses()
        .enumerate()
        .filter(|(_, clause)| !clause.iter().any(|&l| assignment.satisfies(l)))
        .map(|(id, _)| id as u32)
        .collect()
}

/// Break value by trial flip: satisfied clauses that stop being satisfied.
pub fn naive_break(formula: &Formula, assignment: &Assignment, variable: u32) -> u32 {
    let mut flipped = assignment.clone();
    flipped.toggle(variable);
    formula
        .clauses()
        .filter(|clause| {
            clause.iter().any(|&l| assignment.satisfies(l))
                && !clause.iter().any(|&l| flipped.satisfies(l))
        })
        .count() as u32
}

/// Make value by trial flip: violated clauses that become satisfied.
pub fn naive_make(formula: &Formula, assignment: &Assignment, variable: u32) -> u32 {
    let mut flipped = assignment.clone();
    flipped.toggle(variable);
    formula
        .clauses()
        .filter(|clause| {
            !clause.iter().any(|&l| assignment.satisfies(l))
                && clause.iter().any(|&l| flipped.satisfies(l))
        })
        .count() as u32
}

/// A random formula with distinct variables per clause, for oracle runs.
pub fn random_formula(rng: &mut Rng, max_vars: usize, max_clauses: usize) -> Formula {
    let num_vars = 2 + rng.below(max_vars as u64 - 1) as usize;
    let num_clauses = 1 + rng.below(max_clauses as u64) as usize;
    let clauses = (0..num_clauses)
        .map(|_| {
            let width = 1 + rng.below(num_vars.min(5) as u64) as usize;
            let mut vars: Vec<u32> = Vec::with_capacity(width);
            while vars.len() < width {
                let v = rng.below(num_vars as u64) as u32 + 1;
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
            vars.into_iter()
                .map(|v| Literal::new(v, rng.next_bool()))
                .collect()
        })
        .collect();
    Formula::new(num_vars, clauses).expect("random clauses are valid")
}
