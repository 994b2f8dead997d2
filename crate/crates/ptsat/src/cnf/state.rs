//! Incremental evaluation state for local search.

use std::sync::Arc;

use super::{Assignment, CnfError, Formula, Literal};
use crate::rng::Rng;

const ABSENT: u32 = u32::MAX;

/// Set of violated clause ids with O(1) insert, remove, and uniform pick.
/// Backed by a dense array plus a position index per clause.
#[derive(Clone, Debug)]
struct ViolatedSet {
    items: Vec<u32>,
    position: Vec<u32>,
}

impl ViolatedSet {
    fn new(num_clauses: usize) -> Self {
        ViolatedSet {
            items: Vec::new(),
            position: vec![ABSENT; num_clauses],
        }
    }

    fn len(&self) -> usize {
        self.items.len()
    }

    fn contains(&self, clause: u32) -> bool {
        self.position[clause as usize] != ABSENT
    }

    fn insert(&mut self, clause: u32) {
        debug_assert!(!self.contains(clause));
        self.position[clause as usize] = self.items.len() as u32;
        self.items.push(clause);
    }

    fn remove(&mut self, clause: u32) {
        let at = self.position[clause as usize];
        debug_assert_ne!(at, ABSENT);
        let last = self.items.pop().expect("removing from an empty set");
        if last != clause {
            self.items[at as usize] = last;
            self.position[last as usize] = at;
        }
        self.position[clause as usize] = ABSENT;
    }

    fn as_slice(&self) -> &[u32] {
        &self.items
    }
}

/// A mutable assignment over an immutable formula, with per-clause true
/// literal counts and the violated-clause set maintained incrementally.
///
/// Single-owner: one thread mutates it at a time, though ownership may move
/// between threads (for example at episode boundaries).
#[derive(Clone, Debug)]
pub struct SearchState {
    formula: Arc<Formula>,
    assignment: Assignment,
    sat_count: Vec<u32>,
    violated: ViolatedSet,
}

impl SearchState {
    /// Builds the state by fully evaluating `assignment` once; all later
    /// updates are incremental.
    pub fn new(formula: Arc<Formula>, assignment: Assignment) -> Result<Self, CnfError> {
        if assignment.len() != formula.num_vars() {
            return Err(CnfError::AssignmentLength {
                len: assignment.len(),
                num_vars: formula.num_vars(),
            });
        }
        let mut sat_count = vec![0u32; formula.num_clauses()];
        let mut violated = ViolatedSet::new(formula.num_clauses());
        for (id, clause) in formula.clauses().enumerate() {
            let count = clause.iter().filter(|&&l| assignment.satisfies(l)).count() as u32;
            sat_count[id] = count;
            if count == 0 {
                violated.insert(id as u32);
            }
        }
        Ok(SearchState {
            formula,
            assignment,
            sat_count,
            violated,
        })
    }

    /// A state over a fresh uniformly random assignment.
    pub fn random(formula: Arc<Formula>, rng: &mut Rng) -> Self {
        let assignment = Assignment::random(formula.num_vars(), rng);
        SearchState::new(formula, assignment).expect("random assignment has matching length")
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn formula_arc(&self) -> &Arc<Formula> {
        &self.formula
    }

    pub fn assignment(&self) -> &Assignment {
        &self.assignment
    }

    /// Number of violated clauses.
    pub fn energy(&self) -> usize {
        self.violated.len()
    }

    pub fn is_satisfied(&self) -> bool {
        self.violated.len() == 0
    }

    /// Currently violated clause ids, in set-internal order.
    pub fn violated(&self) -> &[u32] {
        self.violated.as_slice()
    }

    /// Uniformly random violated clause id.
    ///
    /// # Panics
    /// Panics if no clause is violated.
    pub fn pick_violated(&self, rng: &mut Rng) -> u32 {
        let items = self.violated.as_slice();
        assert!(!items.is_empty(), "pick_violated on a satisfied state");
        items[rng.below(items.len() as u64) as usize]
    }

    pub fn sat_count(&self, clause: u32) -> u32 {
        self.sat_count[clause as usize]
    }

    /// Flips one variable, updating counts, the violated set, and the energy
    /// in time proportional to the number of clauses containing the variable.
    ///
    /// # Panics
    /// Panics if `variable` is not in `1..=num_vars`.
    pub fn flip(&mut self, variable: u32) {
        assert!(
            variable >= 1 && variable as usize <= self.formula.num_vars(),
            "flip: variable {variable} out of range"
        );
        let was = self.assignment.value(variable);
        // the literal that was satisfying loses truth ...
        for &c in self.formula.occurrences(Literal::new(variable, was)) {
            let count = &mut self.sat_count[c as usize];
            *count -= 1;
            if *count == 0 {
                self.violated.insert(c);
            }
        }
        // ... and the complementary literal gains it
        for &c in self.formula.occurrences(Literal::new(variable, !was)) {
            let count = &mut self.sat_count[c as usize];
            if *count == 0 {
                self.violated.remove(c);
            }
            *count += 1;
        }
        self.assignment.toggle(variable);
    }

    /// Number of currently satisfied clauses that flipping `variable` would
    /// violate: clauses where its true literal is the sole support
    /// (`sat_count == 1`). Does not mutate the state.
    pub fn break_value(&self, variable: u32) -> u32 {
        self.check_variable(variable);
        let true_lit = Literal::new(variable, self.assignment.value(variable));
        self.formula
            .occurrences(true_lit)
            .iter()
            .filter(|&&c| self.sat_count[c as usize] == 1)
            .count() as u32
    }

    /// Number of currently violated clauses that flipping `variable` would
    /// satisfy: violated clauses containing the literal that becomes true.
    pub fn make_value(&self, variable: u32) -> u32 {
        self.check_variable(variable);
        let false_lit = Literal::new(variable, !self.assignment.value(variable));
        self.formula
            .occurrences(false_lit)
            .iter()
            .filter(|&&c| self.sat_count[c as usize] == 0)
            .count() as u32
    }

    /// Energy change a flip of `variable` would cause, without mutating.
    pub fn delta_energy(&self, variable: u32) -> i64 {
        self.break_value(variable) as i64 - self.make_value(variable) as i64
    }

    fn check_variable(&self, variable: u32) {
        assert!(
            variable >= 1 && variable as usize <= self.formula.num_vars(),
            "variable {variable} out of range"
        );
    }
}

/// Structural equality: same formula, assignment, counts, and violated set
/// (compared as a set; internal ordering is irrelevant).
impl PartialEq for SearchState {
    fn eq(&self, other: &Self) -> bool {
        if self.formula != other.formula
            || self.assignment != other.assignment
            || self.sat_count != other.sat_count
        {
            return false;
        }
        let mut a: Vec<u32> = self.violated.as_slice().to_vec();
        let mut b: Vec<u32> = other.violated.as_slice().to_vec();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }
}

impl Eq for SearchState {}
