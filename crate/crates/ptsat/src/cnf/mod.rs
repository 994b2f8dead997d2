//! CNF formulas, assignments, DIMACS I/O, and the incremental search state.
//!
//! Variables are 1-based externally (the DIMACS convention) and 0-based in
//! internal arrays; the mapping is fixed: variable `v` occupies index
//! `v - 1`, and the occurrence table slot of a literal is
//! `2 * (v - 1) + polarity`.

mod dimacs;
mod state;

pub use dimacs::{parse_dimacs, parse_dimacs_str, write_dimacs, write_dimacs_string};
pub use state::SearchState;

use std::fmt;

use thiserror::Error;

use crate::rng::Rng;

#[derive(Debug, Error)]
pub enum CnfError {
    #[error("formula has no clauses")]
    NoClauses,
    #[error("clause {clause}: empty clause")]
    EmptyClause { clause: usize },
    #[error("clause {clause}: variable {variable} exceeds variable count {num_vars}")]
    VariableOutOfRange {
        clause: usize,
        variable: u32,
        num_vars: usize,
    },
    #[error("clause {clause}: variable {variable} occurs more than once")]
    DuplicateVariable { clause: usize, variable: u32 },
    #[error("assignment has {len} entries, formula has {num_vars} variables")]
    AssignmentLength { len: usize, num_vars: usize },
    #[error("line {line}: {kind}")]
    Parse { line: usize, kind: ParseErrorKind },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    MissingHeader,
    DuplicateHeader,
    MalformedHeader(String),
    InvalidToken(String),
    VariableOutOfRange { variable: u32, num_vars: usize },
    EmptyClause,
    DuplicateVariable(u32),
    TooManyClauses { declared: usize },
    UnterminatedClause,
    ClauseCountMismatch { declared: usize, found: usize },
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::MissingHeader => {
                write!(
                    f,
                    "expected `p cnf <vars> <clauses>` header before clause data"
                )
            }
            ParseErrorKind::DuplicateHeader => write!(f, "duplicate `p cnf` header"),
            ParseErrorKind::MalformedHeader(detail) => write!(f, "malformed header: {detail}"),
            ParseErrorKind::InvalidToken(token) => write!(f, "invalid token `{token}`"),
            ParseErrorKind::VariableOutOfRange { variable, num_vars } => {
                write!(f, "variable {variable} exceeds declared count {num_vars}")
            }
            ParseErrorKind::EmptyClause => write!(f, "empty clause"),
            ParseErrorKind::DuplicateVariable(v) => {
                write!(f, "variable {v} occurs more than once in one clause")
            }
            ParseErrorKind::TooManyClauses { declared } => {
                write!(f, "more clauses than the declared count {declared}")
            }
            ParseErrorKind::UnterminatedClause => write!(f, "clause not terminated by 0"),
            ParseErrorKind::ClauseCountMismatch { declared, found } => {
                write!(f, "declared {declared} clauses, found {found}")
            }
        }
    }
}

/// A signed occurrence of a variable. Stored in DIMACS form: the magnitude
/// is the 1-based variable, the sign is the polarity.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal(i32);

impl Literal {
    /// # Panics
    /// Panics if `variable` is zero or exceeds `i32::MAX`.
    pub fn new(variable: u32, polarity: bool) -> Self {
        assert!(
            variable >= 1 && variable <= i32::MAX as u32,
            "literal variable out of range: {variable}"
        );
        Literal(if polarity {
            variable as i32
        } else {
            -(variable as i32)
        })
    }

    /// Returns `None` for the codes 0 and `i32::MIN`, which have no DIMACS meaning.
    pub fn from_dimacs(code: i32) -> Option<Self> {
        if code == 0 || code == i32::MIN {
            None
        } else {
            Some(Literal(code))
        }
    }

    pub fn to_dimacs(self) -> i32 {
        self.0
    }

    /// 1-based variable.
    pub fn variable(self) -> u32 {
        self.0.unsigned_abs()
    }

    /// 0-based variable index.
    pub fn index(self) -> usize {
        self.0.unsigned_abs() as usize - 1
    }

    /// True for a positive occurrence.
    pub fn polarity(self) -> bool {
        self.0 > 0
    }

    pub fn negated(self) -> Self {
        Literal(-self.0)
    }

    /// Occurrence-table slot: `2 * index + polarity`.
    pub(crate) fn slot(self) -> usize {
        2 * self.index() + usize::from(self.polarity())
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A total truth assignment, one bit per variable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Assignment {
    bits: Vec<bool>,
}

impl Assignment {
    pub fn new_false(num_vars: usize) -> Self {
        Assignment {
            bits: vec![false; num_vars],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Assignment { bits }
    }

    /// Each variable set independently and uniformly at random.
    pub fn random(num_vars: usize, rng: &mut Rng) -> Self {
        Assignment {
            bits: (0..num_vars).map(|_| rng.next_bool()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Value of a 1-based variable.
    pub fn value(&self, variable: u32) -> bool {
        self.bits[variable as usize - 1]
    }

    pub fn set(&mut self, variable: u32, value: bool) {
        self.bits[variable as usize - 1] = value;
    }

    pub fn toggle(&mut self, variable: u32) {
        let i = variable as usize - 1;
        self.bits[i] = !self.bits[i];
    }

    pub fn satisfies(&self, literal: Literal) -> bool {
        self.value(literal.variable()) == literal.polarity()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// `"0101..."`, one character per variable in index order.
    pub fn to_bit_string(&self) -> String {
        self.bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }

    /// Inverse of [`Assignment::to_bit_string`]. Returns `None` on any
    /// character other than `0` or `1`.
    pub fn from_bit_string(s: &str) -> Option<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return None,
            }
        }
        Some(Assignment { bits })
    }
}

/// An immutable CNF formula with a literal-occurrence index.
///
/// Shareable across threads after construction; solvers hold it behind an
/// `Arc` and keep all mutable search data in [`SearchState`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    num_vars: usize,
    clauses: Vec<Vec<Literal>>,
    /// Clause ids per literal slot (see [`Literal::slot`]).
    occurrence: Vec<Vec<u32>>,
}

impl Formula {
    /// Validates and indexes a clause list. Clauses must be nonempty, refer
    /// only to variables `1..=num_vars`, and never mention a variable twice
    /// (duplicate or complementary occurrences are rejected, not simplified).
    pub fn new(num_vars: usize, clauses: Vec<Vec<Literal>>) -> Result<Self, CnfError> {
        if clauses.is_empty() {
            return Err(CnfError::NoClauses);
        }
        if clauses.len() > u32::MAX as usize {
            return Err(CnfError::NoClauses);
        }
        let mut seen = vec![0u32; num_vars];
        for (id, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(CnfError::EmptyClause { clause: id });
            }
            for lit in clause {
                let v = lit.variable();
                if v as usize > num_vars {
                    return Err(CnfError::VariableOutOfRange {
                        clause: id,
                        variable: v,
                        num_vars,
                    });
                }
                let mark = &mut seen[v as usize - 1];
                if *mark == id as u32 + 1 {
                    return Err(CnfError::DuplicateVariable {
                        clause: id,
                        variable: v,
                    });
                }
                *mark = id as u32 + 1;
            }
        }
        let mut occurrence = vec![Vec::new(); 2 * num_vars];
        for (id, clause) in clauses.iter().enumerate() {
            for lit in clause {
                occurrence[lit.slot()].push(id as u32);
            }
        }
        Ok(Formula {
            num_vars,
            clauses,
            occurrence,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clause(&self, id: u32) -> &[Literal] {
        &self.clauses[id as usize]
    }

    pub fn clauses(&self) -> impl Iterator<Item = &[Literal]> {
        self.clauses.iter().map(Vec::as_slice)
    }

    /// Ids of the clauses containing `literal` with that exact polarity.
    pub fn occurrences(&self, literal: Literal) -> &[u32] {
        &self.occurrence[literal.slot()]
    }

    /// Number of clauses an assignment leaves violated, by full evaluation.
    pub fn violated_count(&self, assignment: &Assignment) -> usize {
        self.clauses
            .iter()
            .filter(|clause| !clause.iter().any(|&l| assignment.satisfies(l)))
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The running four-variable example:
    /// (x1 v -x2 v x4) (x2 v -x3) (x3 v x4) (-x1 v -x3)
    pub(crate) fn example_formula() -> Formula {
        parse_dimacs_str("p cnf 4 4\n1 -2 4 0\n2 -3 0\n3 4 0\n-1 -3 0\n").unwrap()
    }

    #[test]
    fn literal_roundtrip() {
        let l = Literal::new(3, false);
        assert_eq!(l.to_dimacs(), -3);
        assert_eq!(l.variable(), 3);
        assert_eq!(l.index(), 2);
        assert!(!l.polarity());
        assert_eq!(l.negated(), Literal::new(3, true));
        assert_eq!(Literal::from_dimacs(-3), Some(l));
        assert_eq!(Literal::from_dimacs(0), None);
        assert_eq!(Literal::from_dimacs(i32::MIN), None);
    }

    #[test]
    fn occurrence_index_matches_rebuild() {
        let f = example_formula();
        let mut rebuilt = vec![Vec::new(); 2 * f.num_vars()];
        for (id, clause) in f.clauses().enumerate() {
            for lit in clause {
                rebuilt[lit.slot()].push(id as u32);
            }
        }
        for v in 1..=4u32 {
            for polarity in [false, true] {
                let lit = Literal::new(v, polarity);
                assert_eq!(f.occurrences(lit), &rebuilt[lit.slot()][..]);
            }
        }
    }

    #[test]
    fn rejects_duplicate_and_complementary_variables() {
        let dup = vec![vec![Literal::new(1, true), Literal::new(1, true)]];
        assert!(matches!(
            Formula::new(2, dup),
            Err(CnfError::DuplicateVariable {
                clause: 0,
                variable: 1
            })
        ));
        let compl = vec![vec![Literal::new(2, true), Literal::new(2, false)]];
        assert!(matches!(
            Formula::new(2, compl),
            Err(CnfError::DuplicateVariable {
                clause: 0,
                variable: 2
            })
        ));
    }

    #[test]
    fn rejects_empty_inputs() {
        assert!(matches!(Formula::new(3, vec![]), Err(CnfError::NoClauses)));
        assert!(matches!(
            Formula::new(3, vec![vec![]]),
            Err(CnfError::EmptyClause { clause: 0 })
        ));
    }

    #[test]
    fn rejects_out_of_range_variable() {
        let clauses = vec![vec![Literal::new(1, true)], vec![Literal::new(5, false)]];
        assert!(matches!(
            Formula::new(4, clauses),
            Err(CnfError::VariableOutOfRange {
                clause: 1,
                variable: 5,
                num_vars: 4
            })
        ));
    }

    #[test]
    fn violated_count_on_example() {
        let f = example_formula();
        assert_eq!(f.violated_count(&Assignment::new_false(4)), 1);
        let solution = Assignment::from_bits(vec![false, true, false, true]);
        assert_eq!(f.violated_count(&solution), 0);
    }

    #[test]
    fn bit_string_roundtrip() {
        let a = Assignment::from_bits(vec![true, false, true]);
        assert_eq!(a.to_bit_string(), "101");
        assert_eq!(Assignment::from_bit_string("101"), Some(a));
        assert_eq!(Assignment::from_bit_string("10x"), None);
    }
}
