//! DIMACS CNF reading and writing.
//!
//! Accepts comment lines anywhere, clauses spanning lines, CRLF endings, and
//! the legacy `%` end-of-file trailer (everything after it is ignored).

use std::io::{self, BufRead, Write};

use super::{CnfError, Formula, Literal, ParseErrorKind};

fn err(line: usize, kind: ParseErrorKind) -> CnfError {
    CnfError::Parse { line, kind }
}

/// Parses a DIMACS CNF stream into a [`Formula`].
pub fn parse_dimacs(input: impl BufRead) -> Result<Formula, CnfError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut line_no = 0usize;
    let mut truncated = false;

    'lines: for line in input.lines() {
        let line = line?;
        line_no += 1;
        let line = line.trim_end_matches('\r');
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(err(line_no, ParseErrorKind::DuplicateHeader));
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(err(
                    line_no,
                    ParseErrorKind::MalformedHeader(format!(
                        "expected `p cnf <vars> <clauses>`, got `{trimmed}`"
                    )),
                ));
            }
            let num_vars: usize = fields[2].parse().map_err(|_| {
                err(
                    line_no,
                    ParseErrorKind::MalformedHeader(format!("bad variable count `{}`", fields[2])),
                )
            })?;
            let num_clauses: usize = fields[3].parse().map_err(|_| {
                err(
                    line_no,
                    ParseErrorKind::MalformedHeader(format!("bad clause count `{}`", fields[3])),
                )
            })?;
            header = Some((num_vars, num_clauses));
            continue;
        }

        let (num_vars, declared) =
            header.ok_or_else(|| err(line_no, ParseErrorKind::MissingHeader))?;
        for token in trimmed.split_whitespace() {
            if token == "%" {
                truncated = true;
                break 'lines;
            }
            let code: i32 = token
                .parse()
                .map_err(|_| err(line_no, ParseErrorKind::InvalidToken(token.to_string())))?;
            if code == 0 {
                if current.is_empty() {
                    return Err(err(line_no, ParseErrorKind::EmptyClause));
                }
                if clauses.len() == declared {
                    return Err(err(line_no, ParseErrorKind::TooManyClauses { declared }));
                }
                clauses.push(std::mem::take(&mut current));
            } else {
                let lit = Literal::from_dimacs(code)
                    .ok_or_else(|| err(line_no, ParseErrorKind::InvalidToken(token.to_string())))?;
                if lit.variable() as usize > num_vars {
                    return Err(err(
                        line_no,
                        ParseErrorKind::VariableOutOfRange {
                            variable: lit.variable(),
                            num_vars,
                        },
                    ));
                }
                if current.iter().any(|l| l.variable() == lit.variable()) {
                    return Err(err(
                        line_no,
                        ParseErrorKind::DuplicateVariable(lit.variable()),
                    ));
                }
                current.push(lit);
            }
        }
    }

    let (num_vars, declared) =
        header.ok_or_else(|| err(line_no.max(1), ParseErrorKind::MissingHeader))?;
    if !current.is_empty() && !truncated {
        return Err(err(line_no, ParseErrorKind::UnterminatedClause));
    }
    if clauses.len() != declared {
        return Err(err(
            line_no.max(1),
            ParseErrorKind::ClauseCountMismatch {
                declared,
                found: clauses.len(),
            },
        ));
    }
    Formula::new(num_vars, clauses)
}

/// [`parse_dimacs`] over an in-memory string.
pub fn parse_dimacs_str(text: &str) -> Result<Formula, CnfError> {
    parse_dimacs(text.as_bytes())
}

/// Writes a formula in DIMACS form, one clause per line.
pub fn write_dimacs(formula: &Formula, mut out: impl Write) -> io::Result<()> {
    writeln!(
        out,
        "p cnf {} {}",
        formula.num_vars(),
        formula.num_clauses()
    )?;
    for clause in formula.clauses() {
        for lit in clause {
            write!(out, "{} ", lit.to_dimacs())?;
        }
        writeln!(out, "0")?;
    }
    Ok(())
}

pub fn write_dimacs_string(formula: &Formula) -> String {
    let mut buf = Vec::new();
    write_dimacs(formula, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("DIMACS output is ASCII")
}
