//! DIMACS CNF reading and writing.
//!
//! Input grammar: optional `c` comment lines, exactly one `p cnf <vars> <clauses>`
//! header, then whitespace-separated integers where each clause is terminated
//! by `0`. Clauses may span lines. Duplicate literals inside a clause are
//! collapsed and tautological clauses are dropped; both are counted in
//! [`Normalization`].

use std::fmt::Write as _;
use std::io::{self, BufRead, BufReader, Read, Write};

use super::formula::{normalize, CnfFormula, Normalized};
use super::lit::Lit;
use super::CnfError;

/// Adjustments made while reading a DIMACS file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Normalization {
    /// Literal occurrences dropped because they repeated within a clause.
    pub duplicate_literals: usize,
    /// Clauses dropped because they contained some `l` and `-l`.
    pub tautologies: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedDimacs {
    pub formula: CnfFormula,
    pub normalization: Normalization,
    /// Clause count announced by the header.
    pub declared_clauses: usize,
}

pub fn parse_dimacs_str(text: &str) -> Result<ParsedDimacs, CnfError> {
    parse_dimacs(text.as_bytes())
}

pub fn parse_dimacs<R: Read>(reader: R) -> Result<ParsedDimacs, CnfError> {
    let reader = BufReader::new(reader);
    let mut header: Option<(usize, usize)> = None;
    let mut formula = CnfFormula::new(0);
    let mut norm = Normalization::default();
    let mut pending: Vec<Lit> = Vec::new();
    let mut seen_clauses = 0usize;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(CnfError::DuplicateHeader { line: line_no });
            }
            let (vars, clauses) = parse_header(trimmed).ok_or(CnfError::MalformedHeader { line: line_no })?;
            header = Some((vars, clauses));
            formula = CnfFormula::new(vars);
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(CnfError::MissingHeader);
        };
        for token in trimmed.split_whitespace() {
            let value: i32 = token.parse().map_err(|_| CnfError::InvalidToken {
                line: line_no,
                token: token.to_string(),
            })?;
            if value == 0 {
                if pending.is_empty() {
                    return Err(CnfError::EmptyClause { line: Some(line_no) });
                }
                seen_clauses += 1;
                match normalize(&pending) {
                    Normalized::Clause(clause, removed) => {
                        norm.duplicate_literals += removed;
                        formula.add_clause(clause)?;
                    }
                    Normalized::Tautology => norm.tautologies += 1,
                }
                pending.clear();
                continue;
            }
            let lit = Lit::new(value).ok_or_else(|| CnfError::InvalidToken {
                line: line_no,
                token: token.to_string(),
            })?;
            if lit.var().index() as usize > num_vars {
                return Err(CnfError::VariableOutOfRange {
                    var: lit.var().index(),
                    num_vars,
                    line: Some(line_no),
                });
            }
            pending.push(lit);
        }
    }

    let Some((_, declared)) = header else {
        return Err(CnfError::MissingHeader);
    };
    if !pending.is_empty() {
        return Err(CnfError::UnterminatedClause);
    }
    if seen_clauses != declared {
        return Err(CnfError::ClauseCountMismatch {
            declared,
            found: seen_clauses,
        });
    }
    Ok(ParsedDimacs {
        formula,
        normalization: norm,
        declared_clauses: declared,
    })
}

fn parse_header(line: &str) -> Option<(usize, usize)> {
    let mut parts = line.split_whitespace();
    if parts.next()? != "p" || parts.next()? != "cnf" {
        return None;
    }
    let vars = parts.next()?.parse().ok()?;
    let clauses = parts.next()?.parse().ok()?;
    if parts.next().is_some() || vars > i32::MAX as usize {
        return None;
    }
    Some((vars, clauses))
}

/// Serializes `f` as DIMACS: header, then one 0-terminated clause per line.
pub fn write_dimacs(f: &CnfFormula) -> String {
    let mut out = String::new();
    writeln!(out, "p cnf {} {}", f.num_vars(), f.num_clauses()).unwrap();
    for c in f.clauses() {
        for l in c.lits() {
            write!(out, "{} ", l.value()).unwrap();
        }
        out.push_str("0\n");
    }
    out
}

pub fn write_dimacs_to<W: Write>(f: &CnfFormula, mut w: W) -> io::Result<()> {
    w.write_all(write_dimacs(f).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    const RUNNING_EXAMPLE: &str = "c a..g = 1..7\np cnf 7 6\n-1 0\n-1 2 0\n1 3 0\n-3 4 0\n-3 5 6 0\n6 -7 0\n";

    #[test]
    fn empty_formula() {
        let p = parse_dimacs_str("p cnf 0 0").unwrap();
        assert_eq!(p.formula.num_vars(), 0);
        assert_eq!(p.formula.num_clauses(), 0);
        assert_eq!(write_dimacs(&p.formula), "p cnf 0 0\n");
    }

    #[test]
    fn running_example_shape() {
        let p = parse_dimacs_str(RUNNING_EXAMPLE).unwrap();
        assert_eq!(p.formula.num_vars(), 7);
        assert_eq!(p.formula.num_clauses(), 6);
        let values: Vec<Vec<i32>> = p
            .formula
            .clauses()
            .iter()
            .map(|c| c.lits().iter().map(|l| l.value()).collect())
            .collect();
        assert_eq!(
            values,
            vec![
                vec![-1],
                vec![-1, 2],
                vec![1, 3],
                vec![-3, 4],
                vec![-3, 5, 6],
                vec![6, -7]
            ]
        );
        let text = write_dimacs(&p.formula);
        assert!(text.starts_with("p cnf 7 6\n"));
        assert_eq!(text.lines().count(), 7);
    }

    #[test]
    fn clauses_may_span_lines() {
        let p = parse_dimacs_str("p cnf 3 2\n1 2\n3 0 -1\n0\n").unwrap();
        assert_eq!(p.formula.num_clauses(), 2);
        assert_eq!(p.formula.clauses()[0].len(), 3);
    }

    #[test]
    fn normalization_is_counted() {
        let p = parse_dimacs_str("p cnf 3 3\n1 1 2 0\n1 -1 0\n3 0\n").unwrap();
        assert_eq!(p.normalization.duplicate_literals, 1);
        assert_eq!(p.normalization.tautologies, 1);
        assert_eq!(p.formula.num_clauses(), 2);
    }

    #[test]
    fn error_cases() {
        assert!(matches!(parse_dimacs_str("1 2 0\n"), Err(CnfError::MissingHeader)));
        assert!(matches!(parse_dimacs_str(""), Err(CnfError::MissingHeader)));
        assert!(matches!(
            parse_dimacs_str("p cnf x 1\n"),
            Err(CnfError::MalformedHeader { line: 1 })
        ));
        assert!(matches!(
            parse_dimacs_str("p dnf 1 1\n1 0\n"),
            Err(CnfError::MalformedHeader { .. })
        ));
        assert!(matches!(
            parse_dimacs_str("p cnf 2 1\n1 3 0\n"),
            Err(CnfError::VariableOutOfRange {
                var: 3,
                num_vars: 2,
                line: Some(2)
            })
        ));
        assert!(matches!(
            parse_dimacs_str("p cnf 2 1\n1 2\n"),
            Err(CnfError::UnterminatedClause)
        ));
        assert!(matches!(
            parse_dimacs_str("p cnf 2 1\n0\n"),
            Err(CnfError::EmptyClause { line: Some(2) })
        ));
        assert!(matches!(
            parse_dimacs_str("p cnf 2 1\n1 a 0\n"),
            Err(CnfError::InvalidToken { .. })
        ));
        assert!(matches!(
            parse_dimacs_str("p cnf 2 2\n1 0\n"),
            Err(CnfError::ClauseCountMismatch { declared: 2, found: 1 })
        ));
        assert!(matches!(
            parse_dimacs_str("p cnf 1 0\np cnf 1 0\n"),
            Err(CnfError::DuplicateHeader { line: 2 })
        ));
    }
}
