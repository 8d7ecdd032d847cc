//! CNF data model, DIMACS I/O and structural statistics.

mod dimacs;
mod formula;
mod lit;
mod set;
mod stats;

pub use dimacs::{parse_dimacs, parse_dimacs_str, write_dimacs, write_dimacs_to, Normalization, ParsedDimacs};
pub use formula::{Clause, CnfFormula};
pub use lit::{Lit, Var};
pub use set::{ContradictoryLiteral, LiteralSet};
pub use stats::{formula_stats, FormulaStats};

#[derive(Debug, thiserror::Error)]
pub enum CnfError {
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("line {line}: malformed `p cnf <vars> <clauses>` header")]
    MalformedHeader { line: usize },
    #[error("line {line}: second `p` header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: invalid token `{token}`")]
    InvalidToken { line: usize, token: String },
    #[error("variable {var} exceeds declared count {num_vars}{}", fmt_line(*.line))]
    VariableOutOfRange {
        var: u32,
        num_vars: usize,
        line: Option<usize>,
    },
    #[error("last clause is not terminated by 0")]
    UnterminatedClause,
    #[error("empty clause{}: formula is trivially unsatisfiable", fmt_line(*.line))]
    EmptyClause { line: Option<usize> },
    #[error("header declares {declared} clauses but {found} were read")]
    ClauseCountMismatch { declared: usize, found: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn fmt_line(line: Option<usize>) -> String {
    line.map(|l| format!(" (line {l})")).unwrap_or_default()
}
