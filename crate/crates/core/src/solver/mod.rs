//! Incremental SAT sessions.
//!
//! A [`SolverSession`] owns a backend implementing [`SatBackend`], the
//! add / assume / solve / value / failed-assumption calling convention
//! shared by incremental solvers. The session turns backend answers into
//! [`SolveOutcome`]s over the formula's original variables, allocates
//! activation variables for switchable clauses, and counts solve calls.

mod cdcl;
mod session;

use std::fmt;
use std::str::FromStr;

use crate::cnf::{Lit, Var};

pub use cdcl::Cdcl;
pub use session::{new_session, ActivationHandle, Enumeration, SolveOutcome, SolverSession};

/// Minimal incremental-solver interface.
///
/// Clauses are permanent. Assumptions passed to [`SatBackend::solve`] hold
/// for that call only. After a satisfiable call `model_value` reports the
/// model; after an unsatisfiable one `failed_assumptions` reports a subset of
/// the assumptions that is itself unsatisfiable with the clauses.
pub trait SatBackend: Send {
    fn num_vars(&self) -> usize;
    fn reserve_vars(&mut self, n: usize);
    fn add_clause(&mut self, lits: &[Lit]);
    fn solve(&mut self, assumptions: &[Lit]) -> bool;
    fn model_value(&self, v: Var) -> bool;
    fn failed_assumptions(&self) -> &[Lit];
}

/// Names a solver backend. Only the built-in solver ships with this crate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BackendId {
    #[default]
    Builtin,
}

impl BackendId {
    /// Environment variable consulted by front ends for the default backend.
    pub const ENV_VAR: &'static str = "BACKBONE_SOLVER";

    pub fn create(self) -> Box<dyn SatBackend> {
        match self {
            BackendId::Builtin => Box::new(Cdcl::new()),
        }
    }
}

impl FromStr for BackendId {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "builtin" | "cdcl" => Ok(BackendId::Builtin),
            other => Err(SolverError::UnknownBackend(other.to_string())),
        }
    }
}

impl fmt::Display for BackendId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BackendId::Builtin => f.write_str("builtin"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("unknown solver backend `{0}`")]
    UnknownBackend(String),
}
