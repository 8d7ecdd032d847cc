//! Backbone extraction for CNF formulas derived from variability models.
//!
//! The crate is organised bottom-up:
//!
//! * [`cnf`]: literals, clauses, formulas, literal sets, DIMACS I/O and
//!   structural statistics.
//! * [`solver`]: an incremental SAT session with assumptions, assumption
//!   cores, switchable clauses and blocking-clause enumeration.
//! * [`backbone`]: the backbone algorithms (enumeration, naive and iterative
//!   testing, chunked all-in / all-out bets), rotatable-literal filtering,
//!   chunk-size strategies and size-based algorithm selection.
//! * [`preprocess`]: backbone-based CNF simplification.
//! * [`propagate`]: decision propagation and core/dead/free classification.
//! * [`bench`]: run matrix, CSV output and the statistics used to compare
//!   configurations.

pub mod backbone;
pub mod bench;
pub mod cnf;
pub mod preprocess;
pub mod propagate;
pub mod solver;

pub use backbone::{
    auto_config, auto_config_for, compute_backbone, compute_backbone_with, Algorithm, AlgorithmConfig, BackboneError,
    BackboneReport, ChunkStrategy, RunOptions,
};
pub use cnf::{parse_dimacs, parse_dimacs_str, write_dimacs, Clause, CnfFormula, Lit, LiteralSet, Var};
pub use solver::{SolveOutcome, SolverSession};
