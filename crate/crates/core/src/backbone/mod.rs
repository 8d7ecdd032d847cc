//! Backbone algorithms and their configuration.
//!
//! Every algorithm takes a satisfiable formula and returns the set of
//! literals true in all of its models. They differ in how they query the
//! incremental solver:
//!
//! * [`Algorithm::Enumeration`] intersects all models found with blocking
//!   clauses.
//! * [`Algorithm::Naive`] tests each of the `2n` literals once.
//! * [`Algorithm::Iterative`] keeps a candidate set seeded by the first model
//!   and tests one candidate per call, pruning with every new model.
//! * [`Algorithm::AllIn`] bets that a whole chunk of candidates is in the
//!   backbone, using a switchable clause over the chunk.
//! * [`Algorithm::AllOut`] bets that no literal of a chunk is in the
//!   backbone, assuming all their negations at once and reading the core.
//!
//! Candidates are always visited in ascending variable order, so call counts
//! are reproducible.

mod algorithms;
mod chunk;
mod rotatable;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use crate::cnf::{formula_stats, CnfFormula, FormulaStats, Lit, LiteralSet};
use crate::solver::{BackendId, SolverError};

pub use algorithms::{backbone_all_in, backbone_all_out, backbone_enumeration, backbone_iterative, backbone_naive};
pub use chunk::{next_chunk_size, BetOutcome, ChunkState, ChunkStrategy, DEFAULT_GROWTH_FACTOR};
pub use rotatable::rotatable_literals;

/// Formulas with at most this many variables get [`Algorithm::Iterative`]
/// from [`auto_config`]; larger ones get chunked all-out bets.
pub const AUTO_ITERATIVE_MAX_VARS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Enumeration,
    Naive,
    Iterative,
    AllIn,
    AllOut,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Enumeration,
        Algorithm::Naive,
        Algorithm::Iterative,
        Algorithm::AllIn,
        Algorithm::AllOut,
    ];

    pub fn is_chunked(self) -> bool {
        matches!(self, Algorithm::AllIn | Algorithm::AllOut)
    }

    fn id(self) -> &'static str {
        match self {
            Algorithm::Enumeration => "enum",
            Algorithm::Naive => "naive",
            Algorithm::Iterative => "iter",
            Algorithm::AllIn => "all-in",
            Algorithm::AllOut => "all-out",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Algorithm {
    type Err = BackboneError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.id() == s)
            .ok_or_else(|| BackboneError::InvalidConfig(format!("unknown algorithm `{s}`")))
    }
}

/// One point in the configuration space of the backbone algorithms.
///
/// `chunk` is read only by the chunked algorithms. `uc_injection` and
/// `rotatable_filter` are read only by the candidate-based ones (iterative,
/// all-in, all-out).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AlgorithmConfig {
    pub algorithm: Algorithm,
    pub chunk: ChunkStrategy,
    pub uc_injection: bool,
    pub rotatable_filter: bool,
}

impl AlgorithmConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        AlgorithmConfig {
            algorithm,
            chunk: ChunkStrategy::default(),
            uc_injection: false,
            rotatable_filter: false,
        }
    }

    pub fn with_chunk(mut self, chunk: ChunkStrategy) -> Self {
        self.chunk = chunk;
        self
    }

    pub fn with_uc_injection(mut self, on: bool) -> Self {
        self.uc_injection = on;
        self
    }

    pub fn with_rotatable_filter(mut self, on: bool) -> Self {
        self.rotatable_filter = on;
        self
    }

    pub fn validate(&self) -> Result<(), BackboneError> {
        self.chunk.validate().map_err(BackboneError::InvalidConfig)
    }
}

/// Identifier syntax: `enum`, `naive`, `iter`, `all-in:<chunk>` or
/// `all-out:<chunk>`, optionally followed by `+uc` and/or `+rot`.
impl fmt::Display for AlgorithmConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.algorithm)?;
        if self.algorithm.is_chunked() {
            write!(f, ":{}", self.chunk)?;
        }
        if self.uc_injection {
            f.write_str("+uc")?;
        }
        if self.rotatable_filter {
            f.write_str("+rot")?;
        }
        Ok(())
    }
}

impl FromStr for AlgorithmConfig {
    type Err = BackboneError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.trim().split('+');
        let head = parts.next().unwrap_or_default();
        let (alg, chunk) = match head.split_once(':') {
            Some((alg, chunk)) => (alg, Some(chunk)),
            None => (head, None),
        };
        let algorithm: Algorithm = alg.parse()?;
        let mut cfg = AlgorithmConfig::new(algorithm);
        if let Some(chunk) = chunk {
            if !algorithm.is_chunked() {
                return Err(BackboneError::InvalidConfig(format!(
                    "`{algorithm}` takes no chunk strategy"
                )));
            }
            cfg.chunk = chunk.parse().map_err(BackboneError::InvalidConfig)?;
        }
        for flag in parts {
            match flag {
                "uc" => cfg.uc_injection = true,
                "rot" => cfg.rotatable_filter = true,
                other => return Err(BackboneError::InvalidConfig(format!("unknown flag `+{other}`"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// One satisfiability query as issued by an algorithm, over original
/// variables. Activation plumbing is hidden: enforcing a switchable clause
/// is recorded as [`Query::Clause`] with the clause's literals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    Unconstrained,
    Assume(Vec<Lit>),
    Clause(Vec<Lit>),
}

impl Query {
    /// A one-literal clause constrains exactly like assuming its literal.
    pub fn normalized(&self) -> Query {
        match self {
            Query::Clause(lits) if lits.len() == 1 => Query::Assume(lits.clone()),
            q => q.clone(),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Checked before every solve call.
    pub timeout: Option<Duration>,
    pub backend: BackendId,
    /// Fill [`BackboneReport::queries`].
    pub record_queries: bool,
}

#[derive(Clone, Debug)]
pub struct BackboneReport {
    pub backbone: LiteralSet,
    pub sat_calls: usize,
    pub wall_time: Duration,
    pub config: AlgorithmConfig,
    /// Empty unless [`RunOptions::record_queries`] was set.
    pub queries: Vec<Query>,
}

#[derive(Debug, thiserror::Error)]
pub enum BackboneError {
    #[error("formula is unsatisfiable")]
    UnsatisfiableInput,
    /// `partial` holds literals confirmed before the deadline; it is a subset
    /// of the backbone, not the backbone.
    #[error("time budget exhausted after confirming {} backbone literals", .partial.len())]
    Timeout { partial: LiteralSet },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("contract violation: {0}")]
    ContractViolation(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

pub fn compute_backbone(f: &CnfFormula, cfg: &AlgorithmConfig) -> Result<BackboneReport, BackboneError> {
    compute_backbone_with(f, cfg, &RunOptions::default())
}

pub fn compute_backbone_with(
    f: &CnfFormula,
    cfg: &AlgorithmConfig,
    opts: &RunOptions,
) -> Result<BackboneReport, BackboneError> {
    cfg.validate()?;
    algorithms::run(f, cfg, opts)
}

/// Size-based selection: iterative testing up to
/// [`AUTO_ITERATIVE_MAX_VARS`] variables, adaptive all-out bets above.
pub fn auto_config(stats: &FormulaStats) -> AlgorithmConfig {
    if stats.num_vars <= AUTO_ITERATIVE_MAX_VARS {
        AlgorithmConfig::new(Algorithm::Iterative)
    } else {
        AlgorithmConfig::new(Algorithm::AllOut).with_chunk(ChunkStrategy::AdaptiveGeometric(DEFAULT_GROWTH_FACTOR))
    }
}

/// [`auto_config`] applied to `f`.
pub fn auto_config_for(f: &CnfFormula) -> AlgorithmConfig {
    auto_config(&formula_stats(f))
}
