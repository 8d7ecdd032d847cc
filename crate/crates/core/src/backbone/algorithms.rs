use std::time::Instant;

use crate::cnf::{CnfFormula, Lit, LiteralSet};
use crate::solver::{SolveOutcome, SolverSession};

use super::chunk::{BetOutcome, ChunkState, ChunkStrategy};
use super::rotatable::rotatable_literals;
use super::{Algorithm, AlgorithmConfig, BackboneError, BackboneReport, Query, RunOptions};

pub fn backbone_enumeration(f: &CnfFormula) -> Result<BackboneReport, BackboneError> {
    super::compute_backbone(f, &AlgorithmConfig::new(Algorithm::Enumeration))
}

pub fn backbone_naive(f: &CnfFormula) -> Result<BackboneReport, BackboneError> {
    super::compute_backbone(f, &AlgorithmConfig::new(Algorithm::Naive))
}

pub fn backbone_iterative(
    f: &CnfFormula,
    uc_injection: bool,
    rotatable_filter: bool,
) -> Result<BackboneReport, BackboneError> {
    let cfg = AlgorithmConfig::new(Algorithm::Iterative)
        .with_uc_injection(uc_injection)
        .with_rotatable_filter(rotatable_filter);
    super::compute_backbone(f, &cfg)
}

pub fn backbone_all_in(
    f: &CnfFormula,
    chunk: ChunkStrategy,
    uc_injection: bool,
    rotatable_filter: bool,
) -> Result<BackboneReport, BackboneError> {
    let cfg = AlgorithmConfig::new(Algorithm::AllIn)
        .with_chunk(chunk)
        .with_uc_injection(uc_injection)
        .with_rotatable_filter(rotatable_filter);
    super::compute_backbone(f, &cfg)
}

pub fn backbone_all_out(
    f: &CnfFormula,
    chunk: ChunkStrategy,
    uc_injection: bool,
    rotatable_filter: bool,
) -> Result<BackboneReport, BackboneError> {
    let cfg = AlgorithmConfig::new(Algorithm::AllOut)
        .with_chunk(chunk)
        .with_uc_injection(uc_injection)
        .with_rotatable_filter(rotatable_filter);
    super::compute_backbone(f, &cfg)
}

pub(super) fn run(f: &CnfFormula, cfg: &AlgorithmConfig, opts: &RunOptions) -> Result<BackboneReport, BackboneError> {
    let start = Instant::now();
    let mut run = Run {
        formula: f,
        session: SolverSession::new(f, opts.backend),
        deadline: opts.timeout.map(|t| start + t),
        queries: opts.record_queries.then(Vec::new),
        backbone: LiteralSet::with_num_vars(f.num_vars()),
        uc_injection: cfg.uc_injection,
        rotatable_filter: cfg.rotatable_filter,
    };
    match cfg.algorithm {
        Algorithm::Enumeration => run.enumeration()?,
        Algorithm::Naive => run.naive()?,
        Algorithm::Iterative => run.iterative()?,
        Algorithm::AllIn => run.all_in(cfg.chunk)?,
        Algorithm::AllOut => run.all_out(cfg.chunk)?,
    }
    Ok(BackboneReport {
        backbone: run.backbone,
        sat_calls: run.session.num_solve_calls(),
        wall_time: start.elapsed(),
        config: *cfg,
        queries: run.queries.unwrap_or_default(),
    })
}

struct Run<'f> {
    formula: &'f CnfFormula,
    session: SolverSession,
    deadline: Option<Instant>,
    queries: Option<Vec<Query>>,
    backbone: LiteralSet,
    uc_injection: bool,
    rotatable_filter: bool,
}

impl Run<'_> {
    fn check_deadline(&self) -> Result<(), BackboneError> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(BackboneError::Timeout {
                partial: self.backbone.clone(),
            }),
            _ => Ok(()),
        }
    }

    fn record(&mut self, q: impl FnOnce() -> Query) {
        if let Some(queries) = &mut self.queries {
            queries.push(q());
        }
    }

    fn solve(&mut self, assumptions: &LiteralSet) -> Result<SolveOutcome, BackboneError> {
        self.check_deadline()?;
        self.record(|| {
            if assumptions.is_empty() {
                Query::Unconstrained
            } else {
                Query::Assume(assumptions.to_vec())
            }
        });
        Ok(self.session.solve(assumptions))
    }

    /// Enforces `∨ lits` for one call through a fresh switchable clause.
    fn solve_with_clause(&mut self, lits: &[Lit]) -> Result<SolveOutcome, BackboneError> {
        self.check_deadline()?;
        self.record(|| Query::Clause(lits.to_vec()));
        let handle = self.session.add_switchable_clause(lits);
        let out = self.session.solve(&LiteralSet::from_lits([handle.enable()]));
        self.session.retire(handle);
        Ok(out)
    }

    fn confirm(&mut self, l: Lit) {
        self.backbone.insert(l);
        if self.uc_injection {
            self.session.add_clause(&[l]);
        }
    }

    /// Candidates from the first model, optionally without its rotatable
    /// literals.
    fn initial_candidates(&mut self) -> Result<LiteralSet, BackboneError> {
        match self.solve(&LiteralSet::new())? {
            SolveOutcome::Sat(model) => self.filtered(model),
            SolveOutcome::Unsat(_) => Err(BackboneError::UnsatisfiableInput),
        }
    }

    fn filtered(&self, mut model: LiteralSet) -> Result<LiteralSet, BackboneError> {
        if self.rotatable_filter {
            let rotatable = rotatable_literals(self.formula, &model)?;
            model.remove_all(&rotatable);
        }
        Ok(model)
    }

    /// `candidates ∩= model`, minus rotatable literals when filtering.
    fn prune(&self, candidates: &mut LiteralSet, model: LiteralSet) -> Result<(), BackboneError> {
        candidates.retain_in(&self.filtered(model)?);
        Ok(())
    }

    fn enumeration(&mut self) -> Result<(), BackboneError> {
        let mut common: Option<LiteralSet> = None;
        while let SolveOutcome::Sat(model) = self.solve(&LiteralSet::new())? {
            let blocking: Vec<Lit> = model.iter().map(|l| !l).collect();
            self.session.add_clause(&blocking);
            match &mut common {
                Some(c) => c.retain_in(&model),
                None => common = Some(model),
            }
        }
        self.backbone = common.ok_or(BackboneError::UnsatisfiableInput)?;
        Ok(())
    }

    /// Exactly one call per literal; a variable with both polarities
    /// refuted means the formula itself is unsatisfiable.
    fn naive(&mut self) -> Result<(), BackboneError> {
        let mut refuted = LiteralSet::with_num_vars(self.formula.num_vars());
        for l in self.formula.literals() {
            if !self.solve(&LiteralSet::from_lits([!l]))?.is_sat() {
                if refuted.contains(!l) {
                    return Err(BackboneError::UnsatisfiableInput);
                }
                refuted.insert(l);
            }
        }
        self.backbone = refuted;
        Ok(())
    }

    fn iterative(&mut self) -> Result<(), BackboneError> {
        let mut candidates = self.initial_candidates()?;
        while let Some(l) = candidates.first() {
            self.test_one(l, &mut candidates)?;
        }
        Ok(())
    }

    /// Tests `l` alone; removes it from `candidates` either way.
    fn test_one(&mut self, l: Lit, candidates: &mut LiteralSet) -> Result<(), BackboneError> {
        match self.solve(&LiteralSet::from_lits([!l]))? {
            SolveOutcome::Unsat(_) => {
                candidates.remove(l);
                self.confirm(l);
            }
            // the model contains ¬l, so l leaves the candidates
            SolveOutcome::Sat(model) => self.prune(candidates, model)?,
        }
        Ok(())
    }

    fn all_in(&mut self, strategy: ChunkStrategy) -> Result<(), BackboneError> {
        let mut candidates = self.initial_candidates()?;
        let mut state = ChunkState::initial(strategy, candidates.len());
        while !candidates.is_empty() {
            let chunk: Vec<Lit> = candidates.iter().take(state.chunk_len(candidates.len())).collect();
            let clause: Vec<Lit> = chunk.iter().map(|&l| !l).collect();
            let outcome = match self.solve_with_clause(&clause)? {
                SolveOutcome::Unsat(_) => {
                    for &l in &chunk {
                        candidates.remove(l);
                        self.confirm(l);
                    }
                    BetOutcome::Win
                }
                // the model falsifies some chunk literal
                SolveOutcome::Sat(model) => {
                    self.prune(&mut candidates, model)?;
                    BetOutcome::Lose
                }
            };
            state.advance(strategy, outcome, candidates.len());
        }
        Ok(())
    }

    fn all_out(&mut self, strategy: ChunkStrategy) -> Result<(), BackboneError> {
        let mut candidates = self.initial_candidates()?;
        let mut state = ChunkState::initial(strategy, candidates.len());
        while !candidates.is_empty() {
            let mut chunk: LiteralSet = candidates.iter().take(state.chunk_len(candidates.len())).collect();
            let mut first_query = true;
            let mut won = false;
            while !chunk.is_empty() {
                let negations = chunk.complement();
                match self.solve(&negations)? {
                    SolveOutcome::Sat(model) => {
                        // every chunk literal is false in this model
                        self.prune(&mut candidates, model)?;
                        won = first_query;
                        break;
                    }
                    SolveOutcome::Unsat(core) => {
                        first_query = false;
                        match core.len() {
                            0 => return Err(BackboneError::UnsatisfiableInput),
                            1 => {
                                let l = !core.first().expect("non-empty core");
                                chunk.remove(l);
                                candidates.remove(l);
                                self.confirm(l);
                            }
                            n if n == negations.len() => {
                                while let Some(l) = chunk.first() {
                                    self.test_one(l, &mut candidates)?;
                                    chunk.retain_in(&candidates);
                                }
                            }
                            // retry with the chunk literals the core blames
                            _ => chunk.retain_in(&core.complement()),
                        }
                    }
                }
            }
            let outcome = if won { BetOutcome::Win } else { BetOutcome::Lose };
            state.advance(strategy, outcome, candidates.len());
        }
        Ok(())
    }
}
