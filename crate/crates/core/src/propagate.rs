//! Decision propagation and variable classification.
//!
//! The consequences of a set of user decisions are the backbone of the
//! formula conjoined with the decisions as unit clauses. Decisions are
//! reported separately from what they imply.

use std::sync::Arc;

use crate::backbone::{auto_config_for, compute_backbone, BackboneError};
use crate::cnf::{CnfFormula, Lit, LiteralSet, Var};
use crate::solver::new_session;

#[derive(Debug, thiserror::Error)]
pub enum PropagateError {
    #[error("decisions conflict with the formula or with each other")]
    ConflictingDecisions,
    #[error("formula is unsatisfiable")]
    UnsatisfiableInput,
    #[error("variable {0} does not occur in the formula")]
    UnknownVariable(Var),
    #[error("variable {0} is already decided")]
    AlreadyDecided(Var),
    #[error("variable {0} is not a decision")]
    NotADecision(Var),
    #[error(transparent)]
    Backbone(BackboneError),
}

/// Partition of the formula's variables after propagating decisions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropagationResult {
    pub decided: LiteralSet,
    pub implied_true: Vec<Var>,
    pub implied_false: Vec<Var>,
    pub free: Vec<Var>,
}

/// Core (always true), dead (always false) and free variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub core: Vec<Var>,
    pub dead: Vec<Var>,
    pub free: Vec<Var>,
}

/// Backbone of `f ∧ decisions`, with the decisions split out.
pub fn propagate(f: &CnfFormula, decisions: &[Lit]) -> Result<PropagationResult, PropagateError> {
    let mut decided = LiteralSet::with_num_vars(f.num_vars());
    for &d in decisions {
        if d.var().index() as usize > f.num_vars() {
            return Err(PropagateError::UnknownVariable(d.var()));
        }
        decided
            .try_insert(d)
            .map_err(|_| PropagateError::ConflictingDecisions)?;
    }
    let conjoined = f.with_units(decided.iter()).expect("decisions are in range");
    let backbone = match compute_backbone(&conjoined, &auto_config_for(&conjoined)) {
        Ok(report) => report.backbone,
        Err(BackboneError::UnsatisfiableInput) => {
            return Err(
                if !decided.is_empty() && new_session(f).solve(&LiteralSet::new()).is_sat() {
                    PropagateError::ConflictingDecisions
                } else {
                    PropagateError::UnsatisfiableInput
                },
            )
        }
        Err(e) => return Err(PropagateError::Backbone(e)),
    };
    let mut result = PropagationResult {
        decided,
        implied_true: Vec::new(),
        implied_false: Vec::new(),
        free: Vec::new(),
    };
    for v in f.vars() {
        if result.decided.contains_var(v) {
            continue;
        }
        match backbone.get(v) {
            Some(l) if l.is_positive() => result.implied_true.push(v),
            Some(_) => result.implied_false.push(v),
            None => result.free.push(v),
        }
    }
    Ok(result)
}

pub fn classify_variables(f: &CnfFormula) -> Result<Classification, PropagateError> {
    let r = propagate(f, &[])?;
    Ok(Classification {
        core: r.implied_true,
        dead: r.implied_false,
        free: r.free,
    })
}

/// A formula with an ordered log of decisions and their cached
/// propagation. The cache always equals `propagate(formula, log)`.
#[derive(Clone, Debug)]
pub struct ConfigSession {
    formula: Arc<CnfFormula>,
    decisions: Vec<Lit>,
    state: PropagationResult,
}

impl ConfigSession {
    pub fn new(formula: Arc<CnfFormula>) -> Result<Self, PropagateError> {
        let state = propagate(&formula, &[])?;
        Ok(ConfigSession {
            formula,
            decisions: Vec::new(),
            state,
        })
    }

    pub fn formula(&self) -> &Arc<CnfFormula> {
        &self.formula
    }

    /// Decisions in the order they were made.
    pub fn decisions(&self) -> &[Lit] {
        &self.decisions
    }

    pub fn state(&self) -> &PropagationResult {
        &self.state
    }

    /// On error the session is left unchanged.
    pub fn assert_decision(&mut self, d: Lit) -> Result<&PropagationResult, PropagateError> {
        if self.decisions.iter().any(|l| l.var() == d.var()) {
            return Err(PropagateError::AlreadyDecided(d.var()));
        }
        let mut decisions = self.decisions.clone();
        decisions.push(d);
        self.state = propagate(&self.formula, &decisions)?;
        self.decisions = decisions;
        Ok(&self.state)
    }

    /// Recomputes from the remaining decisions.
    pub fn retract_decision(&mut self, v: Var) -> Result<&PropagationResult, PropagateError> {
        let pos = self
            .decisions
            .iter()
            .position(|l| l.var() == v)
            .ok_or(PropagateError::NotADecision(v))?;
        let mut decisions = self.decisions.clone();
        decisions.remove(pos);
        self.state = propagate(&self.formula, &decisions)?;
        self.decisions = decisions;
        Ok(&self.state)
    }
}
