//! Backbone-based CNF simplification.
//!
//! Given the backbone `b` of `f`, the simplified formula keeps the same
//! models: clauses satisfied by some backbone literal are dropped, falsified
//! backbone occurrences are deleted from the remaining clauses, and every
//! backbone literal becomes a unit clause.

use crate::cnf::{Clause, CnfFormula, Lit, LiteralSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplificationResult {
    pub simplified: CnfFormula,
    pub units_added: usize,
    pub clauses_removed: usize,
    pub clauses_shortened: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimplifyError {
    #[error("backbone contains both polarities of variable {0}")]
    Contradictory(u32),
    #[error("backbone literal {0} is outside the formula's variables")]
    UnknownVariable(Lit),
    #[error("clause {0} loses every literal; the literal set is not the formula's backbone")]
    EmptiedClause(usize),
}

/// Output: one unit clause per backbone literal in ascending variable order,
/// then the surviving clauses in their original order.
pub fn simplify_with_backbone(f: &CnfFormula, backbone: &[Lit]) -> Result<SimplificationResult, SimplifyError> {
    let mut b = LiteralSet::with_num_vars(f.num_vars());
    for &l in backbone {
        if l.var().index() as usize > f.num_vars() {
            return Err(SimplifyError::UnknownVariable(l));
        }
        b.try_insert(l)
            .map_err(|_| SimplifyError::Contradictory(l.var().index()))?;
    }

    let mut survivors = Vec::with_capacity(f.num_clauses());
    let mut clauses_removed = 0;
    let mut clauses_shortened = 0;
    for (i, clause) in f.clauses().iter().enumerate() {
        if clause.lits().iter().any(|&l| b.contains(l)) {
            clauses_removed += 1;
            continue;
        }
        let kept: Vec<Lit> = clause.lits().iter().copied().filter(|&l| !b.contains(!l)).collect();
        if kept.is_empty() {
            return Err(SimplifyError::EmptiedClause(i + 1));
        }
        if kept.len() < clause.len() {
            clauses_shortened += 1;
        }
        survivors.push(Clause::new(kept));
    }

    let mut clauses: Vec<Clause> = b.iter().map(Clause::unit).collect();
    clauses.extend(survivors);
    let simplified = CnfFormula::from_clauses(f.num_vars(), clauses).expect("clauses stay within the variable range");
    Ok(SimplificationResult {
        simplified,
        units_added: b.len(),
        clauses_removed,
        clauses_shortened,
    })
}
