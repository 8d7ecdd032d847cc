use crate::cnf::{CnfFormula, LiteralSet};

use super::BackboneError;

/// Model literals that can be flipped without falsifying any clause.
///
/// One pass over the clauses computes `model ∩ clause`; a literal that is
/// the only true literal of some clause is unit. Every model literal that is
/// not unit is rotatable and therefore outside the backbone. Runs in time
/// linear in the number of literal occurrences.
pub fn rotatable_literals(f: &CnfFormula, model: &LiteralSet) -> Result<LiteralSet, BackboneError> {
    let n = f.num_vars();
    if model.len() != n || model.capacity_vars() > n && model.iter().any(|l| l.var().index() as usize > n) {
        return Err(BackboneError::ContractViolation(format!(
            "model assigns {} variables, formula has {n}",
            model.len()
        )));
    }
    let mut unit = vec![false; n];
    for (i, clause) in f.clauses().iter().enumerate() {
        let mut true_lits = clause.lits().iter().filter(|&&l| model.contains(l));
        match (true_lits.next(), true_lits.next()) {
            (None, _) => {
                return Err(BackboneError::ContractViolation(format!(
                    "model falsifies clause {}",
                    i + 1
                )))
            }
            (Some(l), None) => unit[l.var().slot()] = true,
            _ => {}
        }
    }
    Ok(model.iter().filter(|l| !unit[l.var().slot()]).collect())
}
