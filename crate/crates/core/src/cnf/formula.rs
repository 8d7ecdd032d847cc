use super::lit::{Lit, Var};
use super::set::LiteralSet;
use super::CnfError;

/// A disjunction of literals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    /// Wraps literals as given, without normalization.
    pub fn new(lits: Vec<Lit>) -> Self {
        Clause { lits }
    }

    pub fn from_values(values: &[i32]) -> Option<Self> {
        values
            .iter()
            .map(|&v| Lit::new(v))
            .collect::<Option<Vec<_>>>()
            .map(Clause::new)
    }

    pub fn unit(l: Lit) -> Self {
        Clause { lits: vec![l] }
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn contains(&self, l: Lit) -> bool {
        self.lits.contains(&l)
    }

    pub fn max_var(&self) -> Option<Var> {
        self.lits.iter().map(|l| l.var()).max()
    }

    /// True if some literal of the clause belongs to `assignment`.
    pub fn is_satisfied_by(&self, assignment: &LiteralSet) -> bool {
        self.lits.iter().any(|&l| assignment.contains(l))
    }
}

/// Outcome of normalizing one raw clause.
pub(crate) enum Normalized {
    Clause(Clause, usize),
    Tautology,
}

/// Collapses duplicate literals (keeping first occurrences) and detects
/// tautologies. Returns the clause with the number of literals removed.
pub(crate) fn normalize(lits: &[Lit]) -> Normalized {
    let mut out: Vec<Lit> = Vec::with_capacity(lits.len());
    for &l in lits {
        if out.contains(&!l) {
            return Normalized::Tautology;
        }
        if !out.contains(&l) {
            out.push(l);
        }
    }
    let removed = lits.len() - out.len();
    Normalized::Clause(Clause::new(out), removed)
}

/// A CNF formula: a variable count and a list of clauses over `1..=num_vars`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(num_vars: usize) -> Self {
        CnfFormula {
            num_vars,
            clauses: Vec::new(),
        }
    }

    /// Builds a formula, rejecting out-of-range and empty clauses.
    pub fn from_clauses(num_vars: usize, clauses: Vec<Clause>) -> Result<Self, CnfError> {
        let mut f = CnfFormula::new(num_vars);
        for c in clauses {
            f.add_clause(c)?;
        }
        Ok(f)
    }

    /// Convenience constructor from signed integers; panics on invalid input.
    /// Intended for fixtures and tests.
    pub fn from_dimacs_clauses(num_vars: usize, clauses: &[&[i32]]) -> Self {
        let clauses = clauses
            .iter()
            .map(|c| Clause::from_values(c).expect("literal 0 in clause"))
            .collect();
        CnfFormula::from_clauses(num_vars, clauses).expect("invalid clause")
    }

    pub fn add_clause(&mut self, clause: Clause) -> Result<(), CnfError> {
        if clause.is_empty() {
            return Err(CnfError::EmptyClause { line: None });
        }
        if let Some(v) = clause.max_var() {
            if v.index() as usize > self.num_vars {
                return Err(CnfError::VariableOutOfRange {
                    var: v.index(),
                    num_vars: self.num_vars,
                    line: None,
                });
            }
        }
        self.clauses.push(clause);
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> {
        (1..=self.num_vars as u32).filter_map(Var::new)
    }

    /// All `2 * num_vars` literals, by variable, positive first.
    pub fn literals(&self) -> impl Iterator<Item = Lit> {
        self.vars().flat_map(|v| [v.positive(), v.negative()])
    }

    /// True iff `assignment` satisfies every clause.
    pub fn is_satisfied_by(&self, assignment: &LiteralSet) -> bool {
        self.clauses.iter().all(|c| c.is_satisfied_by(assignment))
    }

    /// A copy of the formula conjoined with one unit clause per literal.
    pub fn with_units<I: IntoIterator<Item = Lit>>(&self, units: I) -> Result<CnfFormula, CnfError> {
        let mut f = self.clone();
        for l in units {
            f.add_clause(Clause::unit(l))?;
        }
        Ok(f)
    }
}
