use crate::cnf::{CnfFormula, Lit, LiteralSet, Var};

use super::{BackendId, SatBackend, SolverError};

/// Answer to one solve call.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    /// Total model over the session's original variables.
    Sat(LiteralSet),
    /// Subset of the assumptions that is unsatisfiable together with the
    /// clauses. Not necessarily minimal.
    Unsat(LiteralSet),
}

impl SolveOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveOutcome::Sat(_))
    }

    pub fn model(&self) -> Option<&LiteralSet> {
        match self {
            SolveOutcome::Sat(m) => Some(m),
            SolveOutcome::Unsat(_) => None,
        }
    }

    pub fn core(&self) -> Option<&LiteralSet> {
        match self {
            SolveOutcome::Unsat(c) => Some(c),
            SolveOutcome::Sat(_) => None,
        }
    }
}

/// A clause `c ∨ a` guarded by a fresh activation variable `a`.
///
/// Assuming [`enable`](Self::enable) (`¬a`) enforces `c`; assuming
/// [`disable`](Self::disable) (`a`) or retiring the handle switches it off.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ActivationHandle {
    var: Var,
}

impl ActivationHandle {
    pub fn var(&self) -> Var {
        self.var
    }

    pub fn enable(&self) -> Lit {
        self.var.negative()
    }

    pub fn disable(&self) -> Lit {
        self.var.positive()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub models: Vec<LiteralSet>,
    /// True iff the last solve call answered UNSAT before the limit was hit.
    pub exhausted: bool,
}

pub struct SolverSession {
    backend: Box<dyn SatBackend>,
    original_vars: usize,
    allocated_vars: usize,
    solve_calls: usize,
    // debug builds re-check every model against the loaded formula
    #[cfg(debug_assertions)]
    loaded: CnfFormula,
}

impl std::fmt::Debug for SolverSession {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SolverSession")
            .field("original_vars", &self.original_vars)
            .field("allocated_vars", &self.allocated_vars)
            .field("solve_calls", &self.solve_calls)
            .finish()
    }
}

impl SolverSession {
    /// Loads `f` into a fresh backend; no solve is performed.
    pub fn new(f: &CnfFormula, backend: BackendId) -> Self {
        Self::with_backend(f, backend.create())
    }

    /// Like [`SolverSession::new`], resolving the backend by name.
    pub fn open(f: &CnfFormula, backend: &str) -> Result<Self, SolverError> {
        Ok(Self::new(f, backend.parse()?))
    }

    pub fn with_backend(f: &CnfFormula, mut backend: Box<dyn SatBackend>) -> Self {
        backend.reserve_vars(f.num_vars());
        for c in f.clauses() {
            backend.add_clause(c.lits());
        }
        SolverSession {
            backend,
            original_vars: f.num_vars(),
            allocated_vars: f.num_vars(),
            solve_calls: 0,
            #[cfg(debug_assertions)]
            loaded: f.clone(),
        }
    }

    pub fn num_original_vars(&self) -> usize {
        self.original_vars
    }

    /// Original variables plus activation variables handed out so far.
    pub fn num_allocated_vars(&self) -> usize {
        self.allocated_vars
    }

    pub fn num_solve_calls(&self) -> usize {
        self.solve_calls
    }

    /// Solves under `assumptions`, which are forgotten afterwards.
    pub fn solve(&mut self, assumptions: &LiteralSet) -> SolveOutcome {
        let lits = assumptions.to_vec();
        if let Some(max) = lits.iter().map(|l| l.var().index() as usize).max() {
            self.allocated_vars = self.allocated_vars.max(max);
        }
        self.solve_calls += 1;
        if self.backend.solve(&lits) {
            let model: Vec<bool> = (1..=self.original_vars as u32)
                .map(|i| self.backend.model_value(Var::new(i).unwrap()))
                .collect();
            let model = LiteralSet::from_assignment(&model);
            #[cfg(debug_assertions)]
            {
                assert!(self.loaded.is_satisfied_by(&model), "model violates a clause");
                assert!(
                    lits.iter()
                        .filter(|l| l.var().slot() < self.original_vars)
                        .all(|&l| model.contains(l)),
                    "model violates an assumption"
                );
            }
            SolveOutcome::Sat(model)
        } else {
            let core: LiteralSet = self.backend.failed_assumptions().iter().copied().collect();
            debug_assert!(core.is_subset(assumptions));
            SolveOutcome::Unsat(core)
        }
    }

    /// Adds a permanent clause. An empty clause makes the session UNSAT.
    pub fn add_clause(&mut self, lits: &[Lit]) {
        if let Some(max) = lits.iter().map(|l| l.var().index() as usize).max() {
            self.allocated_vars = self.allocated_vars.max(max);
        }
        self.backend.add_clause(lits);
        #[cfg(debug_assertions)]
        if !lits.is_empty() && lits.iter().all(|l| l.var().slot() < self.original_vars) {
            self.loaded
                .add_clause(crate::cnf::Clause::new(lits.to_vec()))
                .expect("clause over original variables");
        }
    }

    /// Adds `lits ∨ a` for a fresh activation variable `a`.
    pub fn add_switchable_clause(&mut self, lits: &[Lit]) -> ActivationHandle {
        self.allocated_vars += 1;
        let var = Var::new(self.allocated_vars as u32).expect("variable index overflow");
        self.backend.reserve_vars(self.allocated_vars);
        let mut clause = Vec::with_capacity(lits.len() + 1);
        clause.extend_from_slice(lits);
        clause.push(var.positive());
        self.backend.add_clause(&clause);
        ActivationHandle { var }
    }

    /// Switches the guarded clause off for good.
    pub fn retire(&mut self, handle: ActivationHandle) {
        self.backend.add_clause(&[handle.disable()]);
    }

    /// Enumerates models with blocking clauses over the original variables.
    ///
    /// Stops after `limit` models (`None` for no limit). Exhausting `m`
    /// models costs `m + 1` solve calls. The blocking clauses stay in the
    /// session.
    pub fn enumerate_solutions(&mut self, limit: Option<usize>) -> Enumeration {
        let mut models = Vec::new();
        loop {
            if limit.is_some_and(|l| models.len() >= l) {
                return Enumeration {
                    models,
                    exhausted: false,
                };
            }
            match self.solve(&LiteralSet::new()) {
                SolveOutcome::Sat(model) => {
                    let blocking: Vec<Lit> = model.iter().map(|l| !l).collect();
                    self.add_clause(&blocking);
                    models.push(model);
                }
                SolveOutcome::Unsat(_) => {
                    return Enumeration {
                        models,
                        exhausted: true,
                    }
                }
            }
        }
    }
}

/// Opens a session on the default backend.
pub fn new_session(f: &CnfFormula) -> SolverSession {
    SolverSession::new(f, BackendId::default())
}
