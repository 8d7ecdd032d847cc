//! Built-in reference solver.
//!
//! Conflict-driven search with two watched literals per clause, first-UIP
//! learning and non-chronological backjumping. Assumptions occupy the first
//! decision levels; when one of them is found false, the assumption core is
//! recovered by walking the trail back from the falsified assumption.
//!
//! Branching is fixed: the lowest unassigned variable, positive phase first.
//! Every propagated literal is then implied by the clauses, the assumptions
//! and decisions on lower variables only, so the model found is the
//! lexicographically greatest one (true > false, ascending variables) among
//! the models of the clauses plus assumptions. Learned clauses cannot change
//! it, which keeps models and call counts reproducible across sessions that
//! pose the same logical question.

use crate::cnf::{Lit, Var};

use super::SatBackend;

const NO_REASON: u32 = u32::MAX;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Value {
    True,
    False,
    Unassigned,
}

/// Internal literal code: `2 * slot + sign`, sign 1 for negative literals.
type Code = u32;

#[inline]
fn code(l: Lit) -> Code {
    (l.var().slot() as u32) << 1 | (!l.is_positive()) as u32
}

#[inline]
fn decode(c: Code) -> Lit {
    Var::from_slot((c >> 1) as usize).lit(c & 1 == 0)
}

#[inline]
fn var_of(c: Code) -> usize {
    (c >> 1) as usize
}

#[derive(Clone, Copy)]
struct Watch {
    clause: u32,
    blocker: Code,
}

#[derive(Default)]
pub struct Cdcl {
    clauses: Vec<Vec<Code>>,
    // indexed by literal code: clauses in which that literal is watched
    watches: Vec<Vec<Watch>>,
    // per variable, value of its positive literal
    assigns: Vec<Value>,
    level: Vec<u32>,
    reason: Vec<u32>,
    seen: Vec<bool>,
    trail: Vec<Code>,
    trail_lim: Vec<usize>,
    qhead: usize,
    // no variable below this index is unassigned
    decision_hint: usize,
    ok: bool,
    model: Vec<bool>,
    failed: Vec<Lit>,
    conflicts: u64,
}

impl Cdcl {
    pub fn new() -> Self {
        Cdcl {
            ok: true,
            ..Default::default()
        }
    }

    pub fn num_conflicts(&self) -> u64 {
        self.conflicts
    }

    fn ensure_vars(&mut self, n: usize) {
        if n <= self.assigns.len() {
            return;
        }
        self.assigns.resize(n, Value::Unassigned);
        self.level.resize(n, 0);
        self.reason.resize(n, NO_REASON);
        self.seen.resize(n, false);
        self.watches.resize(2 * n, Vec::new());
    }

    #[inline]
    fn value(&self, c: Code) -> Value {
        match self.assigns[var_of(c)] {
            Value::Unassigned => Value::Unassigned,
            v => {
                if (v == Value::True) == (c & 1 == 0) {
                    Value::True
                } else {
                    Value::False
                }
            }
        }
    }

    #[inline]
    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    #[inline]
    fn enqueue(&mut self, c: Code, reason: u32) {
        let v = var_of(c);
        debug_assert_eq!(self.assigns[v], Value::Unassigned);
        self.assigns[v] = if c & 1 == 0 { Value::True } else { Value::False };
        self.level[v] = self.decision_level() as u32;
        self.reason[v] = reason;
        self.trail.push(c);
    }

    fn new_decision_level(&mut self) {
        self.trail_lim.push(self.trail.len());
    }

    fn cancel_until(&mut self, level: usize) {
        if self.decision_level() <= level {
            return;
        }
        let keep = self.trail_lim[level];
        for i in (keep..self.trail.len()).rev() {
            let v = var_of(self.trail[i]);
            self.assigns[v] = Value::Unassigned;
            self.reason[v] = NO_REASON;
            if v < self.decision_hint {
                self.decision_hint = v;
            }
        }
        self.trail.truncate(keep);
        self.trail_lim.truncate(level);
        self.qhead = self.qhead.min(keep);
    }

    fn attach(&mut self, lits: Vec<Code>) -> u32 {
        let idx = self.clauses.len() as u32;
        self.watches[lits[0] as usize].push(Watch {
            clause: idx,
            blocker: lits[1],
        });
        self.watches[lits[1] as usize].push(Watch {
            clause: idx,
            blocker: lits[0],
        });
        self.clauses.push(lits);
        idx
    }

    /// Unit propagation; returns the index of a conflicting clause.
    fn propagate(&mut self) -> Option<u32> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = p ^ 1;
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let mut i = 0;
            let mut j = 0;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == Value::True {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let ci = w.clause as usize;
                {
                    let c = &mut self.clauses[ci];
                    if c[0] == false_lit {
                        c.swap(0, 1);
                    }
                }
                let first = self.clauses[ci][0];
                let nw = Watch {
                    clause: w.clause,
                    blocker: first,
                };
                if first != w.blocker && self.value(first) == Value::True {
                    ws[j] = nw;
                    j += 1;
                    continue;
                }
                let len = self.clauses[ci].len();
                let mut moved = false;
                for k in 2..len {
                    let lk = self.clauses[ci][k];
                    if self.value(lk) != Value::False {
                        self.clauses[ci].swap(1, k);
                        self.watches[lk as usize].push(nw);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = nw;
                j += 1;
                if self.value(first) == Value::False {
                    conflict = Some(w.clause);
                    self.qhead = self.trail.len();
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, w.clause);
                }
            }
            ws.truncate(j);
            self.watches[false_lit as usize] = ws;
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    /// First-UIP conflict analysis. Returns the learnt clause (asserting
    /// literal first, highest remaining level second) and the backjump level.
    fn analyze(&mut self, mut confl: u32) -> (Vec<Code>, usize) {
        let mut learnt: Vec<Code> = vec![0];
        let mut path = 0usize;
        let mut p: Option<Code> = None;
        let mut index = self.trail.len();
        let current = self.decision_level() as u32;
        loop {
            let start = usize::from(p.is_some());
            let clause_len = self.clauses[confl as usize].len();
            for k in start..clause_len {
                let q = self.clauses[confl as usize][k];
                let v = var_of(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    if self.level[v] >= current {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[var_of(self.trail[index])] {
                    break;
                }
            }
            let lit = self.trail[index];
            let v = var_of(lit);
            self.seen[v] = false;
            path -= 1;
            p = Some(lit);
            if path == 0 {
                break;
            }
            confl = self.reason[v];
        }
        learnt[0] = p.unwrap() ^ 1;
        for &q in &learnt[1..] {
            self.seen[var_of(q)] = false;
        }
        let mut bt = 0;
        if learnt.len() > 1 {
            let mut max_i = 1;
            for k in 2..learnt.len() {
                if self.level[var_of(learnt[k])] > self.level[var_of(learnt[max_i])] {
                    max_i = k;
                }
            }
            learnt.swap(1, max_i);
            bt = self.level[var_of(learnt[1])] as usize;
        }
        (learnt, bt)
    }

    /// Collects the assumptions responsible for `assumption` being false.
    fn analyze_final(&mut self, assumption: Code) -> Vec<Lit> {
        let mut core = vec![decode(assumption)];
        if self.decision_level() == 0 {
            return core;
        }
        self.seen[var_of(assumption)] = true;
        for i in (self.trail_lim[0]..self.trail.len()).rev() {
            let lit = self.trail[i];
            let v = var_of(lit);
            if !self.seen[v] {
                continue;
            }
            let r = self.reason[v];
            if r == NO_REASON {
                // below the assumption levels every decision is an assumption
                core.push(decode(lit));
            } else {
                let clause = &self.clauses[r as usize];
                for &q in &clause[1..] {
                    if self.level[var_of(q)] > 0 {
                        self.seen[var_of(q)] = true;
                    }
                }
            }
            self.seen[v] = false;
        }
        self.seen[var_of(assumption)] = false;
        core
    }

    fn pick_branch(&mut self) -> Option<Code> {
        while self.decision_hint < self.assigns.len() {
            if self.assigns[self.decision_hint] == Value::Unassigned {
                return Some((self.decision_hint as u32) << 1);
            }
            self.decision_hint += 1;
        }
        None
    }

    fn search(&mut self, assumptions: &[Code]) -> bool {
        loop {
            if let Some(confl) = self.propagate() {
                self.conflicts += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return false;
                }
                let (learnt, bt) = self.analyze(confl);
                self.cancel_until(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], NO_REASON);
                } else {
                    let asserting = learnt[0];
                    let idx = self.attach(learnt);
                    self.enqueue(asserting, idx);
                }
                continue;
            }
            let mut next = None;
            while self.decision_level() < assumptions.len() {
                let a = assumptions[self.decision_level()];
                match self.value(a) {
                    Value::True => self.new_decision_level(),
                    Value::False => {
                        self.failed = self.analyze_final(a);
                        return false;
                    }
                    Value::Unassigned => {
                        next = Some(a);
                        break;
                    }
                }
            }
            let next = match next {
                Some(a) => a,
                None => match self.pick_branch() {
                    Some(d) => d,
                    None => {
                        self.model = self.assigns.iter().map(|&v| v == Value::True).collect();
                        return true;
                    }
                },
            };
            self.new_decision_level();
            self.enqueue(next, NO_REASON);
        }
    }
}

impl SatBackend for Cdcl {
    fn num_vars(&self) -> usize {
        self.assigns.len()
    }

    fn reserve_vars(&mut self, n: usize) {
        self.ensure_vars(n);
    }

    fn add_clause(&mut self, lits: &[Lit]) {
        if !self.ok {
            return;
        }
        self.cancel_until(0);
        if let Some(max) = lits.iter().map(|l| l.var().index() as usize).max() {
            self.ensure_vars(max);
        }
        let mut codes: Vec<Code> = Vec::with_capacity(lits.len());
        for &l in lits {
            let c = code(l);
            match self.value(c) {
                Value::True => return,
                Value::False => continue,
                Value::Unassigned => {}
            }
            if codes.contains(&(c ^ 1)) {
                return;
            }
            if !codes.contains(&c) {
                codes.push(c);
            }
        }
        match codes.len() {
            0 => self.ok = false,
            1 => {
                self.enqueue(codes[0], NO_REASON);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                self.attach(codes);
            }
        }
    }

    fn solve(&mut self, assumptions: &[Lit]) -> bool {
        self.failed.clear();
        self.model.clear();
        if !self.ok {
            return false;
        }
        if let Some(max) = assumptions.iter().map(|l| l.var().index() as usize).max() {
            self.ensure_vars(max);
        }
        let codes: Vec<Code> = assumptions.iter().map(|&l| code(l)).collect();
        let sat = self.search(&codes);
        self.cancel_until(0);
        sat
    }

    fn model_value(&self, v: Var) -> bool {
        self.model[v.slot()]
    }

    fn failed_assumptions(&self) -> &[Lit] {
        &self.failed
    }
}
