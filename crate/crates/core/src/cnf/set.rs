use std::fmt;

use super::lit::{Lit, Var};

/// A set of literals that never holds both polarities of a variable.
///
/// Membership is a polarity array indexed by variable, so `contains`,
/// `insert` and `remove` are O(1). Iteration is in ascending variable order.
#[derive(Clone, Default)]
pub struct LiteralSet {
    // 0 = absent, 1 = positive, -1 = negative
    polarity: Vec<i8>,
    len: usize,
}

/// Returned by [`LiteralSet::try_insert`] when the opposite literal is present.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ContradictoryLiteral(pub Lit);

impl LiteralSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// An empty set pre-sized for variables `1..=num_vars`.
    pub fn with_num_vars(num_vars: usize) -> Self {
        LiteralSet {
            polarity: vec![0; num_vars],
            len: 0,
        }
    }

    /// Builds a set from literals.
    ///
    /// # Panics
    ///
    /// Panics if the input contains both polarities of a variable.
    pub fn from_lits<I: IntoIterator<Item = Lit>>(lits: I) -> Self {
        let mut set = LiteralSet::new();
        for l in lits {
            set.insert(l);
        }
        set
    }

    pub fn try_from_lits<I: IntoIterator<Item = Lit>>(lits: I) -> Result<Self, ContradictoryLiteral> {
        let mut set = LiteralSet::new();
        for l in lits {
            set.try_insert(l)?;
        }
        Ok(set)
    }

    /// A total assignment over `1..=values.len()`.
    pub fn from_assignment(values: &[bool]) -> Self {
        LiteralSet {
            polarity: values.iter().map(|&b| if b { 1 } else { -1 }).collect(),
            len: values.len(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Largest variable index the backing array can address without growing.
    pub fn capacity_vars(&self) -> usize {
        self.polarity.len()
    }

    #[inline]
    fn sign(l: Lit) -> i8 {
        if l.is_positive() {
            1
        } else {
            -1
        }
    }

    #[inline]
    pub fn contains(&self, l: Lit) -> bool {
        self.polarity.get(l.var().slot()).is_some_and(|&p| p == Self::sign(l))
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.polarity.get(v.slot()).is_some_and(|&p| p != 0)
    }

    /// The literal of `v` in the set, if any.
    pub fn get(&self, v: Var) -> Option<Lit> {
        match self.polarity.get(v.slot()) {
            Some(1) => Some(v.positive()),
            Some(-1) => Some(v.negative()),
            _ => None,
        }
    }

    /// Inserts `l`; returns `false` if it was already present.
    ///
    /// # Panics
    ///
    /// Panics if `!l` is in the set.
    pub fn insert(&mut self, l: Lit) -> bool {
        match self.try_insert(l) {
            Ok(added) => added,
            Err(ContradictoryLiteral(l)) => panic!("literal set already contains the negation of {l}"),
        }
    }

    pub fn try_insert(&mut self, l: Lit) -> Result<bool, ContradictoryLiteral> {
        let slot = l.var().slot();
        if slot >= self.polarity.len() {
            self.polarity.resize(slot + 1, 0);
        }
        let s = Self::sign(l);
        match self.polarity[slot] {
            0 => {
                self.polarity[slot] = s;
                self.len += 1;
                Ok(true)
            }
            p if p == s => Ok(false),
            _ => Err(ContradictoryLiteral(l)),
        }
    }

    /// Removes `l`; returns `true` if it was present.
    pub fn remove(&mut self, l: Lit) -> bool {
        if self.contains(l) {
            self.polarity[l.var().slot()] = 0;
            self.len -= 1;
            true
        } else {
            false
        }
    }

    pub fn clear(&mut self) {
        self.polarity.iter_mut().for_each(|p| *p = 0);
        self.len = 0;
    }

    pub fn iter(&self) -> impl Iterator<Item = Lit> + '_ {
        self.iter_from(Var::from_slot(0))
    }

    /// Members whose variable is `>= start`, ascending.
    pub fn iter_from(&self, start: Var) -> impl Iterator<Item = Lit> + '_ {
        self.polarity
            .iter()
            .enumerate()
            .skip(start.slot())
            .filter(|(_, &p)| p != 0)
            .map(|(slot, &p)| Var::from_slot(slot).lit(p > 0))
    }

    /// The member with the lowest variable index.
    pub fn first(&self) -> Option<Lit> {
        self.iter().next()
    }

    pub fn to_vec(&self) -> Vec<Lit> {
        self.iter().collect()
    }

    /// `{!l | l in self}`.
    pub fn complement(&self) -> LiteralSet {
        LiteralSet {
            polarity: self.polarity.iter().map(|&p| -p).collect(),
            len: self.len,
        }
    }

    pub fn is_subset(&self, other: &LiteralSet) -> bool {
        self.iter().all(|l| other.contains(l))
    }

    pub fn intersection(&self, other: &LiteralSet) -> LiteralSet {
        let mut out = self.clone();
        out.retain_in(other);
        out
    }

    /// Keeps only the members that also belong to `other`.
    pub fn retain_in(&mut self, other: &LiteralSet) {
        for slot in 0..self.polarity.len() {
            let p = self.polarity[slot];
            if p != 0 && other.polarity.get(slot).copied().unwrap_or(0) != p {
                self.polarity[slot] = 0;
                self.len -= 1;
            }
        }
    }

    pub fn difference(&self, other: &LiteralSet) -> LiteralSet {
        let mut out = self.clone();
        out.remove_all(other);
        out
    }

    /// Removes every member of `other`.
    pub fn remove_all(&mut self, other: &LiteralSet) {
        for l in other.iter() {
            self.remove(l);
        }
    }

    /// Variables present with positive polarity.
    pub fn positive_vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.iter().filter(|l| l.is_positive()).map(Lit::var)
    }

    pub fn negative_vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.iter().filter(|l| !l.is_positive()).map(Lit::var)
    }

    /// Signed integers in ascending variable order.
    pub fn to_dimacs_values(&self) -> Vec<i32> {
        self.iter().map(Lit::value).collect()
    }
}

impl FromIterator<Lit> for LiteralSet {
    fn from_iter<I: IntoIterator<Item = Lit>>(iter: I) -> Self {
        LiteralSet::from_lits(iter)
    }
}

impl Extend<Lit> for LiteralSet {
    fn extend<I: IntoIterator<Item = Lit>>(&mut self, iter: I) {
        for l in iter {
            self.insert(l);
        }
    }
}

impl fmt::Debug for LiteralSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(Lit::value)).finish()
    }
}

// Compares members only; the backing arrays may differ in length.
impl PartialEq for LiteralSet {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.is_subset(other)
    }
}

impl Eq for LiteralSet {}

#[cfg(test)]
mod tests {
    use super::*;

    fn lits(vs: &[i32]) -> LiteralSet {
        vs.iter().map(|&v| Lit::new(v).unwrap()).collect()
    }

    #[test]
    fn complement_of_empty_is_empty() {
        assert!(LiteralSet::new().complement().is_empty());
    }

    #[test]
    fn complement_flips_each_literal() {
        let s = lits(&[1, -2]);
        assert_eq!(s.complement().to_dimacs_values(), vec![-1, 2]);
        assert_eq!(s.complement().complement(), s);
    }

    #[test]
    fn complement_of_worked_model() {
        // a..g = 1..7, S = {-a, -b, c, d, e, -f, -g}
        let s = lits(&[-1, -2, 3, 4, 5, -6, -7]);
        assert_eq!(s.complement().to_dimacs_values(), vec![1, 2, -3, -4, -5, 6, 7]);
    }

    #[test]
    fn rejects_contradictory_insert() {
        let mut s = lits(&[3]);
        assert_eq!(
            s.try_insert(Lit::new(-3).unwrap()),
            Err(ContradictoryLiteral(Lit::new(-3).unwrap()))
        );
        assert!(!s.insert(Lit::new(3).unwrap()));
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn set_algebra() {
        let a = lits(&[1, -2, 3]);
        let b = lits(&[1, 2, 3, 4]);
        assert_eq!(a.intersection(&b).to_dimacs_values(), vec![1, 3]);
        assert_eq!(a.difference(&b).to_dimacs_values(), vec![-2]);
        assert!(lits(&[1, 3]).is_subset(&a));
        assert!(!a.is_subset(&b));
        assert_eq!(a.first(), Some(Lit::new(1).unwrap()));
        assert_eq!(a.iter_from(Var::new(2).unwrap()).count(), 2);
    }

    #[test]
    fn equality_ignores_capacity() {
        let mut a = LiteralSet::with_num_vars(10);
        a.insert(Lit::new(2).unwrap());
        let b = lits(&[2]);
        assert_eq!(a, b);
    }
}
