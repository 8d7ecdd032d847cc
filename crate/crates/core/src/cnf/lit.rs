use std::fmt;
use std::ops::Not;

/// A propositional variable, 1-based as in DIMACS.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    /// Returns `None` for index 0 or indices that do not fit a DIMACS literal.
    pub fn new(index: u32) -> Option<Var> {
        if index == 0 || index > i32::MAX as u32 {
            None
        } else {
            Some(Var(index))
        }
    }

    pub fn index(self) -> u32 {
        self.0
    }

    /// Zero-based position, used for array indexing.
    #[inline]
    pub fn slot(self) -> usize {
        (self.0 - 1) as usize
    }

    #[inline]
    pub(crate) fn from_slot(slot: usize) -> Var {
        Var(slot as u32 + 1)
    }

    pub fn positive(self) -> Lit {
        Lit(self.0 as i32)
    }

    pub fn negative(self) -> Lit {
        Lit(-(self.0 as i32))
    }

    pub fn lit(self, polarity: bool) -> Lit {
        if polarity {
            self.positive()
        } else {
            self.negative()
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A literal stored as a non-zero signed integer (DIMACS convention).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Lit(i32);

impl Lit {
    /// Returns `None` for 0 and for `i32::MIN` (which has no negation).
    pub fn new(value: i32) -> Option<Lit> {
        if value == 0 || value == i32::MIN {
            None
        } else {
            Some(Lit(value))
        }
    }

    pub fn value(self) -> i32 {
        self.0
    }

    #[inline]
    pub fn var(self) -> Var {
        Var(self.0.unsigned_abs())
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    #[inline]
    pub fn negate(self) -> Lit {
        Lit(-self.0)
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        self.negate()
    }
}

/// Ordered by variable, negative before positive.
impl Ord for Lit {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.var()
            .cmp(&other.var())
            .then(self.is_positive().cmp(&other.is_positive()))
    }
}

impl PartialOrd for Lit {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
