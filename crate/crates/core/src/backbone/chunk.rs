use std::fmt;
use std::str::FromStr;

/// How many candidates a chunked algorithm bets on per iteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChunkStrategy {
    /// Always `k` literals (capped by the remaining candidates).
    Fixed(usize),
    /// Start at 1, multiply by the factor after a won bet, reset to 1 after
    /// a lost one.
    AdaptiveGeometric(usize),
    /// Bet on every remaining candidate at once.
    WholeFormula,
}

pub const DEFAULT_GROWTH_FACTOR: usize = 10;

impl Default for ChunkStrategy {
    fn default() -> Self {
        ChunkStrategy::AdaptiveGeometric(DEFAULT_GROWTH_FACTOR)
    }
}

impl ChunkStrategy {
    pub fn validate(&self) -> Result<(), String> {
        match *self {
            ChunkStrategy::Fixed(0) => Err("fixed chunk size must be at least 1".into()),
            ChunkStrategy::AdaptiveGeometric(k) if k < 2 => Err("adaptive growth factor must be at least 2".into()),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for ChunkStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChunkStrategy::Fixed(k) => write!(f, "fixed:{k}"),
            ChunkStrategy::AdaptiveGeometric(k) => write!(f, "adaptive:{k}"),
            ChunkStrategy::WholeFormula => f.write_str("whole"),
        }
    }
}

impl FromStr for ChunkStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, arg) = match s.split_once(':') {
            Some((kind, arg)) => (kind, Some(arg)),
            None => (s, None),
        };
        let number = |arg: Option<&str>| -> Result<usize, String> {
            arg.ok_or_else(|| format!("chunk strategy `{s}` needs a number"))?
                .parse()
                .map_err(|_| format!("invalid number in chunk strategy `{s}`"))
        };
        let strategy = match kind {
            "fixed" => ChunkStrategy::Fixed(number(arg)?),
            "adaptive" => ChunkStrategy::AdaptiveGeometric(arg.map_or(Ok(DEFAULT_GROWTH_FACTOR), |a| number(Some(a)))?),
            "whole" if arg.is_none() => ChunkStrategy::WholeFormula,
            _ => return Err(format!("unknown chunk strategy `{s}`")),
        };
        strategy.validate()?;
        Ok(strategy)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BetOutcome {
    Win,
    Lose,
}

/// Chunk-size bookkeeping across iterations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChunkState {
    pub current_k: usize,
    pub last_outcome: Option<BetOutcome>,
}

impl ChunkState {
    pub fn initial(strategy: ChunkStrategy, remaining: usize) -> Self {
        let current_k = match strategy {
            ChunkStrategy::Fixed(k) => k,
            ChunkStrategy::AdaptiveGeometric(_) => 1,
            ChunkStrategy::WholeFormula => remaining,
        };
        ChunkState {
            current_k: current_k.max(1),
            last_outcome: None,
        }
    }

    /// Size of the next chunk given `remaining` candidates.
    pub fn chunk_len(&self, remaining: usize) -> usize {
        self.current_k.min(remaining)
    }

    pub fn advance(&mut self, strategy: ChunkStrategy, outcome: BetOutcome, remaining: usize) {
        self.current_k = next_chunk_size(strategy, self, outcome, remaining);
        self.last_outcome = Some(outcome);
    }
}

/// The chunk size to use after a bet ended with `outcome`.
pub fn next_chunk_size(strategy: ChunkStrategy, state: &ChunkState, outcome: BetOutcome, remaining: usize) -> usize {
    match (strategy, outcome) {
        (ChunkStrategy::Fixed(k), _) => k,
        (ChunkStrategy::AdaptiveGeometric(factor), BetOutcome::Win) => state.current_k.saturating_mul(factor),
        (ChunkStrategy::AdaptiveGeometric(_), BetOutcome::Lose) => 1,
        (ChunkStrategy::WholeFormula, _) => remaining.max(1),
    }
}
