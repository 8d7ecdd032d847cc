//! Statistics for comparing configurations.
//!
//! Times are plain `f64` seconds. Ranks are 1-based with ties sharing the
//! average of the positions they occupy.

use statrs::distribution::{ContinuousCDF, Normal};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("no observations")]
    Empty,
    #[error("need at least {0} observations")]
    TooFew(usize),
    #[error("samples differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("constant sample has no rank variance")]
    ConstantInput,
    #[error("baseline time is zero")]
    ZeroBaseline,
    #[error("both times are zero")]
    ZeroTotal,
    #[error("non-finite observation")]
    NonFinite,
}

/// Percentage of `base` saved by `new`; negative when `new` is slower.
pub fn percent_reduction(base: f64, new: f64) -> Result<f64, StatsError> {
    if !base.is_finite() || !new.is_finite() {
        return Err(StatsError::NonFinite);
    }
    if base == 0.0 {
        return Err(StatsError::ZeroBaseline);
    }
    Ok((base - new) * 100.0 / base)
}

/// Difference between `worst` and `best` relative to their mean, in percent.
pub fn spread_percent(best: f64, worst: f64) -> Result<f64, StatsError> {
    if !best.is_finite() || !worst.is_finite() {
        return Err(StatsError::NonFinite);
    }
    if best + worst == 0.0 {
        return Err(StatsError::ZeroTotal);
    }
    Ok((worst - best) * 200.0 / (worst + best))
}

/// 1-based ranks with ties averaged.
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        // positions i..=j hold ranks i+1..=j+1
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Result of a one-sided Wilcoxon signed-rank test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StatsSummary {
    /// Probability of a signed-rank sum at least this large when neither
    /// side is faster.
    pub p_value: f64,
    /// `|z| / sqrt(n_effective)`.
    pub effect_r: f64,
    /// Pairs with a non-zero difference.
    pub n_effective: usize,
    /// Sum of ranks of the positive differences `first - second`.
    pub w_plus: f64,
    pub z: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EffectSize {
    Small,
    Medium,
    Large,
}

impl StatsSummary {
    pub fn effect_size(&self) -> EffectSize {
        if self.effect_r < 0.3 {
            EffectSize::Small
        } else if self.effect_r <= 0.5 {
            EffectSize::Medium
        } else {
            EffectSize::Large
        }
    }
}

/// Tests whether the second element of each pair tends to be smaller than
/// the first.
///
/// Zero differences are dropped. The p-value comes from the normal
/// approximation with tie-corrected variance and a continuity correction of
/// 0.5 toward the mean.
pub fn wilcoxon_signed_rank(pairs: &[(f64, f64)]) -> Result<StatsSummary, StatsError> {
    if pairs.is_empty() {
        return Err(StatsError::Empty);
    }
    let diffs: Vec<f64> = pairs.iter().map(|&(a, b)| a - b).collect();
    if diffs.iter().any(|d| !d.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let diffs: Vec<f64> = diffs.into_iter().filter(|&d| d != 0.0).collect();
    let n = diffs.len();
    if n == 0 {
        return Ok(StatsSummary {
            p_value: 1.0,
            effect_r: 0.0,
            n_effective: 0,
            w_plus: 0.0,
            z: 0.0,
        });
    }
    let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks = average_ranks(&abs);
    let w_plus: f64 = diffs
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| r)
        .sum();

    let nf = n as f64;
    let mean = nf * (nf + 1.0) / 4.0;
    let mut sorted = abs.clone();
    sorted.sort_by(f64::total_cmp);
    let tie_term: f64 = sorted
        .chunk_by(|a, b| a == b)
        .map(|g| {
            let t = g.len() as f64;
            t * t * t - t
        })
        .sum();
    let variance = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term / 48.0;
    let z = (w_plus - mean - 0.5) / variance.sqrt();
    let normal = Normal::standard();
    let p_value = (1.0 - normal.cdf(z)).clamp(0.0, 1.0);
    Ok(StatsSummary {
        p_value,
        effect_r: z.abs() / nf.sqrt(),
        n_effective: n,
        w_plus,
        z,
    })
}

/// Rank correlation: Pearson correlation of the average ranks.
pub fn spearman_rho(xs: &[f64], ys: &[f64]) -> Result<f64, StatsError> {
    if xs.len() != ys.len() {
        return Err(StatsError::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 2 {
        return Err(StatsError::TooFew(2));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let rx = average_ranks(xs);
    let ry = average_ranks(ys);
    let n = rx.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::ConstantInput);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}
