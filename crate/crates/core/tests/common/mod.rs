//! Shared test oracles: brute-force model enumeration, a seeded generator of
//! small satisfiable CNFs, the configuration grid, and the exact
//! signed-rank distribution.
#![allow(dead_code)]

use backbone_core::backbone::{Algorithm, AlgorithmConfig, ChunkStrategy};
use backbone_core::{Clause, CnfFormula, Lit, LiteralSet};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn lit(v: i32) -> Lit {
    Lit::new(v).unwrap()
}

pub fn set(vs: &[i32]) -> LiteralSet {
    vs.iter().map(|&v| lit(v)).collect()
}

/// Variables a..g are 1..7.
pub fn running_example() -> CnfFormula {
    CnfFormula::from_dimacs_clauses(7, &[&[-1], &[-1, 2], &[1, 3], &[-3, 4], &[-3, 5, 6], &[6, -7]])
}

/// STATIC=1 PIE=2 FEATURE_PREFER_APPLETS=3 BUILD_LIBBUSYBOX=4
/// FEATURE_INDIVIDUAL=5 FEATURE_SHARED_BUSYBOX=6
pub fn busybox() -> CnfFormula {
    CnfFormula::from_dimacs_clauses(6, &[&[-1, -2], &[-4, -3], &[-4, -2], &[-4, -1], &[-5, 4], &[-6, 4]])
}

/// Kconfig constraints plus presence conditions of three code blocks.
/// USB_HID=1 USB=2 INPUT=3 B1=4 B2=5 B3=6
pub fn dead_code() -> CnfFormula {
    CnfFormula::from_dimacs_clauses(
        6,
        &[&[-1, 2], &[-1, 3], &[-4, 1], &[-5, 1], &[-5, 3], &[-6, 1], &[-6, -3]],
    )
}

/// Every total assignment satisfying `f`, in binary counting order.
pub fn brute_force_models(f: &CnfFormula) -> Vec<LiteralSet> {
    let n = f.num_vars();
    assert!(n <= 20, "brute force over {n} variables");
    (0u32..1 << n)
        .map(|bits| {
            let values: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
            LiteralSet::from_assignment(&values)
        })
        .filter(|m| f.is_satisfied_by(m))
        .collect()
}

/// Intersection of all models; `None` when unsatisfiable.
pub fn brute_force_backbone(f: &CnfFormula) -> Option<LiteralSet> {
    let models = brute_force_models(f);
    let mut it = models.into_iter();
    let mut b = it.next()?;
    for m in it {
        b.retain_in(&m);
    }
    Some(b)
}

/// A random CNF with 5–12 variables and 2–40 clauses; clause lengths are
/// mostly 2 (1: 8%, 2: 80%, 3–4: 12%). Possibly unsatisfiable.
pub fn random_cnf(rng: &mut impl Rng) -> CnfFormula {
    let n = rng.gen_range(5..=12usize);
    let m = rng.gen_range(2..=40usize);
    let mut f = CnfFormula::new(n);
    for _ in 0..m {
        let len = match rng.gen_range(0..100) {
            0..=7 => 1,
            8..=87 => 2,
            _ => rng.gen_range(3..=4),
        };
        let mut lits: Vec<Lit> = Vec::with_capacity(len);
        while lits.len() < len {
            let v = rng.gen_range(1..=n as i32);
            if lits.iter().any(|l| l.var().index() as i32 == v) {
                continue;
            }
            lits.push(lit(if rng.gen_bool(0.5) { v } else { -v }));
        }
        f.add_clause(Clause::new(lits)).unwrap();
    }
    f
}

/// `count` satisfiable formulas from a fixed seed, each with its
/// brute-force backbone.
pub fn satisfiable_corpus(seed: u64, count: usize) -> Vec<(CnfFormula, LiteralSet)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let f = random_cnf(&mut rng);
        if let Some(b) = brute_force_backbone(&f) {
            out.push((f, b));
        }
    }
    out
}

pub const CHUNKS: [ChunkStrategy; 8] = [
    ChunkStrategy::Fixed(1),
    ChunkStrategy::Fixed(2),
    ChunkStrategy::Fixed(3),
    ChunkStrategy::Fixed(5),
    ChunkStrategy::Fixed(100),
    ChunkStrategy::AdaptiveGeometric(2),
    ChunkStrategy::AdaptiveGeometric(10),
    ChunkStrategy::WholeFormula,
];

/// Enumeration, naive, and every (iterative | all-in | all-out) × chunk ×
/// heuristic combination.
pub fn all_configs() -> Vec<AlgorithmConfig> {
    let mut out = vec![
        AlgorithmConfig::new(Algorithm::Enumeration),
        AlgorithmConfig::new(Algorithm::Naive),
    ];
    for uc in [false, true] {
        for rot in [false, true] {
            out.push(
                AlgorithmConfig::new(Algorithm::Iterative)
                    .with_uc_injection(uc)
                    .with_rotatable_filter(rot),
            );
            for alg in [Algorithm::AllIn, Algorithm::AllOut] {
                for chunk in CHUNKS {
                    out.push(
                        AlgorithmConfig::new(alg)
                            .with_chunk(chunk)
                            .with_uc_injection(uc)
                            .with_rotatable_filter(rot),
                    );
                }
            }
        }
    }
    out
}

/// Exact one-sided p-value `P(W+ >= observed)` over all `2^n` sign
/// assignments of the given ranks.
pub fn exact_signed_rank_p(ranks: &[f64], observed_w_plus: f64) -> f64 {
    let n = ranks.len();
    let total = 1u64 << n;
    let hits = (0..total)
        .filter(|mask| {
            let w: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
            w >= observed_w_plus - 1e-9
        })
        .count();
    hits as f64 / total as f64
}

/// Plain Pearson correlation, written independently of the crate.
pub fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let vx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let vy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

/// Average ranks by counting: rank = #smaller + (#equal + 1) / 2.
pub fn ranks_by_counting(xs: &[f64]) -> Vec<f64> {
    xs.iter()
        .map(|&x| {
            let smaller = xs.iter().filter(|&&y| y < x).count() as f64;
            let equal = xs.iter().filter(|&&y| y == x).count() as f64;
            smaller + (equal + 1.0) / 2.0
        })
        .collect()
}
