mod common;

use backbone_core::bench::{average_ranks, percent_reduction, spearman_rho, spread_percent, wilcoxon_signed_rank};
use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOLERANCE: f64 = 0.02;

fn exact_p(pairs: &[(f64, f64)]) -> f64 {
    let diffs: Vec<f64> = pairs.iter().map(|(a, b)| a - b).filter(|d| *d != 0.0).collect();
    let ranks = ranks_by_counting(&diffs.iter().map(|d| d.abs()).collect::<Vec<_>>());
    let w: f64 = diffs
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| r)
        .sum();
    exact_signed_rank_p(&ranks, w)
}

#[test]
fn six_pairs_all_faster() {
    let pairs = [(5.0, 4.0), (7.0, 5.0), (3.0, 2.5), (9.0, 6.0), (4.0, 3.6), (8.0, 7.2)];
    let s = wilcoxon_signed_rank(&pairs).unwrap();
    assert!(
        (s.p_value - exact_p(&pairs)).abs() <= TOLERANCE,
        "{} vs {}",
        s.p_value,
        exact_p(&pairs)
    );
    assert_eq!(s.n_effective, 6);
}

#[test]
fn eight_pairs_mixed_signs() {
    let pairs = [
        (1.0, 0.5),
        (2.0, 2.7),
        (3.0, 1.9),
        (4.0, 4.2),
        (5.0, 3.6),
        (6.0, 3.1),
        (7.0, 7.05),
        (8.0, 5.4),
    ];
    let s = wilcoxon_signed_rank(&pairs).unwrap();
    assert!((s.p_value - exact_p(&pairs)).abs() <= TOLERANCE);
}

/// Every sign pattern over ranks 1..n, for each n where the normal
/// approximation is claimed to hold.
#[test]
fn every_sign_pattern_within_tolerance() {
    for n in 5..=10usize {
        for mask in 0u32..1 << n {
            let pairs: Vec<(f64, f64)> = (0..n)
                .map(|i| {
                    let d = (i + 1) as f64;
                    if mask >> i & 1 == 1 {
                        (d, 0.0)
                    } else {
                        (0.0, d)
                    }
                })
                .collect();
            let s = wilcoxon_signed_rank(&pairs).unwrap();
            let exact = exact_p(&pairs);
            assert!(
                (s.p_value - exact).abs() <= TOLERANCE,
                "n={n} mask={mask:b}: {} vs {exact}",
                s.p_value
            );
        }
    }
}

#[test]
fn tie_correction_lowers_variance() {
    // all magnitudes tied: the corrected variance is n(n+1)(3n+3)/48
    let pairs: Vec<(f64, f64)> = (0..8).map(|i| if i < 6 { (1.0, 0.0) } else { (0.0, 1.0) }).collect();
    let s = wilcoxon_signed_rank(&pairs).unwrap();
    assert_eq!(s.w_plus, 6.0 * 4.5);
    let sd = (8.0f64 * 9.0 * 27.0 / 48.0).sqrt();
    assert!((s.z - (27.0 - 18.0 - 0.5) / sd).abs() < 1e-12);
}

#[test]
fn effect_size_and_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..200 {
        let n = rng.gen_range(1..=30);
        let pairs: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
        let s = wilcoxon_signed_rank(&pairs).unwrap();
        assert!((0.0..=1.0).contains(&s.p_value));
        assert!(s.effect_r >= 0.0);
    }
}

#[test]
fn spearman_with_ties_matches_oracle() {
    let xs = [1.0, 2.0, 2.0, 3.0, 5.0, 5.0, 5.0, 8.0];
    let ys = [2.0, 1.0, 4.0, 4.0, 3.0, 9.0, 7.0, 7.0];
    let expected = pearson(&ranks_by_counting(&xs), &ranks_by_counting(&ys));
    assert!((spearman_rho(&xs, &ys).unwrap() - expected).abs() < 1e-9);
}

#[test]
fn rational_fixtures() {
    assert_eq!(percent_reduction(10.0, 4.0).unwrap(), 60.0);
    assert_eq!(percent_reduction(4.0, 10.0).unwrap(), -150.0);
    assert_eq!(percent_reduction(2.5, 2.5).unwrap(), 0.0);
    assert_eq!(spread_percent(1.0, 3.0).unwrap(), 100.0);
    assert_eq!(spread_percent(2.0, 6.0).unwrap(), 100.0);
    assert_eq!(spread_percent(0.5, 0.5).unwrap(), 0.0);
    assert!(percent_reduction(0.0, 1.0).is_err());
    assert!(spread_percent(0.0, 0.0).is_err());
}

proptest! {
    #[test]
    fn spearman_equals_pearson_on_ranks(
        pairs in proptest::collection::vec((0u8..6, 0u8..6), 2..30)
    ) {
        let xs: Vec<f64> = pairs.iter().map(|p| p.0 as f64).collect();
        let ys: Vec<f64> = pairs.iter().map(|p| p.1 as f64).collect();
        let rx = ranks_by_counting(&xs);
        let ry = ranks_by_counting(&ys);
        prop_assert_eq!(average_ranks(&xs), rx.clone());
        match spearman_rho(&xs, &ys) {
            Ok(rho) => prop_assert!((rho - pearson(&rx, &ry)).abs() < 1e-9),
            Err(_) => prop_assert!(xs.iter().all(|&x| x == xs[0]) || ys.iter().all(|&y| y == ys[0])),
        }
    }

    #[test]
    fn reduction_is_exact_on_integers(b in 1u32..10_000, n in 0u32..10_000) {
        let got = percent_reduction(b as f64, n as f64).unwrap();
        let expected = (b as f64 - n as f64) * 100.0 / b as f64;
        prop_assert_eq!(got, expected);
        prop_assert!(got <= 100.0);
    }
}
