mod common;

use backbone_core::cnf::{formula_stats, parse_dimacs_str, write_dimacs};
use backbone_core::{CnfFormula, Lit, LiteralSet};
use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn dimacs_round_trip_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let f = random_cnf(&mut rng);
        let text = write_dimacs(&f);
        let parsed = parse_dimacs_str(&text).unwrap();
        assert_eq!(parsed.formula, f);
        assert_eq!(write_dimacs(&parsed.formula), text);
    }
}

#[test]
fn running_example_fixture() {
    let text = "c a..g = 1..7\np cnf 7 6\n-1 0\n-1 2 0\n1 3 0\n-3 4 0\n-3 5 6 0\n6 -7 0\n";
    let parsed = parse_dimacs_str(text).unwrap();
    assert_eq!(parsed.formula, running_example());
    let out = write_dimacs(&running_example());
    assert!(out.starts_with("p cnf 7 6\n"));
    assert_eq!(out.lines().count(), 7);
    let s = formula_stats(&running_example());
    assert_eq!((s.num_vars, s.num_clauses), (7, 6));
    assert!((s.clause_var_ratio.unwrap() - 6.0 / 7.0).abs() < 1e-12);
    assert_eq!(s.median_literals_per_clause, 2.0);
    assert!((s.pct_clauses_gt2 - 100.0 / 6.0).abs() < 1e-12);
}

#[test]
fn worked_model_complement() {
    let s = set(&[-1, -2, 3, 4, 5, -6, -7]);
    assert_eq!(s.complement(), set(&[1, 2, -3, -4, -5, 6, 7]));
    assert!(running_example().is_satisfied_by(&s));
}

fn literal_set(n: i32) -> impl Strategy<Value = LiteralSet> {
    proptest::collection::vec((1..=n, any::<bool>()), 0..(n as usize * 2)).prop_map(|pairs| {
        let mut s = LiteralSet::new();
        for (v, pos) in pairs {
            let l = Lit::new(if pos { v } else { -v }).unwrap();
            let _ = s.try_insert(l);
        }
        s
    })
}

fn total_model(n: usize) -> impl Strategy<Value = LiteralSet> {
    proptest::collection::vec(any::<bool>(), n).prop_map(|v| LiteralSet::from_assignment(&v))
}

fn formula() -> impl Strategy<Value = CnfFormula> {
    (1usize..10).prop_flat_map(|n| {
        let lit = (1..=n as i32, any::<bool>()).prop_map(|(v, p)| if p { v } else { -v });
        proptest::collection::vec(proptest::collection::vec(lit, 1..5), 0..20).prop_map(move |clauses| {
            let text = format!(
                "p cnf {n} {}\n{}",
                clauses.len(),
                clauses
                    .iter()
                    .map(|c| c.iter().map(|l| format!("{l} ")).collect::<String>() + "0\n")
                    .collect::<String>()
            );
            parse_dimacs_str(&text).unwrap().formula
        })
    })
}

proptest! {
    #[test]
    fn candidates_minus_flipped_model_is_intersection(c in literal_set(12), s in total_model(12)) {
        prop_assert_eq!(c.difference(&s.complement()), c.intersection(&s));
    }

    #[test]
    fn complement_is_an_involution(c in literal_set(12)) {
        prop_assert_eq!(c.complement().complement(), c.clone());
        prop_assert_eq!(c.complement().len(), c.len());
    }

    #[test]
    fn sets_never_hold_both_polarities(c in literal_set(12)) {
        prop_assert!(c.iter().all(|l| !c.contains(!l)));
    }

    #[test]
    fn normalized_formulas_round_trip(f in formula()) {
        let reparsed = parse_dimacs_str(&write_dimacs(&f)).unwrap();
        prop_assert_eq!(&reparsed.formula, &f);
        prop_assert_eq!(reparsed.normalization.tautologies, 0);
        prop_assert_eq!(reparsed.normalization.duplicate_literals, 0);
        prop_assert_eq!(f.literals().count(), 2 * f.num_vars());
    }

    #[test]
    fn stats_stay_in_range(f in formula()) {
        let s = formula_stats(&f);
        prop_assert!((0.0..=100.0).contains(&s.pct_clauses_gt2));
        prop_assert!(s.num_binary_or_unit <= s.num_clauses);
    }
}
