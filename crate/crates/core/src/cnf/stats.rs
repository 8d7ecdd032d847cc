use super::formula::CnfFormula;

/// Structural summary of a formula.
#[derive(Clone, Debug, PartialEq)]
pub struct FormulaStats {
    pub num_vars: usize,
    pub num_clauses: usize,
    /// `num_clauses / num_vars`; `None` when the formula has no variables.
    pub clause_var_ratio: Option<f64>,
    /// Median clause length; 0 for a formula without clauses.
    pub median_literals_per_clause: f64,
    /// Share of clauses with more than two literals, in percent.
    pub pct_clauses_gt2: f64,
    pub num_binary_or_unit: usize,
}

pub fn formula_stats(f: &CnfFormula) -> FormulaStats {
    let mut lengths: Vec<usize> = f.clauses().iter().map(|c| c.len()).collect();
    lengths.sort_unstable();
    let n = lengths.len();
    let median = match n {
        0 => 0.0,
        _ if n % 2 == 1 => lengths[n / 2] as f64,
        _ => (lengths[n / 2 - 1] + lengths[n / 2]) as f64 / 2.0,
    };
    let gt2 = lengths.iter().filter(|&&l| l > 2).count();
    FormulaStats {
        num_vars: f.num_vars(),
        num_clauses: n,
        clause_var_ratio: (f.num_vars() > 0).then(|| n as f64 / f.num_vars() as f64),
        median_literals_per_clause: median,
        pct_clauses_gt2: if n == 0 { 0.0 } else { gt2 as f64 * 100.0 / n as f64 },
        num_binary_or_unit: n - gt2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn running_example_stats() {
        let f = CnfFormula::from_dimacs_clauses(7, &[&[-1], &[-1, 2], &[1, 3], &[-3, 4], &[-3, 5, 6], &[6, -7]]);
        let s = formula_stats(&f);
        assert_eq!(s.num_vars, 7);
        assert_eq!(s.num_clauses, 6);
        assert!((s.clause_var_ratio.unwrap() - 6.0 / 7.0).abs() < 1e-12);
        assert_eq!(s.median_literals_per_clause, 2.0);
        assert!((s.pct_clauses_gt2 - 100.0 / 6.0).abs() < 1e-12);
        assert_eq!(s.num_binary_or_unit, 5);
    }

    #[test]
    fn single_unit_clause() {
        let s = formula_stats(&CnfFormula::from_dimacs_clauses(1, &[&[1]]));
        assert_eq!(s.clause_var_ratio, Some(1.0));
        assert_eq!(s.median_literals_per_clause, 1.0);
        assert_eq!(s.pct_clauses_gt2, 0.0);
    }

    #[test]
    fn no_variables_has_no_ratio() {
        let s = formula_stats(&CnfFormula::new(0));
        assert_eq!(s.clause_var_ratio, None);
        assert_eq!(s.median_literals_per_clause, 0.0);
    }
}
