//! Benchmark harness: run matrix, CSV output, rankings and statistics.

mod matrix;
mod stats;

use std::collections::{BTreeMap, BTreeSet};

pub use matrix::{
    load_corpus, median, parse_config_list, run_matrix, write_csv, BenchError, MatrixOptions, RunRecord, RunStatus,
};
pub use stats::{
    average_ranks, percent_reduction, spearman_rho, spread_percent, wilcoxon_signed_rank, EffectSize, StatsError,
    StatsSummary,
};

/// Share of formulas on which each configuration had the shortest median
/// time, in percent, best first.
///
/// Only `OK` records compete and only formulas with at least one `OK`
/// record count. Tied winners all get the formula.
pub fn best_config_ranking(records: &[RunRecord]) -> Vec<(String, f64)> {
    let mut configs: BTreeSet<&str> = BTreeSet::new();
    let mut per_formula: BTreeMap<&str, Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        configs.insert(&r.config_id);
        if r.status == RunStatus::Ok && r.median_time.is_some() {
            per_formula.entry(&r.formula_id).or_default().push(r);
        }
    }
    let mut wins: BTreeMap<&str, usize> = configs.iter().map(|&c| (c, 0)).collect();
    for rs in per_formula.values() {
        let best = rs.iter().filter_map(|r| r.median_time).min().expect("non-empty group");
        for r in rs.iter().filter(|r| r.median_time == Some(best)) {
            *wins.get_mut(r.config_id.as_str()).expect("known config") += 1;
        }
    }
    let total = per_formula.len();
    let mut ranking: Vec<(String, f64)> = wins
        .into_iter()
        .map(|(c, w)| {
            let pct = if total == 0 {
                0.0
            } else {
                w as f64 * 100.0 / total as f64
            };
            (c.to_string(), pct)
        })
        .collect();
    ranking.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranking
}
