mod common;

use std::fs;
use std::time::Duration;

use backbone_core::backbone::{Algorithm, AlgorithmConfig, ChunkStrategy};
use backbone_core::bench::{best_config_ranking, load_corpus, run_matrix, write_csv, MatrixOptions, RunStatus};
use backbone_core::write_dimacs;
use common::*;

fn two_configs() -> Vec<AlgorithmConfig> {
    vec![
        AlgorithmConfig::new(Algorithm::Iterative),
        AlgorithmConfig::new(Algorithm::AllOut).with_chunk(ChunkStrategy::Fixed(5)),
    ]
}

#[test]
fn empty_corpus_gives_no_records() {
    let records = run_matrix(&[], &two_configs(), &MatrixOptions::default()).unwrap();
    assert!(records.is_empty());
}

#[test]
fn running_example_two_configs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("running_example.cnf");
    fs::write(&path, write_dimacs(&running_example())).unwrap();
    let records = run_matrix(&[path], &two_configs(), &MatrixOptions::default()).unwrap();
    assert_eq!(records.len(), 2);
    for r in &records {
        assert_eq!(r.status, RunStatus::Ok);
        assert_eq!(r.backbone_size, 3);
        assert_eq!(r.times.len(), 3);
        assert_eq!(r.backbone.as_ref(), Some(&set(&[-1, 3, 4])));
    }
    assert_eq!(records[0].backbone, records[1].backbone);
}

#[test]
fn errors_and_timeouts_are_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("a.cnf");
    fs::write(&good, write_dimacs(&busybox())).unwrap();
    let truncated = dir.path().join("b.cnf");
    fs::write(&truncated, "p cnf 3 2\n1 2 0\n-1 3").unwrap();
    let missing = dir.path().join("missing.cnf");
    let corpus = vec![good, truncated, missing];

    let records = run_matrix(&corpus, &two_configs(), &MatrixOptions::default()).unwrap();
    let statuses: Vec<RunStatus> = records.iter().map(|r| r.status).collect();
    assert_eq!(statuses[..2], [RunStatus::Ok, RunStatus::Ok]);
    assert!(statuses[2..].iter().all(|s| *s == RunStatus::Error));

    let opts = MatrixOptions {
        timeout: Some(Duration::ZERO),
        ..MatrixOptions::default()
    };
    let records = run_matrix(&corpus[..1], &two_configs(), &opts).unwrap();
    assert!(records
        .iter()
        .all(|r| r.status == RunStatus::Timeout && r.median_time.is_none()));
    // timed-out cells never win
    assert!(best_config_ranking(&records).iter().all(|(_, pct)| *pct == 0.0));
}

#[test]
fn csv_layout_and_corpus_loading() {
    let dir = tempfile::tempdir().unwrap();
    for (i, (f, _)) in satisfiable_corpus(41, 5).iter().enumerate() {
        fs::write(dir.path().join(format!("f{i}.cnf")), write_dimacs(f)).unwrap();
    }
    fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
    let corpus = load_corpus(dir.path()).unwrap();
    assert_eq!(corpus.len(), 5);

    let manifest = dir.path().join("manifest.txt");
    fs::write(&manifest, "# corpus\nf0.cnf\n\nf3.cnf\n").unwrap();
    assert_eq!(
        load_corpus(&manifest).unwrap(),
        vec![dir.path().join("f0.cnf"), dir.path().join("f3.cnf")]
    );

    let opts = MatrixOptions {
        repeats: 2,
        parallel: false,
        ..MatrixOptions::default()
    };
    let records = run_matrix(&corpus, &all_configs(), &opts).unwrap();
    let mut out = Vec::new();
    write_csv(&records, 2, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "formula_id,config_id,status,median_seconds,run1,run2,sat_calls,backbone_size"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5 * all_configs().len());
    for row in rows {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells.len(), 8);
        assert_eq!(cells[2], "OK");
        assert!(cells[3].parse::<f64>().unwrap() >= 0.0);
    }
}

#[test]
fn parallel_and_sequential_agree() {
    let dir = tempfile::tempdir().unwrap();
    let mut corpus = Vec::new();
    for (i, (f, _)) in satisfiable_corpus(42, 8).iter().enumerate() {
        let p = dir.path().join(format!("f{i}.cnf"));
        fs::write(&p, write_dimacs(f)).unwrap();
        corpus.push(p);
    }
    let strip = |parallel| {
        let opts = MatrixOptions {
            repeats: 1,
            parallel,
            ..MatrixOptions::default()
        };
        run_matrix(&corpus, &all_configs(), &opts)
            .unwrap()
            .into_iter()
            .map(|r| (r.formula_id, r.config_id, r.sat_calls, r.backbone))
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(true), strip(false));
}
