use std::fmt;
use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use rayon::prelude::*;

use crate::backbone::{compute_backbone_with, AlgorithmConfig, BackboneError, RunOptions};
use crate::cnf::{parse_dimacs, CnfFormula, LiteralSet};
use crate::solver::BackendId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RunStatus {
    Ok,
    Timeout,
    Error,
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunStatus::Ok => "OK",
            RunStatus::Timeout => "TIMEOUT",
            RunStatus::Error => "ERROR",
        })
    }
}

/// One (formula, configuration) cell of the matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub formula_id: String,
    pub config_id: String,
    pub status: RunStatus,
    /// Median of `times`; present iff every repeat completed.
    pub median_time: Option<Duration>,
    /// Completed repeats, in execution order.
    pub times: Vec<Duration>,
    pub sat_calls: usize,
    pub backbone_size: usize,
    pub backbone: Option<LiteralSet>,
    pub message: Option<String>,
}

#[derive(Clone, Debug)]
pub struct MatrixOptions {
    pub repeats: usize,
    /// Budget per repeat.
    pub timeout: Option<Duration>,
    /// Run cells on the rayon pool; otherwise one after another.
    pub parallel: bool,
    pub backend: BackendId,
}

impl Default for MatrixOptions {
    fn default() -> Self {
        MatrixOptions {
            repeats: 3,
            timeout: None,
            parallel: true,
            backend: BackendId::default(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("repeats must be at least 1")]
    NoRepeats,
    #[error("configurations `{config_a}` and `{config_b}` disagree on the backbone of `{formula_id}`")]
    BackboneMismatch {
        formula_id: String,
        config_a: String,
        config_b: String,
    },
    #[error("invalid configuration on line {line}: {message}")]
    ConfigList { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Median of a non-empty sample; the mean of the two middle values for
/// even lengths.
pub fn median(times: &[Duration]) -> Option<Duration> {
    let mut sorted = times.to_vec();
    sorted.sort();
    let n = sorted.len();
    match n {
        0 => None,
        _ if n % 2 == 1 => Some(sorted[n / 2]),
        _ => Some((sorted[n / 2 - 1] + sorted[n / 2]) / 2),
    }
}

/// Corpus files: every `*.cnf` in a directory (sorted), or the non-blank,
/// non-`#` lines of a manifest file, resolved against the manifest's
/// directory.
pub fn load_corpus(path: &Path) -> io::Result<Vec<PathBuf>> {
    if path.is_dir() {
        let mut files = Vec::new();
        for entry in std::fs::read_dir(path)? {
            let p = entry?.path();
            if p.is_file() && p.extension().is_some_and(|e| e == "cnf") {
                files.push(p);
            }
        }
        files.sort();
        return Ok(files);
    }
    let base = path.parent().unwrap_or(Path::new(""));
    Ok(std::fs::read_to_string(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| base.join(l))
        .collect())
}

/// One configuration id per line; blank lines and `#` comments ignored.
pub fn parse_config_list(text: &str) -> Result<Vec<AlgorithmConfig>, BenchError> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or_default().trim()))
        .filter(|(_, l)| !l.is_empty())
        .map(|(line, l)| {
            l.parse().map_err(|e: BackboneError| BenchError::ConfigList {
                line,
                message: e.to_string(),
            })
        })
        .collect()
}

fn formula_id(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn load(path: &Path) -> Result<CnfFormula, String> {
    let file = File::open(path).map_err(|e| e.to_string())?;
    parse_dimacs(BufReader::new(file))
        .map(|p| p.formula)
        .map_err(|e| e.to_string())
}

/// Runs every configuration on every corpus file.
///
/// Parsing happens once per file and is not timed. Unreadable or
/// unsatisfiable formulas yield `ERROR` records; the run goes on. After all
/// cells finish, the backbones of `OK` cells are compared per formula and a
/// disagreement is an error.
pub fn run_matrix(
    corpus: &[PathBuf],
    configs: &[AlgorithmConfig],
    opts: &MatrixOptions,
) -> Result<Vec<RunRecord>, BenchError> {
    if opts.repeats == 0 {
        return Err(BenchError::NoRepeats);
    }
    let formulas: Vec<(String, Result<CnfFormula, String>)> = corpus.iter().map(|p| (formula_id(p), load(p))).collect();
    let cells: Vec<(usize, usize)> = (0..formulas.len())
        .flat_map(|f| (0..configs.len()).map(move |c| (f, c)))
        .collect();
    let run_cell = |&(fi, ci): &(usize, usize)| {
        let (id, formula) = &formulas[fi];
        run_cell(id, formula, &configs[ci], opts)
    };
    let records: Vec<RunRecord> = if opts.parallel {
        cells.par_iter().map(run_cell).collect()
    } else {
        cells.iter().map(run_cell).collect()
    };
    check_agreement(&records)?;
    Ok(records)
}

fn run_cell(
    formula_id: &str,
    formula: &Result<CnfFormula, String>,
    cfg: &AlgorithmConfig,
    opts: &MatrixOptions,
) -> RunRecord {
    let mut record = RunRecord {
        formula_id: formula_id.to_string(),
        config_id: cfg.to_string(),
        status: RunStatus::Ok,
        median_time: None,
        times: Vec::with_capacity(opts.repeats),
        sat_calls: 0,
        backbone_size: 0,
        backbone: None,
        message: None,
    };
    let f = match formula {
        Ok(f) => f,
        Err(e) => {
            record.status = RunStatus::Error;
            record.message = Some(e.clone());
            return record;
        }
    };
    let run_opts = RunOptions {
        timeout: opts.timeout,
        backend: opts.backend,
        record_queries: false,
    };
    for _ in 0..opts.repeats {
        match compute_backbone_with(f, cfg, &run_opts) {
            Ok(report) => {
                record.times.push(report.wall_time);
                record.sat_calls = report.sat_calls;
                record.backbone_size = report.backbone.len();
                record.backbone = Some(report.backbone);
            }
            Err(e) => {
                record.status = match e {
                    BackboneError::Timeout { .. } => RunStatus::Timeout,
                    _ => RunStatus::Error,
                };
                record.message = Some(e.to_string());
                record.backbone = None;
                return record;
            }
        }
    }
    record.median_time = median(&record.times);
    record
}

fn check_agreement(records: &[RunRecord]) -> Result<(), BenchError> {
    let mut reference: std::collections::HashMap<&str, &RunRecord> = std::collections::HashMap::new();
    for r in records.iter().filter(|r| r.status == RunStatus::Ok) {
        match reference.get(r.formula_id.as_str()) {
            Some(first) if first.backbone != r.backbone => {
                return Err(BenchError::BackboneMismatch {
                    formula_id: r.formula_id.clone(),
                    config_a: first.config_id.clone(),
                    config_b: r.config_id.clone(),
                })
            }
            Some(_) => {}
            None => {
                reference.insert(&r.formula_id, r);
            }
        }
    }
    Ok(())
}

/// Writes `formula_id,config_id,status,median_seconds,run1..runN,sat_calls,backbone_size`.
/// Cells without a value are left empty.
pub fn write_csv<W: Write>(records: &[RunRecord], repeats: usize, out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec![
        "formula_id".to_string(),
        "config_id".into(),
        "status".into(),
        "median_seconds".into(),
    ];
    header.extend((1..=repeats).map(|i| format!("run{i}")));
    header.extend(["sat_calls".to_string(), "backbone_size".into()]);
    w.write_record(&header)?;
    let secs = |d: Option<&Duration>| d.map(|d| format!("{:.9}", d.as_secs_f64())).unwrap_or_default();
    for r in records {
        let mut row = vec![
            r.formula_id.clone(),
            r.config_id.clone(),
            r.status.to_string(),
            secs(r.median_time.as_ref()),
        ];
        row.extend((0..repeats).map(|i| secs(r.times.get(i))));
        let ok = r.status == RunStatus::Ok;
        row.push(if ok { r.sat_calls.to_string() } else { String::new() });
        row.push(if ok { r.backbone_size.to_string() } else { String::new() });
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
