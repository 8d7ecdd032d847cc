use std::fs::File;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use backbone_core::backbone::{
    auto_config_for, compute_backbone_with, Algorithm, AlgorithmConfig, BackboneError, ChunkStrategy, RunOptions,
};
use backbone_core::bench::{best_config_ranking, load_corpus, parse_config_list, run_matrix, write_csv, MatrixOptions};
use backbone_core::cnf::{formula_stats, parse_dimacs, write_dimacs_to, CnfError};
use backbone_core::preprocess::simplify_with_backbone;
use backbone_core::propagate::{propagate, PropagateError, PropagationResult};
use backbone_core::solver::{BackendId, SolverSession};
use backbone_core::{CnfFormula, Lit, Var};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Process exit status of the command-line tool.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    /// Bad arguments, or an operational failure unrelated to the input.
    Usage = 1,
    /// Unreadable or malformed input file.
    Parse = 2,
    /// The formula, or the formula with the given decisions, has no model.
    Unsatisfiable = 3,
    Timeout = 4,
}

impl ExitCode {
    pub fn code(self) -> i32 {
        self as i32
    }
}

impl From<ExitCode> for std::process::ExitCode {
    fn from(c: ExitCode) -> Self {
        std::process::ExitCode::from(c as u8)
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Parse { path: String, source: CnfError },
    #[error("{0}")]
    Input(String),
    #[error("formula is unsatisfiable")]
    Unsatisfiable,
    #[error("decisions conflict with the formula")]
    Conflict,
    #[error("time budget exhausted; {0} backbone literals confirmed")]
    Timeout(usize),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) | CliError::Other(_) => ExitCode::Usage,
            CliError::Parse { .. } | CliError::Input(_) => ExitCode::Parse,
            CliError::Unsatisfiable | CliError::Conflict => ExitCode::Unsatisfiable,
            CliError::Timeout(_) => ExitCode::Timeout,
        }
    }
}

impl From<BackboneError> for CliError {
    fn from(e: BackboneError) -> Self {
        match e {
            BackboneError::UnsatisfiableInput => CliError::Unsatisfiable,
            BackboneError::Timeout { partial } => CliError::Timeout(partial.len()),
            BackboneError::InvalidConfig(m) => CliError::Usage(m),
            e => CliError::Other(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Other(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "backbone", version, about = "Backbone extraction for CNF formulas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the backbone as one line of literals ascending by variable.
    Backbone(BackboneArgs),
    /// Print structural statistics.
    Stats {
        /// DIMACS file, or `-` for stdin.
        file: PathBuf,
    },
    /// Simplify a formula with its backbone; DIMACS on stdout.
    Simplify(SimplifyArgs),
    /// Propagate decisions and print implied and free variables.
    Propagate {
        file: PathBuf,
        /// Decision literals such as `1` or `-4`.
        #[arg(long = "decide", num_args = 1.., allow_negative_numbers = true)]
        decide: Vec<i32>,
    },
    /// Print models, one per line.
    Enumerate {
        file: PathBuf,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Run a configuration matrix over a corpus and write CSV.
    Bench(BenchArgs),
    /// Serve the propagation HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Idle seconds before a session is evicted.
        #[arg(long, default_value_t = 1800)]
        session_ttl: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AlgChoice {
    Enum,
    Naive,
    Iter,
    AllIn,
    AllOut,
    Auto,
}

#[derive(Args, Debug)]
struct BackboneArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = AlgChoice::Auto)]
    alg: AlgChoice,
    /// `fixed:K`, `adaptive:K` or `whole`; chunked algorithms only.
    #[arg(long)]
    chunk: Option<ChunkStrategy>,
    /// Add confirmed backbone literals as unit clauses.
    #[arg(long)]
    uc: bool,
    /// Drop rotatable literals from the candidates.
    #[arg(long)]
    rotatable: bool,
    /// Time budget in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Report algorithm, solve calls and time on stderr.
    #[arg(long)]
    stats: bool,
}

#[derive(Args, Debug)]
struct SimplifyArgs {
    file: PathBuf,
    /// File of backbone literals (whitespace separated, optional trailing 0).
    #[arg(long, conflicts_with = "compute", required_unless_present = "compute")]
    backbone_file: Option<PathBuf>,
    /// Compute the backbone first.
    #[arg(long)]
    compute: bool,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Directory of `*.cnf` files or a manifest of paths.
    #[arg(long)]
    corpus: PathBuf,
    /// One configuration id per line, such as `iter` or `all-out:adaptive:10`.
    #[arg(long)]
    configs: PathBuf,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long)]
    out: PathBuf,
    /// Budget per run, in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Run cells one at a time.
    #[arg(long)]
    sequential: bool,
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                ExitCode::Usage
            } else {
                ExitCode::Success
            };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(()) => ExitCode::Success,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Backbone(args) => cmd_backbone(args, out, err),
        Command::Stats { file } => cmd_stats(&file, out),
        Command::Simplify(args) => cmd_simplify(args, out, err),
        Command::Propagate { file, decide } => cmd_propagate(&file, &decide, out),
        Command::Enumerate { file, limit } => cmd_enumerate(&file, limit, out, err),
        Command::Bench(args) => cmd_bench(args, out, err),
        Command::Serve {
            port,
            host,
            session_ttl,
        } => crate::service::serve(&host, port, Duration::from_secs(session_ttl)).map_err(CliError::from),
    }
}

fn backend_from_env() -> Result<BackendId, CliError> {
    match std::env::var(BackendId::ENV_VAR) {
        Ok(name) if !name.is_empty() => name
            .parse()
            .map_err(|e: backbone_core::solver::SolverError| CliError::Usage(format!("{}: {e}", BackendId::ENV_VAR))),
        _ => Ok(BackendId::default()),
    }
}

fn read_formula(path: &Path) -> Result<CnfFormula, CliError> {
    let display = path.display().to_string();
    let parsed = if path == Path::new("-") {
        parse_dimacs(io::stdin().lock())
    } else {
        let file = File::open(path).map_err(|e| CliError::Input(format!("{display}: {e}")))?;
        parse_dimacs(file)
    };
    parsed
        .map(|p| p.formula)
        .map_err(|source| CliError::Parse { path: display, source })
}

fn seconds(s: f64) -> Result<Duration, CliError> {
    Duration::try_from_secs_f64(s).map_err(|_| CliError::Usage(format!("invalid duration `{s}`")))
}

fn format_lits(lits: impl IntoIterator<Item = Lit>) -> String {
    lits.into_iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
}

fn format_vars(vars: &[Var]) -> String {
    vars.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn backbone_config(args: &BackboneArgs, f: &CnfFormula) -> Result<AlgorithmConfig, CliError> {
    let algorithm = match args.alg {
        AlgChoice::Enum => Algorithm::Enumeration,
        AlgChoice::Naive => Algorithm::Naive,
        AlgChoice::Iter => Algorithm::Iterative,
        AlgChoice::AllIn => Algorithm::AllIn,
        AlgChoice::AllOut => Algorithm::AllOut,
        AlgChoice::Auto => {
            if args.chunk.is_some() {
                return Err(CliError::Usage("--chunk cannot be combined with --alg auto".into()));
            }
            return Ok(auto_config_for(f)
                .with_uc_injection(args.uc)
                .with_rotatable_filter(args.rotatable));
        }
    };
    let mut cfg = AlgorithmConfig::new(algorithm)
        .with_uc_injection(args.uc)
        .with_rotatable_filter(args.rotatable);
    if let Some(chunk) = args.chunk {
        if !algorithm.is_chunked() {
            return Err(CliError::Usage(format!(
                "--chunk applies to all-in and all-out, not {algorithm}"
            )));
        }
        cfg.chunk = chunk;
    }
    Ok(cfg)
}

fn cmd_backbone(args: BackboneArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let backend = backend_from_env()?;
    let timeout = args.timeout.map(seconds).transpose()?;
    let f = read_formula(&args.file)?;
    let cfg = backbone_config(&args, &f)?;
    let opts = RunOptions {
        timeout,
        backend,
        record_queries: false,
    };
    let report = compute_backbone_with(&f, &cfg, &opts)?;
    writeln!(out, "{}", format_lits(report.backbone.iter()))?;
    if args.stats {
        writeln!(err, "config: {}", report.config)?;
        writeln!(err, "sat_calls: {}", report.sat_calls)?;
        writeln!(err, "wall_seconds: {:.6}", report.wall_time.as_secs_f64())?;
        writeln!(err, "backbone_size: {}", report.backbone.len())?;
    }
    Ok(())
}

fn cmd_stats(file: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let s = formula_stats(&read_formula(file)?);
    writeln!(out, "num_vars: {}", s.num_vars)?;
    writeln!(out, "num_clauses: {}", s.num_clauses)?;
    match s.clause_var_ratio {
        Some(r) => writeln!(out, "clause_var_ratio: {r:.4}")?,
        None => writeln!(out, "clause_var_ratio: n/a")?,
    }
    writeln!(out, "median_literals_per_clause: {}", s.median_literals_per_clause)?;
    writeln!(out, "pct_clauses_gt2: {:.2}", s.pct_clauses_gt2)?;
    writeln!(out, "num_binary_or_unit: {}", s.num_binary_or_unit)?;
    writeln!(out, "auto_config: {}", backbone_core::backbone::auto_config(&s))?;
    Ok(())
}

fn read_literal_file(path: &Path) -> Result<Vec<Lit>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mut lits = Vec::new();
    for token in text.split_whitespace() {
        let v: i32 = token
            .parse()
            .map_err(|_| CliError::Input(format!("{}: invalid literal `{token}`", path.display())))?;
        match Lit::new(v) {
            Some(l) => lits.push(l),
            None => break,
        }
    }
    Ok(lits)
}

fn cmd_simplify(args: SimplifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let f = read_formula(&args.file)?;
    let backbone: Vec<Lit> = match &args.backbone_file {
        Some(path) => read_literal_file(path)?,
        None => {
            let opts = RunOptions {
                backend: backend_from_env()?,
                ..RunOptions::default()
            };
            compute_backbone_with(&f, &auto_config_for(&f), &opts)?
                .backbone
                .to_vec()
        }
    };
    let r = simplify_with_backbone(&f, &backbone).map_err(|e| CliError::Input(e.to_string()))?;
    write_dimacs_to(&r.simplified, &mut *out)?;
    writeln!(
        err,
        "units_added={} clauses_removed={} clauses_shortened={}",
        r.units_added, r.clauses_removed, r.clauses_shortened
    )?;
    Ok(())
}

fn write_propagation(r: &PropagationResult, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "decided: {}", format_lits(r.decided.iter()))?;
    writeln!(out, "implied_true: {}", format_vars(&r.implied_true))?;
    writeln!(out, "implied_false: {}", format_vars(&r.implied_false))?;
    writeln!(out, "free: {}", format_vars(&r.free))
}

fn cmd_propagate(file: &Path, decide: &[i32], out: &mut dyn Write) -> Result<(), CliError> {
    let f = read_formula(file)?;
    let decisions = decide
        .iter()
        .map(|&v| Lit::new(v).ok_or_else(|| CliError::Usage("decision literal 0".into())))
        .collect::<Result<Vec<_>, _>>()?;
    let r = propagate(&f, &decisions).map_err(|e| match e {
        PropagateError::ConflictingDecisions => CliError::Conflict,
        PropagateError::UnsatisfiableInput => CliError::Unsatisfiable,
        PropagateError::UnknownVariable(_) | PropagateError::AlreadyDecided(_) => CliError::Usage(e.to_string()),
        e => CliError::Other(e.to_string()),
    })?;
    write_propagation(&r, out)?;
    Ok(())
}

fn cmd_enumerate(file: &Path, limit: Option<usize>, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let f = read_formula(file)?;
    let mut session = SolverSession::new(&f, backend_from_env()?);
    let e = session.enumerate_solutions(limit);
    for m in &e.models {
        writeln!(out, "{}", format_lits(m.iter()))?;
    }
    writeln!(
        err,
        "models={} exhausted={} solve_calls={}",
        e.models.len(),
        e.exhausted,
        session.num_solve_calls()
    )?;
    if e.models.is_empty() {
        return Err(CliError::Unsatisfiable);
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    if args.repeats == 0 {
        return Err(CliError::Usage("--repeats must be at least 1".into()));
    }
    let corpus = load_corpus(&args.corpus).map_err(|e| CliError::Input(format!("{}: {e}", args.corpus.display())))?;
    let mut text = String::new();
    File::open(&args.configs)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| CliError::Input(format!("{}: {e}", args.configs.display())))?;
    let configs = parse_config_list(&text).map_err(|e| CliError::Usage(e.to_string()))?;
    let opts = MatrixOptions {
        repeats: args.repeats,
        timeout: args.timeout.map(seconds).transpose()?,
        parallel: !args.sequential,
        backend: backend_from_env()?,
    };
    let records = run_matrix(&corpus, &configs, &opts).map_err(|e| CliError::Other(e.to_string()))?;
    let file = File::create(&args.out)?;
    write_csv(&records, args.repeats, io::BufWriter::new(file)).map_err(|e| CliError::Other(e.to_string()))?;
    for r in records.iter().filter(|r| r.message.is_some()) {
        writeln!(
            err,
            "{} {}: {} ({})",
            r.formula_id,
            r.config_id,
            r.status,
            r.message.as_deref().unwrap_or_default()
        )?;
    }
    writeln!(out, "config_id,win_percent")?;
    for (config, pct) in best_config_ranking(&records) {
        writeln!(out, "{config},{pct:.2}")?;
    }
    Ok(())
}
