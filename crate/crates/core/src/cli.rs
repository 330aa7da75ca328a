//! The `rainbow` command line.
//!
//! Exit codes: 0 on success, 1 on a domain error (reported as one JSON object
//! on stderr), 2 on a usage error.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::coloring::{Coloring, ColoringError, ColoringFile};
use crate::generators::{self, parse_edge_line, FamilyTag, GenError, OrderStrategy, StreamError};
use crate::harness::{self, HarnessError, OracleMode, SweepConfig, TheoremSpec};
use crate::lruc::{LrucError, LrucState, TraceFooter, TraceRecord};
use crate::oracle::{self, OracleError, SearchBudget};

#[derive(Debug, Parser)]
#[command(
    name = "rainbow",
    version,
    about = "Online rainbow coloring with LRUC and an exact offline oracle"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a family graph as an edge list in the chosen arrival order.
    Generate(GenerateArgs),
    /// Color an edge stream online and print the JSON-lines trace.
    Color(ColorArgs),
    /// Compute the exact rainbow connection number of an edge list.
    Rc(RcArgs),
    /// Check whether a coloring file rainbow-connects a graph.
    Check(CheckArgs),
    /// Compare LRUC with the offline optimum on one instance or a sweep.
    Ratio(RatioArgs),
    /// Verify the competitive-ratio theorems on their adversarial orders.
    VerifyTheorems(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    Natural,
    Adversarial,
    Random,
}

impl From<OrderArg> for OrderStrategy {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Natural => OrderStrategy::Natural,
            OrderArg::Adversarial => OrderStrategy::Adversarial,
            OrderArg::Random => OrderStrategy::Random,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleArg {
    Exact,
    Closed,
    Skip,
}

impl From<OracleArg> for OracleMode {
    fn from(o: OracleArg) -> Self {
        match o {
            OracleArg::Exact => OracleMode::Exact,
            OracleArg::Closed => OracleMode::Closed,
            OracleArg::Skip => OracleMode::Skip,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// path, tree, star, cycle, wheel, complete or complete_bipartite.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long, value_enum, default_value = "natural")]
    pub order: OrderArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl FamilyArgs {
    fn tag(&self) -> Result<Option<FamilyTag>, GenError> {
        self.family
            .as_deref()
            .map(|f| FamilyTag::parse(f, self.n, self.p, self.q, self.seed))
            .transpose()
    }
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    /// Largest edge count the exact search accepts.
    #[arg(long, default_value_t = 16)]
    pub budget_edges: usize,
    /// Wall-clock limit for the exact search.
    #[arg(long, default_value_t = 300)]
    pub budget_seconds: u64,
}

impl BudgetArgs {
    fn budget(&self) -> SearchBudget {
        SearchBudget::default()
            .with_max_edges(self.budget_edges)
            .with_max_time(Some(Duration::from_secs(self.budget_seconds)))
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ColorArgs {
    /// Edge list; `-` or absent reads stdin.
    pub input: Option<PathBuf>,
    /// Also write the final coloring as JSON.
    #[arg(long)]
    pub coloring_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RcArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub budget: BudgetArgs,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub graph: PathBuf,
    pub coloring: PathBuf,
}

#[derive(Debug, Args)]
pub struct RatioArgs {
    /// Edge list to color; conflicts with generating from a family.
    #[arg(conflicts_with_all = ["family", "config"])]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Sweep configuration file (TOML key-value pairs).
    #[arg(long, conflicts_with = "family")]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "exact")]
    pub oracle: OracleArg,
    #[command(flatten)]
    pub budget: BudgetArgs,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Theorem ids (T1-line, T1-tree, T1-star, T2-cycle, T3-wheel, T4-complete); all when absent.
    #[arg(long = "theorem")]
    pub theorems: Vec<String>,
    #[arg(long, requires = "n_max")]
    pub n_min: Option<usize>,
    #[arg(long, requires = "n_min")]
    pub n_max: Option<usize>,
    #[command(flatten)]
    pub budget: BudgetArgs,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {source}")]
    Lruc { line: usize, source: LrucError },
    #[error(transparent)]
    Stream(#[from] StreamError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Harness(#[from] HarnessError),
    #[error("invalid coloring file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
    #[error("theorem verification failed: {0}")]
    TheoremFailed(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Serialize)]
struct ErrorLine<'a> {
    error: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    line: Option<usize>,
    message: String,
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Lruc { source, .. } => match source {
                LrucError::SelfLoop(_) => "SelfLoop",
                LrucError::DuplicateEdge(..) => "DuplicateEdge",
                LrucError::DisconnectedPrefix(..) => "DisconnectedPrefix",
                LrucError::EmptyStream => "EmptyStream",
            },
            CliError::Stream(e) => match e {
                StreamError::Parse { .. } => "ParseError",
                StreamError::SelfLoop { .. } => "SelfLoop",
                StreamError::DuplicateEdge { .. } => "DuplicateEdge",
                StreamError::DisconnectedPrefix { .. } => "DisconnectedPrefix",
                StreamError::Empty => "EmptyStream",
                StreamError::Io(_) => "IoError",
            },
            CliError::Gen(GenError::BadParameters(_)) => "BadParameters",
            CliError::Gen(GenError::Disconnected) => "Disconnected",
            CliError::Oracle(e) => oracle_kind(e),
            CliError::Coloring(_) | CliError::Json(_) => "InvalidColoring",
            CliError::Harness(e) => match e {
                HarnessError::Config { .. } => "ConfigError",
                HarnessError::Oracle(o) => oracle_kind(o),
                HarnessError::Gen(_) => "BadParameters",
                HarnessError::Stream(_) | HarnessError::Lruc(_) => "StreamError",
                HarnessError::Io(_) | HarnessError::Csv(_) => "IoError",
            },
            CliError::Usage(_) => "UsageError",
            CliError::TheoremFailed(_) => "TheoremFailed",
            CliError::Io(_) => "IoError",
        }
    }

    pub fn line(&self) -> Option<usize> {
        match self {
            CliError::Lruc { line, .. } => Some(*line),
            CliError::Stream(e) | CliError::Harness(HarnessError::Stream(e)) => e.line(),
            _ => None,
        }
    }

    /// One-line JSON description for stderr.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&ErrorLine {
            error: self.kind(),
            line: self.line(),
            message: self.to_string(),
        })
        .expect("error line serializes")
    }
}

fn oracle_kind(e: &OracleError) -> &'static str {
    match e {
        OracleError::IncompleteColoring(_) => "IncompleteColoring",
        OracleError::TooManyColors(_) => "TooManyColors",
        OracleError::UnknownVertex(_) => "UnknownVertex",
        OracleError::Disconnected => "Disconnected",
        OracleError::EmptyGraph => "EmptyStream",
        OracleError::BudgetExceeded(_) => "BudgetExceeded",
    }
}

fn open_output<'a>(
    path: Option<&Path>,
    stdout: &'a mut dyn Write,
) -> io::Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
        None => Box::new(stdout),
    })
}

/// Runs one parsed command.
pub fn run(cli: Cli, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Generate(a) => generate(a, stdout),
        Command::Color(a) => color(a, stdin, stdout),
        Command::Rc(a) => rc(a, stdout),
        Command::Check(a) => check(a, stdout),
        Command::Ratio(a) => ratio(a, stdin, stdout),
        Command::VerifyTheorems(a) => verify(a, stdout),
    }
}

fn generate(a: GenerateArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let family = a
        .family
        .tag()?
        .ok_or_else(|| CliError::Usage("--family is required".into()))?;
    let stream = generators::order_for(&family, a.family.order.into(), a.family.seed)?;
    let mut out = open_output(a.out.as_deref(), stdout)?;
    out.write_all(stream.to_edge_list().as_bytes())?;
    out.flush()?;
    Ok(())
}

fn color(a: ColorArgs, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<(), CliError> {
    let reader: Box<dyn BufRead + '_> = match a.input.as_deref() {
        Some(p) if p != Path::new("-") => Box::new(BufReader::new(File::open(p)?)),
        _ => Box::new(BufReader::new(stdin)),
    };
    let mut state = LrucState::new();
    for (i, text) in reader.lines().enumerate() {
        let text = text?;
        let Some(pair) = parse_edge_line(&text, i + 1) else {
            continue;
        };
        let (u, v) = pair?;
        let step = state
            .observe_edge(&u, &v)
            .map_err(|source| CliError::Lruc {
                line: i + 1,
                source,
            })?;
        let record = TraceRecord {
            u,
            v,
            color: step.color,
            case: step.case,
        };
        writeln!(stdout, "{}", serde_json::to_string(&record)?)?;
        stdout.flush()?;
    }
    let coloring = state.finish().map_err(|_| StreamError::Empty)?;
    let footer = TraceFooter {
        colors_used: coloring.colors_used(),
    };
    writeln!(stdout, "{}", serde_json::to_string(&footer)?)?;
    if let Some(path) = a.coloring_out {
        let file = coloring.to_file(state.graph());
        std::fs::write(path, serde_json::to_string(&file)? + "\n")?;
    }
    Ok(())
}

#[derive(Serialize)]
struct RcOutput {
    rc: usize,
    witness: ColoringFile,
}

fn rc(a: RcArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let g = generators::stream_from_file(&a.input)?.graph();
    let result = oracle::rc_exact(&g, a.budget.budget())?;
    let out = RcOutput {
        rc: result.rc,
        witness: result.witness.to_file(&g),
    };
    writeln!(stdout, "{}", serde_json::to_string(&out)?)?;
    Ok(())
}

#[derive(Serialize)]
struct CheckOutput {
    result: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    failing_pair: Option<[String; 2]>,
}

fn check(a: CheckArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let g = generators::stream_from_file(&a.graph)?.graph();
    let file: ColoringFile = serde_json::from_reader(BufReader::new(File::open(&a.coloring)?))?;
    let coloring = Coloring::from_file(&g, &file)?;
    let out = match oracle::first_failing_pair(&g, &coloring)? {
        None => CheckOutput {
            result: "pass",
            failing_pair: None,
        },
        Some((s, t)) => CheckOutput {
            result: "fail",
            failing_pair: Some([g.label(s).to_string(), g.label(t).to_string()]),
        },
    };
    writeln!(stdout, "{}", serde_json::to_string(&out)?)?;
    Ok(())
}

fn write_reports(
    reports: &[harness::RatioReport],
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    match format {
        Format::Csv => harness::write_csv(reports, &mut *out)?,
        Format::Json => {
            let rows: Vec<_> = reports.iter().map(|r| r.row()).collect();
            writeln!(out, "{}", serde_json::to_string(&rows)?)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn ratio(a: RatioArgs, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<(), CliError> {
    let budget = a.budget.budget();
    let reports = if let Some(cfg_path) = &a.config {
        let cfg = SweepConfig::parse(&std::fs::read_to_string(cfg_path)?)?;
        let reports = harness::sweep(&cfg)?;
        if let (Some(out), None) = (&cfg.out, &a.out) {
            let mut file = io::BufWriter::new(File::create(out)?);
            return write_reports(&reports, a.format, &mut file);
        }
        reports
    } else {
        let stream = match (&a.input, a.family.tag()?) {
            (_, Some(family)) => {
                generators::order_for(&family, a.family.order.into(), a.family.seed)?
            }
            (Some(p), None) if p != Path::new("-") => generators::stream_from_file(p)?,
            _ => generators::stream_from_reader(BufReader::new(stdin))?,
        };
        vec![harness::run_instance(&stream, a.oracle.into(), budget)?]
    };
    let mut out = open_output(a.out.as_deref(), stdout)?;
    write_reports(&reports, a.format, &mut out)
}

#[derive(Serialize)]
struct TheoremOutput {
    theorem: &'static str,
    passed: bool,
    rows: Vec<harness::ReportRow>,
}

fn verify(a: VerifyArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let theorems = if a.theorems.is_empty() {
        TheoremSpec::ALL.to_vec()
    } else {
        a.theorems
            .iter()
            .map(|id| {
                TheoremSpec::parse(id)
                    .ok_or_else(|| CliError::Usage(format!("unknown theorem {id}")))
            })
            .collect::<Result<_, _>>()?
    };
    let budget = a.budget.budget();
    let mut reports = Vec::new();
    for t in theorems {
        let range = match (a.n_min, a.n_max) {
            (Some(lo), Some(hi)) => lo..=hi,
            _ => t.default_range(),
        };
        reports.push(harness::verify_theorem(t, range, budget)?);
    }
    match a.format {
        Format::Json => {
            let out: Vec<_> = reports
                .iter()
                .map(|r| TheoremOutput {
                    theorem: r.theorem.id(),
                    passed: r.passed,
                    rows: r.rows.iter().map(|x| x.row()).collect(),
                })
                .collect();
            writeln!(stdout, "{}", serde_json::to_string_pretty(&out)?)?;
        }
        Format::Csv => {
            let rows: Vec<_> = reports
                .iter()
                .flat_map(|r| r.rows.iter().cloned())
                .collect();
            harness::write_csv(&rows, &mut *stdout)?;
        }
    }
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.theorem.id())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::TheoremFailed(failed.join(", ")))
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
            } else {
                let _ = write!(stdout, "{rendered}");
            }
            return code;
        }
    };
    match run(cli, stdin, stdout) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "{}", CliError::Usage(msg).to_json_line());
            2
        }
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.to_json_line());
            1
        }
    }
}
