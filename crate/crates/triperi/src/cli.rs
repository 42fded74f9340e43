//! Command-line surface.
//!
//! Exit codes: 0 success, 1 negative outcome (axiom failure, condition not
//! met, stalled solve, uncertified table), 2 usage, input or capacity
//! errors, 3 a period-two return found by `solve`.

use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;
use triperi_core::{
    classify_with, distance, finite_triple_ratio, make_paper_space, make_three_point_example, picard_solve,
    star_triple_ratio, verify_metric_axioms, FiniteSpace, MetricSpace, NumericMode, PaperSpaceParams, PointRef, Scalar,
    SelfMap, SolveStatus, TableMap, ThreePointVariant, TripleScan,
};

use crate::fmap::{parse_fmap, write_fmap};
use crate::fms::{load_fms, parse_fms, write_fms, FormatError};
use crate::parallel::{map_indexed, scan_parallel, threads_from_env, ThreadsError};
use crate::report::{
    num, ClassifyResult, Format, Maximum, PaperTable, ReportDocument, SolveReport, StarRow, VerifyResult,
};

/// Published bound on the chain's perimeter coefficient.
const CHAIN_ALPHA: (i128, i128) = (7, 8);

#[derive(Debug, Parser)]
#[command(name = "triperi", version, about = "Perimeter-contracting maps on metric spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that an FMS file describes a metric.
    Verify(VerifyArgs),
    /// Compute the perimeter and Lipschitz coefficients of a map.
    Classify(ClassifyArgs),
    /// Iterate a map from a starting point.
    Solve(SolveArgs),
    /// Tabulate the chain's triple ratios and certify its coefficient.
    PaperTable(ChainArgs),
    /// Write a window of the chain as FMS (and optionally FMAP) files.
    Materialize(MaterializeArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["space", "paper_example", "paper_space"])))]
pub struct SourceArgs {
    /// FMS space file; requires --map.
    #[arg(long, requires = "map")]
    pub space: Option<PathBuf>,
    /// FMAP map file over --space.
    #[arg(long, requires = "space")]
    pub map: Option<PathBuf>,
    /// Built-in three-point example.
    #[arg(long, value_enum, ignore_case = true)]
    pub paper_example: Option<Variant>,
    /// Built-in chain space with its shift map.
    #[arg(long)]
    pub paper_space: bool,
    /// Chain scale `a` (integer, `num/den` or decimal).
    #[arg(long, requires = "paper_space")]
    pub scale: Option<String>,
    /// Evaluate the chain in floating point.
    #[arg(long, requires = "paper_space")]
    pub float: bool,
    /// Enumeration window; the chain defaults to 64, finite spaces to all points.
    #[arg(long)]
    pub window: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Starting point: a name for files, `x_<i>`, `<i>` or `x*` for the chain.
    #[arg(long)]
    pub start: String,
    #[arg(long)]
    pub alpha: String,
    #[arg(long, default_value = "1/1000000")]
    pub tol: String,
    #[arg(long, default_value_t = 1000)]
    pub max_iter: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ChainArgs {
    #[arg(long, default_value_t = triperi_core::paper::DEFAULT_WINDOW)]
    pub window: usize,
    #[arg(long)]
    pub scale: Option<String>,
    #[arg(long)]
    pub float: bool,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct MaterializeArgs {
    #[arg(long, default_value_t = triperi_core::paper::DEFAULT_WINDOW)]
    pub window: usize,
    #[arg(long)]
    pub scale: Option<String>,
    /// Destination of the FMS file; standard output if omitted.
    #[arg(long)]
    pub out_space: Option<PathBuf>,
    /// Destination of the FMAP file; needs --remap-boundary-to-star.
    #[arg(long)]
    pub out_map: Option<PathBuf>,
    /// Accept that the last window point, whose image lies outside the
    /// window, is mapped to `x*` in the written map.
    #[arg(long)]
    pub remap_boundary_to_star: bool,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Format { path: String, source: FormatError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] triperi_core::Error),
    #[error(transparent)]
    Threads(#[from] ThreadsError),
    #[error("{0}")]
    Usage(String),
}

/// Captured result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome::ok(0, text)
            };
        }
    };
    match execute(cli.command) {
        Ok(outcome) => outcome,
        Err(e) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

pub fn execute(command: Command) -> Result<Outcome, CliError> {
    let threads = threads_from_env()?;
    match command {
        Command::Verify(args) => cmd_verify(&args),
        Command::Classify(args) => cmd_classify(&args, threads),
        Command::Solve(args) => cmd_solve(&args),
        Command::PaperTable(args) => cmd_paper_table(&args, threads),
        Command::Materialize(args) => cmd_materialize(&args),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn format_err(path: &Path) -> impl FnOnce(FormatError) -> CliError + '_ {
    move |source| CliError::Format {
        path: path.display().to_string(),
        source,
    }
}

fn parse_number(flag: &str, text: &str, mode: NumericMode) -> Result<Scalar, CliError> {
    Scalar::parse(text, mode).map_err(|e| CliError::Usage(format!("invalid --{flag} `{text}`: {e}")))
}

fn chain_params(scale: Option<&str>, float: bool, window: usize) -> Result<PaperSpaceParams, CliError> {
    let mode = if float { NumericMode::Float } else { NumericMode::Exact };
    let scale = parse_number("scale", scale.unwrap_or("1"), mode)?;
    Ok(PaperSpaceParams::new(scale, window)?)
}

type DynSpace = Box<dyn MetricSpace + Sync>;
type DynMap = Box<dyn SelfMap + Sync>;

struct Loaded {
    space: DynSpace,
    map: DynMap,
    window: Option<usize>,
    inputs: Vec<String>,
    chain: bool,
}

fn load_source(src: &SourceArgs) -> Result<Loaded, CliError> {
    if let (Some(space_path), Some(map_path)) = (&src.space, &src.map) {
        let space = load_fms(&read(space_path)?).map_err(format_err(space_path))?;
        let map = parse_fmap(&read(map_path)?, &space).map_err(format_err(map_path))?;
        return Ok(Loaded {
            space: Box::new(space),
            map: Box::new(map),
            window: src.window,
            inputs: vec![space_path.display().to_string(), map_path.display().to_string()],
            chain: false,
        });
    }
    if let Some(v) = src.paper_example {
        let (variant, tag) = match v {
            Variant::A => (ThreePointVariant::A, "A"),
            Variant::B => (ThreePointVariant::B, "B"),
        };
        let (space, map): (FiniteSpace, TableMap) = make_three_point_example(variant);
        return Ok(Loaded {
            space: Box::new(space),
            map: Box::new(map),
            window: src.window,
            inputs: vec![format!("paper-example {tag}")],
            chain: false,
        });
    }
    let window = src.window.unwrap_or(triperi_core::paper::DEFAULT_WINDOW);
    let params = chain_params(src.scale.as_deref(), src.float, window)?;
    let inputs = vec![format!("paper-space scale={} window={window}", params.scale)];
    let (space, map) = make_paper_space(params)?;
    Ok(Loaded {
        space: Box::new(space),
        map: Box::new(map),
        window: Some(window),
        inputs,
        chain: true,
    })
}

fn cmd_verify(args: &VerifyArgs) -> Result<Outcome, CliError> {
    let space = parse_fms(&read(&args.file)?).map_err(format_err(&args.file))?;
    let report = verify_metric_axioms(&space, None)?;
    let doc = ReportDocument::new(
        "verify",
        vec![args.file.display().to_string()],
        VerifyResult::new(&space, &report),
    );
    Ok(Outcome::ok(
        if report.passed() { 0 } else { 1 },
        doc.render(args.format),
    ))
}

fn cmd_classify(args: &ClassifyArgs, threads: NonZeroUsize) -> Result<Outcome, CliError> {
    let l = load_source(&args.source)?;
    let report = classify_with(&*l.space, &*l.map, l.window, |scan| scan_parallel(scan, threads))?;
    let code = if report.meets_fixed_point_conditions() { 0 } else { 1 };
    let doc = ReportDocument::new("classify", l.inputs, ClassifyResult::new(&*l.space, &report));
    Ok(Outcome::ok(code, doc.render(args.format)))
}

fn parse_start(l: &Loaded, text: &str) -> Result<PointRef, CliError> {
    let bad = || CliError::Usage(format!("unknown start point `{text}`"));
    let p = if l.chain {
        match text {
            "x*" | "*" | "star" => PointRef::Star,
            _ => PointRef::Index(text.strip_prefix("x_").unwrap_or(text).parse().map_err(|_| bad())?),
        }
    } else {
        let names = (0..).map_while(|i| {
            let p = PointRef::Index(i);
            l.space.contains(p).then(|| (p, l.space.label(p)))
        });
        names
            .into_iter()
            .find(|(_, name)| name == text)
            .map(|(p, _)| p)
            .ok_or_else(bad)?
    };
    if !l.space.contains(p) {
        return Err(bad());
    }
    Ok(p)
}

fn cmd_solve(args: &SolveArgs) -> Result<Outcome, CliError> {
    let l = load_source(&args.source)?;
    let mode = l.space.mode();
    let alpha = parse_number("alpha", &args.alpha, mode)?;
    let tol = parse_number("tol", &args.tol, mode)?;
    let x0 = parse_start(&l, &args.start)?;
    let result = picard_solve(&*l.space, &*l.map, x0, &alpha, &tol, args.max_iter)?;
    let code = match result.status {
        SolveStatus::Converged | SolveStatus::ReachedExactFixedPoint => 0,
        SolveStatus::StalledBudget => 1,
        SolveStatus::ConditionIViolation => 3,
    };
    let doc = ReportDocument::new("solve", l.inputs, SolveReport::new(&*l.space, &result));
    Ok(Outcome::ok(code, doc.render(args.format)))
}

fn cmd_paper_table(args: &ChainArgs, threads: NonZeroUsize) -> Result<Outcome, CliError> {
    let params = chain_params(args.scale.as_deref(), args.float, args.window)?;
    let (space, map) = make_paper_space(params.clone())?;
    let mode = space.mode();
    let tol = space.tolerance();
    let n = args.window;

    let star_rows = (0..n)
        .map(|i| {
            let parity = if i % 2 == 0 { "even" } else { "odd" };
            Ok(StarRow {
                i,
                parity,
                ratio: num(&star_triple_ratio(i, &params)?),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    // Best (value, i, j, k) over finite triples i < j < k <= n, grouped by i.
    let per_first = map_indexed(
        n + 1,
        threads,
        |i| -> Result<Option<(Scalar, [usize; 3])>, triperi_core::Error> {
            let mut best: Option<(Scalar, [usize; 3])> = None;
            for j in i + 1..=n {
                for k in j + 1..=n {
                    let r = finite_triple_ratio(i, j, k, &params)?;
                    if best.as_ref().is_none_or(|(b, _)| r.exceeds_for_max(b, &tol)) {
                        best = Some((r, [i, j, k]));
                    }
                }
            }
            Ok(best)
        },
    );
    let mut finite_best: Option<(Scalar, [usize; 3])> = None;
    for part in per_first {
        if let Some((r, idx)) = part? {
            if finite_best.as_ref().is_none_or(|(b, _)| r.exceeds_for_max(b, &tol)) {
                finite_best = Some((r, idx));
            }
        }
    }
    let (finite_value, finite_idx) = finite_best.expect("window of at least 3 has a finite triple");

    let scan = TripleScan::new(&space, &map, Some(n))?;
    let (alpha_star, witness) = scan_parallel(&scan, threads)?;
    let bound = Scalar::ratio(CHAIN_ALPHA.0, CHAIN_ALPHA.1)
        .expect("nonzero")
        .to_mode(mode)
        .expect("finite");
    let certified = alpha_star.le(&bound, &tol);

    let table = PaperTable {
        status: if certified { "certified" } else { "not-certified" },
        mode: mode.to_string(),
        window: n,
        scale: num(&params.scale),
        star_rows,
        finite_max: Maximum {
            value: num(&finite_value),
            witness: finite_idx.iter().map(|&i| space.label(PointRef::Index(i))).collect(),
        },
        alpha_star: Maximum {
            value: num(&alpha_star),
            witness: witness.points().iter().map(|&p| space.label(p)).collect(),
        },
        certified_bound: num(&bound),
        triples_examined: scan.triple_count(),
    };
    let inputs = vec![format!("paper-space scale={} window={n}", params.scale)];
    let doc = ReportDocument::new("paper-table", inputs, table);
    Ok(Outcome::ok(if certified { 0 } else { 1 }, doc.render(args.format)))
}

/// The chain window `x_0, ..., x_N, x*` as an explicit finite space.
pub fn materialize_chain(params: &PaperSpaceParams) -> Result<FiniteSpace, CliError> {
    let (space, _) = make_paper_space(params.clone())?;
    let points = space.points(Some(params.window))?;
    let names = points.iter().map(|&p| space.label(p)).collect();
    let rows = points
        .iter()
        .map(|&p| {
            points
                .iter()
                .map(|&q| distance(&space, p, q))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FiniteSpace::new(names, rows, space.mode())?)
}

/// The shift restricted to the window, with `x_N` sent to `x*`.
pub fn materialize_shift(window: usize) -> TableMap {
    let star = window + 1;
    let images = (0..=star).map(|i| if i < window { i + 1 } else { star }).collect();
    TableMap::new(images).expect("images lie in the window")
}

fn cmd_materialize(args: &MaterializeArgs) -> Result<Outcome, CliError> {
    if args.out_map.is_some() && !args.remap_boundary_to_star {
        return Err(CliError::Usage(format!(
            "the shift sends x_{w} to x_{}, outside the window; pass --remap-boundary-to-star to map it to x* instead",
            args.window + 1,
            w = args.window
        )));
    }
    let params = chain_params(args.scale.as_deref(), false, args.window)?;
    let space = materialize_chain(&params)?;
    let fms = write_fms(&space);
    let mut stdout = String::new();
    match &args.out_space {
        Some(path) => write(path, &fms)?,
        None => stdout.push_str(&fms),
    }
    if let Some(path) = &args.out_map {
        write(path, &write_fmap(&materialize_shift(args.window), &space))?;
    }
    Ok(Outcome::ok(0, stdout))
}
