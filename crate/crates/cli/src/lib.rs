//! `swarmbench` command line: list the catalog, validate problem files, and
//! run optimizers headlessly, writing a trace and optionally an SVG plot.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 unreadable or
//! invalid input file, 3 runtime failure.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use swarmbench_core::trace_io::{write_csv, write_jsonl};
use swarmbench_core::{
    builtin_problem, catalog, parse_problem_xml, run, AlgorithmId, AlgorithmParams, Error, NoObserver, Problem,
    RunConfig, RunTrace,
};

mod plot;

pub use plot::render_convergence_svg;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "swarmbench",
    version,
    about = "Swarm-intelligence optimizers on benchmark problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List algorithms (with parameters) or builtin problems.
    List {
        #[arg(value_enum)]
        what: ListKind,
    },
    /// Check a problem file; diagnostics go to stderr.
    Validate { path: PathBuf },
    /// Run one optimizer and write its trace.
    Run(RunArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ListKind {
    Algorithms,
    Problems,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default)]
enum Format {
    #[default]
    Jsonl,
    Csv,
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    /// pso, abc, fa, aco or iwd.
    #[arg(long)]
    algorithm: String,
    /// Builtin problem id (see `list problems`).
    #[arg(long, conflicts_with = "problem_file", required_unless_present = "problem_file")]
    problem: Option<String>,
    /// Problem XML file.
    #[arg(long)]
    problem_file: Option<PathBuf>,
    /// Dimension for continuous builtins.
    #[arg(long)]
    dimension: Option<usize>,
    #[arg(long)]
    iterations: usize,
    /// Swarm size; aco and iwd use their `ants` / `drops` parameter instead.
    #[arg(long)]
    population: usize,
    #[arg(long)]
    seed: u64,
    /// Parameter override, repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE", value_parser = parse_param)]
    params: Vec<(String, f64)>,
    /// Stop once best-so-far is at or below this value.
    #[arg(long)]
    target: Option<f64>,
    /// Record every k-th iteration.
    #[arg(long, default_value_t = 1)]
    stride: usize,
    /// Trace file to write.
    #[arg(long)]
    out: PathBuf,
    /// Also write a convergence plot (SVG).
    #[arg(long)]
    plot: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

fn parse_param(raw: &str) -> Result<(String, f64), String> {
    let (name, value) = raw
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got `{raw}`"))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| format!("value for `{}` is not a number: `{value}`", name.trim()))?;
    Ok((name.trim().to_string(), value))
}

/// A failure with the exit code it maps to.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Self::new(EXIT_INPUT, format!("{}: {e}", path.display()))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Config { .. }
            | Error::UnknownParameter { .. }
            | Error::UnknownAlgorithm(_)
            | Error::NotFound { .. }
            | Error::InvalidArgument(_) => EXIT_USAGE,
            Error::ProblemFile(_) | Error::InvalidProblem(_) => EXIT_INPUT,
            _ => EXIT_RUNTIME,
        };
        Self::new(code, e.to_string())
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let rendered = e.render().to_string();
                let _ = write!(err, "{rendered}");
                if !rendered.contains("Usage:") {
                    let _ = writeln!(err, "\n{}", Cli::command().render_usage());
                }
                EXIT_USAGE
            } else {
                let _ = write!(out, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::List { what } => list(what, out),
        Command::Validate { path } => validate(&path, err),
        Command::Run(args) => run_command(&args, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn list(what: ListKind, out: &mut dyn Write) -> Result<(), Failure> {
    let w = |e: std::io::Error| Failure::new(EXIT_RUNTIME, e.to_string());
    match what {
        ListKind::Algorithms => {
            let mut ids = AlgorithmId::ALL.to_vec();
            ids.sort_by_key(|a| a.id());
            for id in ids {
                writeln!(out, "{}  {} ({} problems)", id.id(), id.name(), id.space_kind()).map_err(w)?;
                for spec in id.schema() {
                    let default = spec.default.map_or("derived".to_string(), |d| d.to_string());
                    writeln!(
                        out,
                        "    {:<16} default {:<10} range {}",
                        spec.name,
                        default,
                        spec.range_text()
                    )
                    .map_err(w)?;
                }
            }
        }
        ListKind::Problems => {
            for entry in catalog() {
                let size = entry
                    .nodes
                    .map_or("any dimension".to_string(), |n| format!("{n} nodes"));
                writeln!(
                    out,
                    "{:<12} {:<10} {:<14} {}",
                    entry.id, entry.kind, size, entry.description
                )
                .map_err(w)?;
            }
        }
    }
    Ok(())
}

fn read_problem_file(path: &Path) -> Result<Problem, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    parse_problem_xml(&text).map_err(|e| {
        let lines: Vec<String> = e
            .diagnostics
            .iter()
            .map(|d| format!("{}: {d}", path.display()))
            .collect();
        Failure::new(EXIT_INPUT, format!("invalid problem file\n{}", lines.join("\n")))
    })
}

fn validate(path: &Path, err: &mut dyn Write) -> Result<(), Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    match parse_problem_xml(&text) {
        Ok(_) => Ok(()),
        Err(e) => {
            for d in &e.diagnostics {
                let _ = writeln!(err, "{}: {d}", path.display());
            }
            Err(Failure::new(
                EXIT_INPUT,
                format!("{} diagnostic(s)", e.diagnostics.len()),
            ))
        }
    }
}

fn run_command(args: &RunArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let algorithm: AlgorithmId = args.algorithm.parse()?;
    let params = AlgorithmParams::with_overrides(algorithm, args.params.iter().map(|(k, v)| (k.as_str(), *v)))?;
    let problem = match (&args.problem, &args.problem_file) {
        (Some(id), _) => builtin_problem(id, args.dimension)?,
        (None, Some(path)) => read_problem_file(path)?,
        (None, None) => unreachable!("clap requires one"),
    };
    let mut config = RunConfig::new(args.seed, args.iterations, args.population);
    config.target = args.target;
    config.stride = args.stride;

    let trace = run(&params, &problem, &config, &mut NoObserver)?;
    write_trace(&trace, &args.out, args.format)?;
    if let Some(path) = &args.plot {
        fs::write(path, render_convergence_svg(&trace)?).map_err(|e| Failure::io(path, e))?;
    }
    let w = |e: std::io::Error| Failure::new(EXIT_RUNTIME, e.to_string());
    writeln!(out, "best {:?}", trace.solution.value).map_err(w)?;
    writeln!(out, "first reached at iteration {}", trace.solution.iteration).map_err(w)?;
    writeln!(out, "stopped: {}", trace.stop).map_err(w)?;
    writeln!(out, "duration {:.3} s", trace.duration.as_secs_f64()).map_err(w)?;
    Ok(())
}

fn write_trace(trace: &RunTrace, path: &Path, format: Format) -> Result<(), Failure> {
    let file = File::create(path).map_err(|e| Failure::io(path, e))?;
    let mut writer = BufWriter::new(file);
    match format {
        Format::Jsonl => write_jsonl(trace, &mut writer)?,
        Format::Csv => write_csv(trace, &mut writer)?,
    }
    writer.flush().map_err(|e| Failure::io(path, e))
}
