//! The `mmw` command-line front end.
//!
//! Results go to the output stream as `key value` lines; everything else
//! (seed notes, warnings, errors) goes to the error stream.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 invalid decomposition,
//! 3 verification mismatch.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::decomposition::{
    exact_decomposition, heuristic_decomposition, parse_bd, serialize_bd_with_comment, width_of,
    DecompositionError, EXACT_MAX_VERTICES,
};
use crate::domset::{solve_observed, JoinObserver, NoObserver, SolveError};
use crate::graph::{parse_graph, Graph, ParseError};
use crate::oracle::{brute_force_domset, OracleError};
use crate::representation::{build_subtrees, build_tree_decomposition, verify_representation, verify_tree_decomposition};
use crate::RootedBranchDecomposition;

/// Largest graph `solve --verify` cross-checks against the oracle.
pub const VERIFY_MAX_VERTICES: usize = 20;

#[derive(Debug, Parser)]
#[command(name = "mmw", version, about = "mm-width decompositions and dominating sets")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the width of a decomposition and the minimum dominating set size.
    Solve(SolveArgs),
    /// Compute a decomposition and write it as a .bd file.
    Decompose(DecomposeArgs),
    /// Print the mm-width of a given decomposition.
    Width(PairArgs),
    /// Verify the subtree representation and tree decomposition built from a decomposition.
    Check(PairArgs),
    /// Print the dominating set size found by exhaustive search.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Use this decomposition instead of computing one.
    #[arg(long)]
    pub bd: Option<PathBuf>,
    /// Search all decompositions (graphs up to 9 vertices).
    #[arg(long)]
    pub exact: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Cross-check the answer by exhaustive search (graphs up to 20 vertices).
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub exact: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short = 'o')]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub bd: PathBuf,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub graph: PathBuf,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Graph { path: PathBuf, source: ParseError },
    #[error("{0}")]
    Decomposition(#[from] DecompositionError),
    #[error("{0}")]
    Solve(SolveError),
    #[error("{0}")]
    Oracle(#[from] OracleError),
    #[error("verification failed: dynamic program gives {dp}, exhaustive search gives {oracle}")]
    Mismatch { dp: usize, oracle: usize },
    #[error("check failed")]
    CheckFailed,
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Decomposition(d) => CliError::Decomposition(d),
            other => CliError::Solve(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Graph { .. } | CliError::Oracle(_) => 1,
            CliError::Decomposition(d) if d.is_syntax() => 1,
            CliError::Decomposition(DecompositionError::TooLarge { .. }) => 1,
            CliError::Decomposition(_) => 2,
            CliError::Solve(_) | CliError::Mismatch { .. } | CliError::CheckFailed => 3,
        }
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_observer(args, out, err, &mut NoObserver)
}

/// [`run`] with the dynamic program's tables passed through `observer`.
pub fn run_with_observer<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, observer: &mut dyn JoinObserver) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(rendered.as_bytes());
            } else {
                let _ = err.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match execute(&config, out, err, observer) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(
    config: &RunConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
    observer: &mut dyn JoinObserver,
) -> Result<(), CliError> {
    match &config.command {
        Command::Solve(args) => solve(args, out, err, observer),
        Command::Decompose(args) => decompose(args, out, err),
        Command::Width(args) => {
            let graph = read_graph(&args.graph)?;
            let d = read_bd(&args.bd)?;
            let width = width_of(&graph, &d)?;
            emit(out, format_args!("width {width}"))
        }
        Command::Check(args) => check(args, out),
        Command::Oracle(args) => {
            let graph = read_graph(&args.graph)?;
            let size = brute_force_domset(&graph)?;
            emit(out, format_args!("domset {size}"))
        }
    }
}

fn emit(out: &mut dyn Write, line: std::fmt::Arguments<'_>) -> Result<(), CliError> {
    writeln!(out, "{line}").map_err(|source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn read_graph(path: &Path) -> Result<Graph, CliError> {
    let bytes = read_file(path)?;
    parse_graph(&bytes).map_err(|source| CliError::Graph {
        path: path.to_owned(),
        source,
    })
}

fn read_bd(path: &Path) -> Result<RootedBranchDecomposition, CliError> {
    Ok(parse_bd(&read_file(path)?)?)
}

/// Exact search when asked for and small enough, otherwise the seeded
/// heuristic. Notes go to `err`.
fn compute_decomposition(
    graph: &Graph,
    exact: bool,
    seed: u64,
    err: &mut dyn Write,
) -> Result<(RootedBranchDecomposition, String), CliError> {
    let n = graph.vertex_count();
    if exact && n <= EXACT_MAX_VERTICES {
        let (d, _) = exact_decomposition(graph)?;
        return Ok((d, "exact".into()));
    }
    if exact {
        let _ = writeln!(
            err,
            "c exhaustive search needs at most {EXACT_MAX_VERTICES} vertices; using the heuristic"
        );
    }
    let d = heuristic_decomposition(graph, seed)?;
    Ok((d, format!("seed {seed}")))
}

fn solve(args: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write, observer: &mut dyn JoinObserver) -> Result<(), CliError> {
    let graph = read_graph(&args.graph)?;
    let n = graph.vertex_count();
    let (width, size) = match &args.bd {
        Some(path) => {
            let d = read_bd(path)?;
            (width_of(&graph, &d)?, solve_observed(&graph, &d, observer)?)
        }
        // No branch decomposition exists below two vertices.
        None if n < 2 => (0, n),
        None => {
            let (d, note) = compute_decomposition(&graph, args.exact, args.seed, err)?;
            let _ = writeln!(err, "c {note}");
            (width_of(&graph, &d)?, solve_observed(&graph, &d, observer)?)
        }
    };
    emit(out, format_args!("width {width}"))?;
    emit(out, format_args!("domset {size}"))?;
    if args.verify {
        if n > VERIFY_MAX_VERTICES {
            let _ = writeln!(err, "c verification skipped: more than {VERIFY_MAX_VERTICES} vertices");
            return Ok(());
        }
        let expected = brute_force_domset(&graph)?;
        if expected != size {
            return Err(CliError::Mismatch { dp: size, oracle: expected });
        }
        emit(out, format_args!("verified"))?;
    }
    Ok(())
}

fn decompose(args: &DecomposeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let graph = read_graph(&args.graph)?;
    if graph.vertex_count() < 2 {
        return Err(DecompositionError::TooSmall(graph.vertex_count()).into());
    }
    let (d, note) = compute_decomposition(&graph, args.exact, args.seed, err)?;
    let width = width_of(&graph, &d)?;
    let text = serialize_bd_with_comment(&d, Some(&note));
    fs::write(&args.output, text).map_err(|source| CliError::Io {
        path: args.output.clone(),
        source,
    })?;
    emit(out, format_args!("width {width}"))
}

fn check(args: &PairArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let graph = read_graph(&args.graph)?;
    let d = read_bd(&args.bd)?;
    // Edgeless graphs have width 0 but every subtree still needs one edge.
    let k = width_of(&graph, &d)?.max(1);
    let rep = build_subtrees(&graph, &d)?;
    let td = build_tree_decomposition(&rep);
    let mut report = verify_representation(&graph, &rep, k);
    report.extend(verify_tree_decomposition(&graph, &td, k));
    write!(out, "{report}").map_err(|source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::CheckFailed)
    }
}
