//! Command-line front end. Every subcommand writes CSV with a header row.
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O or parse error, 3 invalid
//! result (an output that fails independence or maximality).

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::engine::{run_luby_reference, Algorithm, EngineError, LubyMode, MisResult, TcMis};
use crate::generators;
use crate::graph::Graph;
use crate::io::{read_graph, write_edge_list, write_matrix_market, GraphFormat, ParseError};
use crate::priorities::DEFAULT_SCALE_BITS;
use crate::tiling::{tile_graph, tile_stats, TilingError, DEFAULT_TILE_DIM};
use crate::validator::{
    brute_force_max_is, check_independence, check_maximality, quality_report, Independence,
    Maximality, ValidatorError, BRUTE_FORCE_LIMIT,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: ParseError },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input { .. } | CliError::Io(_) | CliError::Csv(_) => 2,
            CliError::Invalid(_) => 3,
            CliError::Engine(EngineError::Tiling(TilingError::ZeroTileDim)) => 1,
            CliError::Engine(EngineError::Priority(_)) => 1,
            CliError::Engine(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "tcmis",
    version,
    about = "Maximal independent sets via tiled neighbor counting"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute an MIS, validate it and write one timing row per repetition.
    Run(RunArgs),
    /// Compare heuristics by cardinality against the fixed-priority reference.
    CompareHeuristics(CompareArgs),
    /// Report tile counts, occupancy and memory estimates.
    TileStats(TileStatsArgs),
    /// Check that a vertex list is an independent and maximal set.
    Validate(ValidateArgs),
    /// Write a synthetic graph.
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Defaults to `mtx` for `.mtx` files and `edges` otherwise.
    #[arg(long)]
    pub format: Option<GraphFormat>,
}

impl InputArgs {
    fn load(&self) -> Result<Graph, CliError> {
        let format = self
            .format
            .unwrap_or_else(|| GraphFormat::from_path(&self.input));
        read_graph(&self.input, format).map_err(|source| CliError::Input {
            path: self.input.clone(),
            source,
        })
    }

    fn name(&self) -> String {
        self.input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    }
}

#[derive(Debug, Args)]
pub struct EngineArgs {
    #[arg(long, default_value_t = DEFAULT_TILE_DIM, value_parser = parse_tile_size)]
    pub tile_size: usize,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SCALE_BITS)]
    pub scale_bits: u32,
}

impl EngineArgs {
    fn workers(&self) -> usize {
        self.workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
            .max(1)
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "h3")]
    pub heuristic: Algorithm,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Repetitions; repetition `i` uses seed `seed + i`.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub reps: u32,
    #[command(flatten)]
    pub engine: EngineArgs,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Explicit seed list; overrides `--seed`/`--reps`.
    #[arg(long, value_delimiter = ',')]
    pub seeds: Vec<u64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    pub reps: u32,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TileStatsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = DEFAULT_TILE_DIM, value_parser = parse_tile_size)]
    pub tile_size: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// File of whitespace-separated vertex ids.
    #[arg(long)]
    pub mis: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphKind {
    Gnp,
    Rmat,
    Path,
    Cycle,
    Complete,
    Star,
    Petersen,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub kind: GraphKind,
    /// Vertex count (leaf count for `star`).
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Expected average degree for `gnp`.
    #[arg(long, default_value_t = 8.0)]
    pub avg_degree: f64,
    /// log2 of the vertex count for `rmat`.
    #[arg(long, default_value_t = 14)]
    pub scale: u32,
    #[arg(long, default_value_t = 16)]
    pub edge_factor: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Defaults to the extension of `--out`.
    #[arg(long)]
    pub format: Option<GraphFormat>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Serialize)]
pub struct RunRow {
    pub graph: String,
    pub n: usize,
    pub m: usize,
    pub heuristic: String,
    pub seed: u64,
    pub mis_size: usize,
    pub iterations: usize,
    pub total_ms: f64,
    pub phase1_ms: f64,
    pub phase2_ms: f64,
    pub phase3_ms: f64,
    pub tiles_evaluated: usize,
    pub tiles_skipped: usize,
}

#[derive(Debug, Serialize)]
pub struct CompareRow {
    pub graph: String,
    /// `seed` for per-run rows, `mean` for the per-heuristic aggregate.
    pub kind: &'static str,
    pub heuristic: String,
    pub seed: Option<u64>,
    pub mis_size: f64,
    pub reference_size: f64,
    pub deviation_pct: f64,
    /// Exact maximum independent set size, for graphs small enough to solve.
    pub max_is: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct TileStatsRow {
    pub graph: String,
    pub n: usize,
    pub m: usize,
    pub tile_dim: usize,
    pub tile_count: usize,
    pub nonzeros: usize,
    pub density: f64,
    pub tiled_bytes: usize,
    pub csr_bytes: usize,
    /// `ones:count` pairs for every non-empty occupancy bin.
    pub occupancy: String,
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: Command, stdout: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Run(args) => cmd_run(&args, stdout),
        Command::CompareHeuristics(args) => cmd_compare_heuristics(&args, stdout),
        Command::TileStats(args) => cmd_tile_stats(&args, stdout),
        Command::Validate(args) => cmd_validate(&args, stdout),
        Command::Generate(args) => cmd_generate(&args, stdout),
    }
}

fn csv_writer<'a>(
    out: &Option<PathBuf>,
    stdout: &'a mut dyn Write,
) -> Result<csv::Writer<Box<dyn Write + 'a>>, CliError> {
    let sink: Box<dyn Write + 'a> = match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(stdout),
    };
    Ok(csv::Writer::from_writer(sink))
}

fn parse_tile_size(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("tile size must be at least 1".into()),
        Ok(t) => Ok(t),
        Err(e) => Err(e.to_string()),
    }
}

fn ms(d: std::time::Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

/// Runs one algorithm. Engine-backed algorithms reuse `engine`'s tiles.
fn run_algorithm(
    engine: &TcMis<'_>,
    algorithm: Algorithm,
    seed: u64,
    scale_bits: u32,
) -> Result<MisResult, EngineError> {
    match algorithm.heuristic() {
        Some(h) => engine.run(h, seed, scale_bits),
        None if algorithm == Algorithm::LubyFresh => {
            run_luby_reference(engine.graph(), seed, LubyMode::Fresh)
        }
        None => run_luby_reference(engine.graph(), seed, LubyMode::Permutation),
    }
}

fn ensure_valid(graph: &Graph, result: &MisResult) -> Result<(), CliError> {
    match check_maximality(graph, &result.mis) {
        Ok(Maximality::Maximal) => Ok(()),
        Ok(Maximality::Addable(v)) => Err(CliError::Invalid(format!(
            "{} seed {} produced a non-maximal set: vertex {v} addable",
            result.algorithm, result.seed
        ))),
        Err(e) => Err(CliError::Invalid(format!(
            "{} seed {} produced an invalid set: {e}",
            result.algorithm, result.seed
        ))),
    }
}

fn check_scale_bits(bits: u32) -> Result<(), CliError> {
    if crate::priorities::SCALE_BITS_RANGE.contains(&bits) {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "--scale-bits must be in {}..={}",
            crate::priorities::SCALE_BITS_RANGE.start(),
            crate::priorities::SCALE_BITS_RANGE.end()
        )))
    }
}

pub fn cmd_run(args: &RunArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    check_scale_bits(args.engine.scale_bits)?;
    let graph = args.input.load()?;
    let name = args.input.name();
    let engine = TcMis::new(&graph, args.engine.tile_size, args.engine.workers())?;

    // Compute and validate every repetition before writing anything, so an
    // invalid result never leaves partial statistics behind.
    let mut rows = Vec::with_capacity(args.reps as usize);
    for rep in 0..args.reps as u64 {
        let seed = args.seed.wrapping_add(rep);
        let start = Instant::now();
        let result = run_algorithm(&engine, args.heuristic, seed, args.engine.scale_bits)?;
        let total = start.elapsed();
        ensure_valid(&graph, &result)?;
        let [p1, p2, p3] = result.phase_totals();
        rows.push(RunRow {
            graph: name.clone(),
            n: graph.num_vertices(),
            m: graph.num_edges(),
            heuristic: args.heuristic.to_string(),
            seed,
            mis_size: result.len(),
            iterations: result.iterations.len(),
            total_ms: ms(total),
            phase1_ms: ms(p1),
            phase2_ms: ms(p2),
            phase3_ms: ms(p3),
            tiles_evaluated: result.tiles_evaluated(),
            tiles_skipped: result.tiles_skipped(),
        });
    }

    let mut w = csv_writer(&args.out, stdout)?;
    if rows.is_empty() {
        w.write_record([
            "graph",
            "n",
            "m",
            "heuristic",
            "seed",
            "mis_size",
            "iterations",
            "total_ms",
            "phase1_ms",
            "phase2_ms",
            "phase3_ms",
            "tiles_evaluated",
            "tiles_skipped",
        ])?;
    }
    for row in &rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_compare_heuristics(args: &CompareArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    check_scale_bits(args.engine.scale_bits)?;
    let graph = args.input.load()?;
    let name = args.input.name();
    let engine = TcMis::new(&graph, args.engine.tile_size, args.engine.workers())?;
    let seeds: Vec<u64> = if args.seeds.is_empty() {
        (0..args.reps as u64)
            .map(|i| args.seed.wrapping_add(i))
            .collect()
    } else {
        args.seeds.clone()
    };
    let max_is = if graph.num_vertices() <= BRUTE_FORCE_LIMIT {
        Some(brute_force_max_is(&graph).map_err(|e| CliError::Invalid(e.to_string()))?)
    } else {
        None
    };

    let compared = [Algorithm::H1, Algorithm::H2, Algorithm::H3];
    let mut rows = Vec::new();
    let mut sums = [(0.0f64, 0.0f64, 0.0f64); 3];
    for &seed in &seeds {
        let reference = run_algorithm(&engine, Algorithm::LubyPerm, seed, args.engine.scale_bits)?;
        ensure_valid(&graph, &reference)?;
        for (i, &algorithm) in compared.iter().enumerate() {
            let result = run_algorithm(&engine, algorithm, seed, args.engine.scale_bits)?;
            ensure_valid(&graph, &result)?;
            let report = quality_report(&graph, &result.mis, &reference.mis)
                .map_err(|e| CliError::Invalid(e.to_string()))?;
            sums[i].0 += report.cardinality as f64;
            sums[i].1 += report.reference_cardinality as f64;
            sums[i].2 += report.deviation_pct;
            rows.push(CompareRow {
                graph: name.clone(),
                kind: "seed",
                heuristic: algorithm.to_string(),
                seed: Some(seed),
                mis_size: report.cardinality as f64,
                reference_size: report.reference_cardinality as f64,
                deviation_pct: report.deviation_pct,
                max_is,
            });
        }
    }
    let k = seeds.len().max(1) as f64;
    for (i, algorithm) in compared.iter().enumerate() {
        rows.push(CompareRow {
            graph: name.clone(),
            kind: "mean",
            heuristic: algorithm.to_string(),
            seed: None,
            mis_size: sums[i].0 / k,
            reference_size: sums[i].1 / k,
            deviation_pct: sums[i].2 / k,
            max_is,
        });
    }

    let mut w = csv_writer(&args.out, stdout)?;
    for row in &rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_tile_stats(args: &TileStatsArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let graph = args.input.load()?;
    let tiled = tile_graph(&graph, args.tile_size).map_err(EngineError::from)?;
    let stats = tile_stats(&tiled);
    let occupancy = stats
        .occupancy_histogram
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c > 0)
        .map(|(k, c)| format!("{k}:{c}"))
        .collect::<Vec<_>>()
        .join(";");
    let row = TileStatsRow {
        graph: args.input.name(),
        n: graph.num_vertices(),
        m: graph.num_edges(),
        tile_dim: stats.tile_dim,
        tile_count: stats.tile_count,
        nonzeros: stats.nonzeros,
        density: stats.density,
        tiled_bytes: stats.tiled_bytes,
        csr_bytes: stats.csr_bytes,
        occupancy,
    };
    let mut w = csv_writer(&args.out, stdout)?;
    w.serialize(row)?;
    w.flush()?;
    Ok(())
}

/// Reads whitespace-separated vertex ids.
pub fn read_vertex_list(path: &Path) -> Result<Vec<usize>, CliError> {
    let text = std::fs::read_to_string(path)?;
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| CliError::Input {
                path: path.to_path_buf(),
                source: ParseError::InvalidToken {
                    line: text[..text.find(tok).unwrap_or(0)].lines().count().max(1),
                    token: tok.to_string(),
                },
            })
        })
        .collect()
}

pub fn cmd_validate(args: &ValidateArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let graph = args.input.load()?;
    let set = read_vertex_list(&args.mis)?;
    let independence =
        check_independence(&graph, &set).map_err(|e| CliError::Invalid(e.to_string()))?;
    if let Independence::Adjacent(u, v) = independence {
        return Err(CliError::Invalid(format!(
            "not independent: edge ({u},{v})"
        )));
    }
    match check_maximality(&graph, &set) {
        Ok(Maximality::Maximal) => {
            let mut distinct = set.clone();
            distinct.sort_unstable();
            distinct.dedup();
            writeln!(stdout, "valid MIS of size {}", distinct.len())?;
            Ok(())
        }
        Ok(Maximality::Addable(v)) => Err(CliError::Invalid(format!(
            "not maximal: vertex {v} addable"
        ))),
        Err(ValidatorError::NotIndependent { u, v }) => Err(CliError::Invalid(format!(
            "not independent: edge ({u},{v})"
        ))),
        Err(e) => Err(CliError::Invalid(e.to_string())),
    }
}

pub fn cmd_generate(args: &GenerateArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let graph = match args.kind {
        GraphKind::Gnp => {
            if args.avg_degree.is_nan() || args.avg_degree < 0.0 {
                return Err(CliError::Usage("--avg-degree must be non-negative".into()));
            }
            generators::gnp_avg_degree(args.n, args.avg_degree, args.seed)
        }
        GraphKind::Rmat => {
            if args.scale > 26 {
                return Err(CliError::Usage("--scale must be at most 26".into()));
            }
            generators::rmat(args.scale, args.edge_factor, args.seed)
        }
        GraphKind::Path => generators::path(args.n),
        GraphKind::Cycle => generators::cycle(args.n),
        GraphKind::Complete => generators::complete(args.n),
        GraphKind::Star => generators::star(args.n),
        GraphKind::Petersen => generators::petersen(),
    };
    let format = args
        .format
        .unwrap_or_else(|| GraphFormat::from_path(&args.out));
    let mut out = BufWriter::new(File::create(&args.out)?);
    match format {
        GraphFormat::MatrixMarket => write_matrix_market(&graph, &mut out)?,
        GraphFormat::EdgeList => write_edge_list(&graph, &mut out)?,
    }
    out.flush()?;
    writeln!(
        stdout,
        "wrote {} ({} vertices, {} edges)",
        args.out.display(),
        graph.num_vertices(),
        graph.num_edges()
    )?;
    Ok(())
}
