//! Command-line front end.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::approx::{approx_collapse_with, ApproxParams};
use crate::collapse::{collapse_once, Algorithm, CollapseResult, CollapseStats};
use crate::grade::Grade;
use crate::graph::{FilteredEdge, FilteredGraph};
use crate::io::{self, IoError};
use crate::neighborhood::Representation;
use crate::oracle::{self, IntervalConvention};
use crate::parallel::{parallel_backward_collapse_with, parts_for_threads};
use crate::sample::{self, Sample, SampleKind};
use crate::zigzag::zigzag_collapse;

/// Upper bound on rounds for `--fixpoint`.
pub const FIXPOINT_ROUND_LIMIT: usize = 1000;

#[derive(Debug, Parser)]
#[command(name = "flagcollapse", version, about = "Edge-collapse reduction of flag and zigzag flag filtrations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reduce a filtered graph.
    Collapse(CollapseArgs),
    /// Reduce a zigzag of graphs.
    ZigzagCollapse(ZigzagCollapseArgs),
    /// Build the Rips graph of a point file.
    Rips(RipsArgs),
    /// Generate a seeded synthetic dataset.
    Sample(SampleArgs),
    /// Persistence diagram of the flag filtration of a graph (small inputs).
    Persistence(PersistenceArgs),
    /// Closed-interval diagram of a zigzag (small inputs).
    ZigzagPersistence(PersistenceArgs),
    /// Bottleneck distance between two diagram files.
    Bottleneck(BottleneckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmArg {
    Backward,
    Forward,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Backward => Algorithm::Backward,
            AlgorithmArg::Forward => Algorithm::Forward,
        }
    }
}

#[derive(Debug, Args)]
pub struct Io {
    /// Input file; standard input if omitted.
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    /// Output file; standard output if omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CollapseArgs {
    #[command(flatten)]
    pub io: Io,
    #[arg(long, value_enum, default_value = "backward")]
    pub algorithm: AlgorithmArg,
    /// Repeat until a round changes nothing.
    #[arg(long, conflicts_with = "rounds")]
    pub fixpoint: bool,
    /// Number of rounds.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub rounds: Option<u64>,
    /// Additive approximation: first check at t + epsilon.
    #[arg(long, conflicts_with = "alpha")]
    pub epsilon: Option<f64>,
    /// Multiplicative approximation: first check at alpha * t.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Worker threads for the divide-and-conquer backward sweep.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: u64,
    /// Dense neighborhood rows (default).
    #[arg(long, conflicts_with = "sparse")]
    pub dense: bool,
    /// Sorted-list neighborhoods.
    #[arg(long)]
    pub sparse: bool,
    /// Write the dropped edges, at their original grades, to this file.
    #[arg(long)]
    pub removed: Option<PathBuf>,
    /// Print run statistics to standard error.
    #[arg(long)]
    pub stats: bool,
}

#[derive(Debug, Args)]
pub struct ZigzagCollapseArgs {
    #[command(flatten)]
    pub io: Io,
    /// Maximum number of inclusion/removal pass pairs.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub passes: u64,
    #[arg(long)]
    pub stats: bool,
}

#[derive(Debug, Args)]
pub struct RipsArgs {
    #[command(flatten)]
    pub io: Io,
    /// Longest edge kept; no limit if omitted.
    #[arg(long)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// uniform_square, circle, regular_polygon, torus or complete_graph.
    #[arg(long)]
    pub kind: String,
    #[arg(short, long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output if omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PersistenceArgs {
    #[command(flatten)]
    pub io: Io,
    #[arg(long, default_value_t = 1)]
    pub max_dim: usize,
}

#[derive(Debug, Args)]
pub struct BottleneckArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    /// Single dimension; every dimension present if omitted.
    #[arg(long)]
    pub dim: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

/// Counters and timings of one `collapse` run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunStats {
    pub edges_before: usize,
    pub edges_after: usize,
    pub rounds: usize,
    pub round_sizes: Vec<usize>,
    pub parts: usize,
    pub read_time: Duration,
    pub collapse_time: Duration,
    pub write_time: Duration,
    pub work: CollapseStats,
}

impl RunStats {
    /// One `key=value` pair per line.
    pub fn to_key_values(&self) -> String {
        let sizes: Vec<String> = self.round_sizes.iter().map(|s| s.to_string()).collect();
        format!(
            "edges_before={}\nedges_after={}\nrounds={}\nround_sizes={}\nparts={}\nread_seconds={:.6}\ncollapse_seconds={:.6}\nwrite_seconds={:.6}\ndomination_checks={}\nshifts={}\ntrims={}\n",
            self.edges_before,
            self.edges_after,
            self.rounds,
            sizes.join(","),
            self.parts,
            self.read_time.as_secs_f64(),
            self.collapse_time.as_secs_f64(),
            self.write_time.as_secs_f64(),
            self.work.domination_checks,
            self.work.shifts,
            self.work.trims,
        )
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<String, CliError> {
    match path {
        Some(p) => Ok(io::read_file(p)?),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(failed)?;
            Ok(s)
        }
    }
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => Ok(io::write_file(p, text)?),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(failed),
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Collapse(a) => run_collapse(a),
        Command::ZigzagCollapse(a) => {
            let z = io::parse_zigzag(&read_input(&a.io.input)?)?;
            let r = zigzag_collapse(&z, a.passes as usize).map_err(failed)?;
            write_output(&a.io.output, &io::format_zigzag(&r.filtration))?;
            if a.stats {
                let s = r.stats;
                eprint!(
                    "events_before={}\nevents_after={}\npasses={}\ndomination_checks={}\nshifts={}\ncancellations={}\ntrims={}\nrefused_shifts={}\n",
                    z.num_events(),
                    r.filtration.num_events(),
                    s.passes,
                    s.domination_checks,
                    s.shifts,
                    s.cancellations,
                    s.trims,
                    s.refused_shifts
                );
            }
            Ok(())
        }
        Command::Rips(a) => {
            let p = io::parse_points(&read_input(&a.io.input)?)?;
            let threshold = match a.threshold {
                Some(t) => Grade::new(t).ok_or_else(|| CliError::Usage("threshold must be a number".into()))?,
                None => Grade::INFINITY,
            };
            let g = sample::rips_graph(&p, threshold).map_err(|e| CliError::Usage(e.to_string()))?;
            write_output(&a.io.output, &io::format_graph(&g))
        }
        Command::Sample(a) => {
            let kind: SampleKind = a.kind.parse().map_err(|e: sample::SampleError| CliError::Usage(e.to_string()))?;
            let text = match sample::sample(kind, a.n, a.seed).map_err(|e| CliError::Usage(e.to_string()))? {
                Sample::Points(p) => io::format_points(&p),
                Sample::Graph(g) => io::format_graph(&g),
            };
            write_output(&a.output, &text)
        }
        Command::Persistence(a) => {
            let g = io::parse_graph(&read_input(&a.io.input)?)?;
            let d = oracle::flag_persistence(&g, a.max_dim).map_err(failed)?;
            write_output(&a.io.output, &io::format_diagram(&d))
        }
        Command::ZigzagPersistence(a) => {
            let z = io::parse_zigzag(&read_input(&a.io.input)?)?;
            let d = oracle::zigzag_persistence(&z, a.max_dim).map_err(failed)?;
            write_output(&a.io.output, &io::format_diagram(&d))
        }
        Command::Bottleneck(a) => {
            let x = io::parse_diagram(&io::read_file(&a.first)?, IntervalConvention::HalfOpen)?;
            let y = io::parse_diagram(&io::read_file(&a.second)?, IntervalConvention::HalfOpen)?;
            let dims: Vec<usize> = match a.dim {
                Some(d) => vec![d],
                None => (0..x.num_dims().max(y.num_dims()).max(1)).collect(),
            };
            let mut out = String::new();
            for d in dims {
                let dist = oracle::bottleneck_distance(&x, &y, d);
                if a.dim.is_some() {
                    out.push_str(&format!("{dist}\n"));
                } else {
                    out.push_str(&format!("{d} {dist}\n"));
                }
            }
            write_output(&None, &out)
        }
    }
}

/// Rejects flag combinations that have no meaning.
fn check_collapse_flags(a: &CollapseArgs) -> Result<(), CliError> {
    let approx = a.epsilon.is_some() || a.alpha.is_some();
    let usage = |m: &str| Err(CliError::Usage(m.to_string()));
    if approx && a.threads > 1 {
        return usage("--epsilon/--alpha run sequentially and cannot be combined with --threads > 1");
    }
    if approx && a.algorithm == AlgorithmArg::Forward {
        return usage("--epsilon/--alpha need the backward algorithm");
    }
    if approx && (a.fixpoint || a.rounds.is_some_and(|r| r > 1)) {
        return usage("--epsilon/--alpha apply to a single round");
    }
    if a.algorithm == AlgorithmArg::Forward && a.threads > 1 {
        return usage("only the backward algorithm runs in parallel");
    }
    Ok(())
}

fn run_collapse(a: CollapseArgs) -> Result<(), CliError> {
    check_collapse_flags(&a)?;
    let repr = if a.sparse { Representation::Sparse } else { Representation::Dense };
    let approx = match (a.epsilon, a.alpha) {
        (Some(e), _) => Some(ApproxParams::additive(e).map_err(|e| CliError::Usage(e.to_string()))?),
        (_, Some(al)) => Some(ApproxParams::multiplicative(al).map_err(|e| CliError::Usage(e.to_string()))?),
        _ => None,
    };
    let max_rounds = if a.fixpoint { FIXPOINT_ROUND_LIMIT } else { a.rounds.unwrap_or(1) as usize };

    let mut stats = RunStats::default();
    let clock = Instant::now();
    let g = io::parse_graph(&read_input(&a.io.input)?)?;
    stats.read_time = clock.elapsed();
    stats.edges_before = g.num_edges();
    stats.round_sizes.push(g.num_edges());

    let clock = Instant::now();
    let threads = a.threads as usize;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(failed)?;
    let mut current = g.clone();
    let round = |graph: &FilteredGraph, stats: &mut RunStats| -> Result<CollapseResult, CliError> {
        if let Some(p) = approx {
            stats.parts = 1;
            return approx_collapse_with(graph, p, repr).map_err(|e| CliError::Usage(e.to_string()));
        }
        let parts = if threads > 1 { parts_for_threads(threads, graph.num_edges()) } else { 1 };
        if parts > 1 {
            // A split through a run of equal grades is not allowed; the
            // sequential sweep gives the same answer anyway.
            if let Ok(r) = pool.install(|| parallel_backward_collapse_with(graph, parts, repr)) {
                stats.parts = stats.parts.max(parts);
                return Ok(r);
            }
        }
        stats.parts = stats.parts.max(1);
        Ok(collapse_once(graph, a.algorithm.into(), repr))
    };
    for _ in 0..max_rounds {
        let r = round(&current, &mut stats)?;
        stats.work += r.stats;
        stats.rounds += 1;
        let unchanged = r.graph.edges() == current.edges();
        stats.round_sizes.push(r.graph.num_edges());
        current = r.graph;
        if unchanged {
            break;
        }
    }
    stats.collapse_time = clock.elapsed();
    stats.edges_after = current.num_edges();

    let clock = Instant::now();
    write_output(&a.io.output, &io::format_graph(&current))?;
    if let Some(path) = &a.removed {
        let kept: std::collections::HashSet<_> = current.edges().iter().map(FilteredEdge::pair).collect();
        let removed: Vec<FilteredEdge> = g.edges().iter().filter(|e| !kept.contains(&e.pair())).copied().collect();
        io::write_file(path, &io::format_edges(&removed))?;
    }
    stats.write_time = clock.elapsed();
    if a.stats {
        eprint!("{}", stats.to_key_values());
    }
    Ok(())
}
