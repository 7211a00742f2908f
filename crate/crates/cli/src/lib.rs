//! Command-line front end for the diffusion solvers.
//!
//! One binary, four modes:
//!
//! - default: run one algorithm on one graph and append a CSV result row;
//! - `--stats`: emit the graph statistics row;
//! - `--suite <config.toml>`: run an algorithms × transpose × m cross
//!   product and emit one row per cell (long format, pivot externally);
//! - `--microbench`: time the line- and column-iterator traversals.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 non-convergence.

mod output;
mod suite;

use std::ffi::OsString;
use std::path::PathBuf;
use std::str::FromStr;

use clap::Parser;

use diterate::{
    iterator_microbench, run_solver, Algorithm, CostModel, Graph, Orientation, PageRankOperator,
    RunFlags,
};

use output::{CsvSink, RunRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NO_CONVERGENCE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "diterate",
    version,
    about = "Fluid-diffusion and classical solvers for X = P·X + B on sparse graphs",
    after_help = "Exit codes: 0 converged, 1 usage/IO error, 2 non-convergence."
)]
struct Args {
    /// Edge-list graph file ("src dst" per line, '#' comments).
    #[arg(long)]
    graph: Option<PathBuf>,

    /// Restrict to nodes with id < N; edges touching others are dropped.
    #[arg(long)]
    n: Option<usize>,

    /// Damping factor in (0, 1).
    #[arg(long)]
    d: Option<f64>,

    /// Error target: an absolute value, or "1/N" / "0.01/N" relative to the
    /// effective node count.
    #[arg(long)]
    target: Option<String>,

    /// Algorithm: pi, gs, gsp, di-cyc, di-max, di-max2, di-op, di-op2,
    /// di-op3, di-sop.
    #[arg(long)]
    algo: Option<String>,

    /// Synthetic cost: iterations of x = a*x + b charged per entry use.
    #[arg(long, default_value_t = 0)]
    m: u64,

    /// Operate on the transposed graph.
    #[arg(long)]
    transpose: bool,

    /// Diagonal-term elimination for diffusion variants (the default).
    #[arg(long, conflicts_with = "keep_diag")]
    diag_elim: bool,

    /// Keep diagonal terms: self-loop fluid returns to its node.
    #[arg(long)]
    keep_diag: bool,

    /// Write one CSV trace record per cycle to this file.
    #[arg(long)]
    trace: Option<PathBuf>,

    /// Write the result CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Seed for edge sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Emit the statistics row for the graph instead of solving.
    #[arg(long)]
    stats: bool,

    /// Run the cross product described by a TOML config file.
    #[arg(long)]
    suite: Option<PathBuf>,

    /// Time whole-graph line- and column-iterator traversals.
    #[arg(long)]
    microbench: bool,

    /// Traversal repetitions for --microbench.
    #[arg(long, default_value_t = 100)]
    repeats: u32,

    /// With --stats: also write the per-node degree profile CSV here.
    #[arg(long)]
    degree_profile: Option<PathBuf>,

    /// With --stats: also write a uniform edge sample CSV here.
    #[arg(long)]
    edge_sample: Option<PathBuf>,

    /// Sample size for --edge-sample.
    #[arg(long, default_value_t = 100_000)]
    sample_k: usize,
}

/// Error target: absolute, or relative to the node count.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TargetExpr {
    Absolute(f64),
    OverN(f64),
}

impl TargetExpr {
    pub fn resolve(&self, n: usize) -> f64 {
        match *self {
            TargetExpr::Absolute(v) => v,
            TargetExpr::OverN(numerator) => numerator / n as f64,
        }
    }
}

impl FromStr for TargetExpr {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some(prefix) = s.strip_suffix("/N").or_else(|| s.strip_suffix("/n")) {
            let numerator: f64 = prefix
                .parse()
                .map_err(|e| format!("bad target expression {s:?}: {e}"))?;
            return Ok(TargetExpr::OverN(numerator));
        }
        s.parse::<f64>()
            .map(TargetExpr::Absolute)
            .map_err(|e| format!("bad target expression {s:?}: {e}"))
    }
}

enum Failure {
    Usage(String),
    Io(String),
    NoConvergence(String),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => EXIT_USAGE,
            Failure::NoConvergence(_) => EXIT_NO_CONVERGENCE,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Io(m) | Failure::NoConvergence(m) => m,
        }
    }
}

impl From<diterate::Error> for Failure {
    fn from(e: diterate::Error) -> Self {
        match e {
            diterate::Error::NonConvergence { .. } => Failure::NoConvergence(e.to_string()),
            diterate::Error::Io { .. } | diterate::Error::MalformedLine { .. } => {
                Failure::Io(e.to_string())
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

/// Parses `args` and executes one mode; returns the process exit code.
pub fn run(args: impl IntoIterator<Item = OsString>) -> i32 {
    let args = match Args::try_parse_from(args) {
        Ok(args) => args,
        Err(e) => {
            // Version/help are successful exits; everything else is usage.
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(&args) {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            eprintln!("diterate: {}", failure.message());
            failure.exit_code()
        }
    }
}

fn dispatch(args: &Args) -> Result<(), Failure> {
    if args.suite.is_some() as u8 + args.stats as u8 + args.microbench as u8 > 1 {
        return Err(Failure::Usage(
            "--suite, --stats and --microbench are mutually exclusive".into(),
        ));
    }
    if let Some(config) = &args.suite {
        return suite::run_suite(config, args.out.as_deref());
    }
    if args.stats {
        return stats_mode(args);
    }
    if args.microbench {
        return microbench_mode(args);
    }
    run_mode(args)
}

fn load_graph(args: &Args) -> Result<Graph, Failure> {
    let path = args
        .graph
        .as_ref()
        .ok_or_else(|| Failure::Usage("--graph is required".into()))?;
    let graph = Graph::load_edge_list(path, args.n)?;
    Ok(if args.transpose { graph.transpose() } else { graph })
}

fn run_mode(args: &Args) -> Result<(), Failure> {
    let graph = load_graph(args)?;
    let d = args.d.ok_or_else(|| Failure::Usage("--d is required".into()))?;
    let algorithm: Algorithm = args
        .algo
        .as_deref()
        .ok_or_else(|| Failure::Usage("--algo is required".into()))?
        .parse()
        .map_err(Failure::Usage)?;
    let target_expr: TargetExpr = args
        .target
        .as_deref()
        .ok_or_else(|| Failure::Usage("--target is required".into()))?
        .parse()
        .map_err(Failure::Usage)?;
    let target = target_expr.resolve(graph.node_count());
    let flags = RunFlags { diag_elim: !args.keep_diag };

    let op = PageRankOperator::new(&graph, d)?;
    let mut cost = CostModel::new(args.m);
    let mut sink = CsvSink::create(args.out.as_deref())?;
    sink.write_line(output::RUN_HEADER)?;

    let mut row = RunRow {
        algo: algorithm.id(),
        n: graph.node_count(),
        l: graph.edge_count(),
        d,
        target,
        m: args.m,
        transpose: args.transpose,
        diag_elim: flags.diag_elim,
        outcome: None,
    };

    match run_solver(algorithm, &op, target, flags, &mut cost) {
        Ok((result, trace)) => {
            row.outcome = Some(output::Outcome::from_result(&result));
            sink.write_line(&row.to_csv())?;
            if let Some(path) = &args.trace {
                output::write_trace(path, &trace)?;
            }
            Ok(())
        }
        Err(e @ diterate::Error::NonConvergence { .. }) => {
            sink.write_line(&row.to_csv())?;
            Err(Failure::NoConvergence(e.to_string()))
        }
        Err(e) => Err(e.into()),
    }
}

fn stats_mode(args: &Args) -> Result<(), Failure> {
    let graph = load_graph(args)?;
    let stats = graph.stats();
    let n = graph.node_count();
    let mut sink = CsvSink::create(args.out.as_deref())?;
    sink.write_line("n,l,l_per_n,d_per_n,e_per_n,o_per_n,max_in,max_out")?;
    let nf = n as f64;
    sink.write_line(&format!(
        "{},{},{},{},{},{},{},{}",
        n,
        stats.edge_count,
        stats.edge_count as f64 / nf,
        stats.dangling_count as f64 / nf,
        stats.zero_in_closure_count as f64 / nf,
        stats.loop_count as f64 / nf,
        stats.max_in_degree,
        stats.max_out_degree,
    ))?;

    if let Some(path) = &args.degree_profile {
        let mut sink = CsvSink::create(Some(path))?;
        sink.write_line("node,in_degree,out_degree")?;
        for record in graph.degree_profile() {
            sink.write_line(&format!(
                "{},{},{}",
                record.node, record.in_degree, record.out_degree
            ))?;
        }
    }
    if let Some(path) = &args.edge_sample {
        let mut sink = CsvSink::create(Some(path))?;
        sink.write_line("src,dst")?;
        for (src, dst) in graph.edge_sample(args.sample_k, args.seed) {
            sink.write_line(&format!("{src},{dst}"))?;
        }
    }
    Ok(())
}

fn microbench_mode(args: &Args) -> Result<(), Failure> {
    if args.repeats == 0 {
        return Err(Failure::Usage("--repeats must be at least 1".into()));
    }
    let graph = load_graph(args)?;
    let mut sink = CsvSink::create(args.out.as_deref())?;
    sink.write_line("orientation,repeats,entries,checksum,wall_ms")?;
    for orientation in [Orientation::Line, Orientation::Column] {
        let report = iterator_microbench(&graph, orientation, args.repeats);
        sink.write_line(&format!(
            "{},{},{},{},{}",
            orientation.label(),
            args.repeats,
            report.entries_touched,
            report.checksum,
            report.wall.as_secs_f64() * 1e3,
        ))?;
    }
    Ok(())
}
