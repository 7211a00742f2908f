//! Fluid-diffusion solver for the sparse fixed-point equation `X = P·X + B`.
//!
//! The library is organized around a push-based ("diffusion") view of the
//! PageRank class of equations: the matrix `P` carries `d / outdeg(j)` on
//! every edge `j → i`, dangling columns stay empty, and the right-hand side
//! `B` is the uniform vector `(1 − d)/n`. Instead of iterating on the
//! solution vector directly, the engine keeps a *history* vector `H`
//! (accumulated diffused mass, converging to the fixed point) and a *fluid*
//! vector `F = B + P·H − H` (the residual mass waiting at each node), and
//! repeatedly moves the fluid of one selected node to its successors.
//!
//! The crate provides:
//!
//! - [`graph`]: immutable dual-orientation sparse graphs loaded from edge
//!   lists, with degree statistics and the recursive zero-in-degree peel;
//! - [`operator`]: the damped transition operator and its initial fluid;
//! - [`diffusion`]: the diffusion engine, the synchronous (Jacobi) sweep and
//!   the Gauss-Seidel line update, which produces the same history vector as
//!   the diffusion for any node sequence;
//! - [`scheduler`]: the node-selection strategies (cyclic, threshold on
//!   fluid, threshold on fluid/history ratio, per-cycle average rules);
//! - [`solver`]: the run loop driving any strategy to a target error, with
//!   per-cycle trace records;
//! - [`exact_error`]: the exact L1 distance to the limit, corrected for the
//!   fluid that leaks at dangling nodes, and the final renormalization;
//! - [`costmodel`]: entry-operation counting, the synthetic per-entry cost
//!   loop and the line/column iterator micro-benchmark;
//! - [`oracle`]: dense ground-truth solvers for desk-scale validation;
//! - [`synth`]: deterministic random-graph generators for tests and
//!   benchmarks.

pub mod costmodel;
pub mod diffusion;
pub mod exact_error;
pub mod graph;
pub mod operator;
pub mod oracle;
pub mod scheduler;
pub mod solver;
pub mod synth;

use std::path::PathBuf;

pub use costmodel::{iterator_microbench, time_run, CostModel, CostReport, MicrobenchReport, Orientation};
pub use diffusion::{gs_update, residual_fluid, DiffusionState};
pub use exact_error::{corrected_error, renormalize, target_reached, ErrorSnapshot};
pub use graph::{DegreeRecord, Graph, GraphStats};
pub use operator::{FluidVector, PageRankOperator};
pub use oracle::{dense_pagerank_completed, dense_solve_uncompleted, DenseSolution};
pub use scheduler::{Algorithm, Scheduler};
pub use solver::{run_solver, RunFlags, RunResult, TraceRecord};

/// Errors reported by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: malformed edge line: {reason}")]
    MalformedLine { path: PathBuf, line: usize, reason: String },

    #[error("damping factor must lie strictly inside (0, 1), got {0}")]
    InvalidDamping(f64),

    #[error("error target must be positive, got {0}")]
    InvalidTarget(f64),

    #[error("node {node} out of range for a graph of {nodes} nodes")]
    NodeOutOfRange { node: usize, nodes: usize },

    #[error("dense oracle is limited to {limit} nodes, got {nodes}")]
    DenseSizeExceeded { nodes: usize, limit: usize },

    #[error("singular linear system in dense solve (pivot {pivot:e} in column {column})")]
    SingularSystem { pivot: f64, column: usize },

    /// The leak accumulator can never legally reach `(1 − d)/d`; a
    /// non-positive denominator means the bookkeeping is corrupted.
    #[error("leak accounting corrupted: 1 - d - d*e = {denominator}")]
    LeakAccounting { denominator: f64 },

    #[error(
        "no convergence: corrected error {error} failed to decrease over {window} diffusions"
    )]
    NonConvergence { error: f64, window: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
