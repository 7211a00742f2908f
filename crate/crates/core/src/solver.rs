//! The run loop: drive any algorithm to a target corrected error.
//!
//! All ten algorithms share the same convergence criterion — the corrected
//! error of [`crate::exact_error`] — evaluated once per cycle (a synchronous
//! sweep for power iteration, a full pass over the nodes for Gauss-Seidel,
//! one scheduler batch for diffusion variants). The evaluation, the
//! per-cycle residual refresh and trace emission are *indirect* operations:
//! they are never counted as entry work and their wall time is tracked
//! separately so reports can exclude them.

use std::time::{Duration, Instant};

use crate::costmodel::CostModel;
use crate::diffusion::{gs_update_with_cost, residual_fluid, DiffusionState};
use crate::exact_error::{corrected_error, renormalize};
use crate::operator::PageRankOperator;
use crate::scheduler::{Algorithm, Scheduler};
use crate::{Error, Result};

/// Per-run switches.
#[derive(Clone, Copy, Debug)]
pub struct RunFlags {
    /// Diagonal-term elimination for the diffusion variants (the
    /// Gauss-Seidel baselines fix their own convention: `gs` eliminates,
    /// `gsp` keeps).
    pub diag_elim: bool,
}

impl Default for RunFlags {
    fn default() -> Self {
        RunFlags { diag_elim: true }
    }
}

/// One per-cycle snapshot of a run.
#[derive(Clone, Copy, Debug)]
pub struct TraceRecord {
    pub cycle: u64,
    pub entry_ops: u64,
    pub nb_iter: f64,
    pub corrected_error: f64,
    pub elapsed_ms: f64,
}

/// Outcome of a converged run.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub algorithm: Algorithm,
    /// Final history, renormalized onto the completed limit.
    pub history: Vec<f64>,
    /// Final leak accumulator.
    pub leak: f64,
    pub entry_ops: u64,
    pub diffusions: u64,
    pub cycles: u64,
    /// `entry_ops / l`: whole-matrix-pass equivalents.
    pub nb_iter: f64,
    pub final_error: f64,
    pub wall: Duration,
    /// Time spent in convergence checks, residual refreshes and trace
    /// emission; subtract from `wall` for iteration-only timing.
    pub indirect_wall: Duration,
    pub checksum: f64,
}

/// Convergence bookkeeping shared by the three loop families.
struct CycleMonitor {
    start: Instant,
    indirect: Duration,
    trace: Vec<TraceRecord>,
    cycle: u64,
    edge_count: u64,
    damping: f64,
    /// Stall guard: the corrected error must shrink by at least the factor
    /// 0.999999 over any window of `10 · n` diffusions.
    window: u64,
    guard_diffusions: u64,
    guard_error: f64,
}

impl CycleMonitor {
    fn new(op: &PageRankOperator, initial_error: f64) -> Self {
        CycleMonitor {
            start: Instant::now(),
            indirect: Duration::ZERO,
            trace: Vec::new(),
            cycle: 0,
            edge_count: op.graph().edge_count() as u64,
            damping: op.damping(),
            window: 10 * op.node_count().max(1) as u64,
            guard_diffusions: 0,
            guard_error: initial_error,
        }
    }

    fn nb_iter(&self, entry_ops: u64) -> f64 {
        if self.edge_count == 0 {
            0.0
        } else {
            entry_ops as f64 / self.edge_count as f64
        }
    }

    fn end_cycle(
        &mut self,
        residual: f64,
        leak: f64,
        entry_ops: u64,
        diffusions: u64,
    ) -> Result<f64> {
        self.cycle += 1;
        let err = corrected_error(residual, leak, self.damping)?;
        self.trace.push(TraceRecord {
            cycle: self.cycle,
            entry_ops,
            nb_iter: self.nb_iter(entry_ops),
            corrected_error: err,
            elapsed_ms: self.start.elapsed().as_secs_f64() * 1e3,
        });
        if diffusions - self.guard_diffusions >= self.window {
            if err > self.guard_error * 0.999999 {
                return Err(Error::NonConvergence { error: err, window: self.window });
            }
            self.guard_diffusions = diffusions;
            self.guard_error = err;
        }
        Ok(err)
    }
}

/// Runs `algorithm` on `op` until the corrected error is within `target`.
///
/// Returns the converged result together with one trace record per cycle.
/// Identical inputs produce identical sequences, counters and bitwise
/// identical history vectors; only the wall-clock fields vary.
pub fn run_solver(
    algorithm: Algorithm,
    op: &PageRankOperator,
    target: f64,
    flags: RunFlags,
    cost: &mut CostModel,
) -> Result<(RunResult, Vec<TraceRecord>)> {
    if target.is_nan() || target <= 0.0 {
        return Err(Error::InvalidTarget(target));
    }
    let d = op.damping();
    let n = op.node_count();
    let start = Instant::now();

    let (history, leak, entry_ops, diffusions, final_error, monitor) = match algorithm {
        Algorithm::Pi => {
            let mut state = DiffusionState::new(op);
            let mut monitor =
                CycleMonitor::new(op, corrected_error(state.residual(), 0.0, d)?);
            let mut err = monitor.guard_error;
            while err > target {
                state.synchronous_sweep_with_cost(op, cost);
                let ind = Instant::now();
                err = monitor.end_cycle(
                    state.residual(),
                    state.leak(),
                    state.entry_ops(),
                    state.diffusions(),
                )?;
                monitor.indirect += ind.elapsed();
            }
            (
                state.history().to_vec(),
                state.leak(),
                state.entry_ops(),
                state.diffusions(),
                err,
                monitor,
            )
        }
        Algorithm::Gs | Algorithm::GsPrime => {
            let keep_diag = algorithm == Algorithm::GsPrime;
            let mut h = vec![0.0f64; n];
            let mut leak = 0.0f64;
            let mut entry_ops = 0u64;
            let mut updates = 0u64;
            let mut monitor =
                CycleMonitor::new(op, corrected_error(op.initial_fluid().l1_norm(), 0.0, d)?);
            let mut err = monitor.guard_error;
            while err > target {
                for node in 0..n {
                    leak += gs_update_with_cost(&mut h, op, node, keep_diag, cost)?;
                    entry_ops += op.graph().in_degree(node) as u64;
                }
                updates += n as u64;
                let ind = Instant::now();
                let residual = residual_fluid(op, &h).l1_norm();
                err = monitor.end_cycle(residual, leak, entry_ops, updates)?;
                monitor.indirect += ind.elapsed();
            }
            (h, leak, entry_ops, updates, err, monitor)
        }
        _ => {
            let selection = algorithm.selection().expect("diffusion variant");
            let mut state = DiffusionState::new(op);
            let mut scheduler = Scheduler::new(selection, op);
            let mut monitor =
                CycleMonitor::new(op, corrected_error(state.residual(), 0.0, d)?);
            let mut err = monitor.guard_error;
            while err > target {
                let batch = scheduler.next_batch(&state, op);
                for &node in &batch {
                    state.diffuse_with_cost(op, node, flags.diag_elim, cost)?;
                }
                let ind = Instant::now();
                state.refresh_residual();
                err = monitor.end_cycle(
                    state.residual(),
                    state.leak(),
                    state.entry_ops(),
                    state.diffusions(),
                )?;
                monitor.indirect += ind.elapsed();
            }
            (
                state.history().to_vec(),
                state.leak(),
                state.entry_ops(),
                state.diffusions(),
                err,
                monitor,
            )
        }
    };

    let result = RunResult {
        algorithm,
        history: renormalize(&history, leak, d)?,
        leak,
        entry_ops,
        diffusions,
        cycles: monitor.cycle,
        nb_iter: monitor.nb_iter(entry_ops),
        final_error,
        wall: start.elapsed(),
        indirect_wall: monitor.indirect,
        checksum: cost.checksum(),
    };
    Ok((result, monitor.trace))
}
