//! The diffusion engine.
//!
//! A [`DiffusionState`] carries the history vector `H` (mass already
//! diffused, converging to the fixed point of `X = P·X + B`), the fluid
//! vector `F` (mass waiting at each node, `F = B + P·H − H` at all times),
//! the leak accumulator `e` (mass diffused at dangling nodes, lost to the
//! system) and the cached residual `r = |F|₁`.
//!
//! Every reachable state satisfies the conservation law
//!
//! ```text
//! |F|₁ + (1 − d)·|H|₁ + d·e = 1 − d
//! ```
//!
//! which pins `e` down as a function of `H` alone and makes the corrected
//! error formula exact (see [`crate::exact_error`]).
//!
//! Diffusing one node is the elementary step shared by every strategy:
//! applied to all nodes simultaneously it is a Jacobi/power-iteration sweep;
//! applied along any sequence with diagonal-term elimination it produces
//! exactly the Gauss-Seidel history vector for that sequence, which
//! [`gs_update`] computes directly from the predecessor lists.

use crate::costmodel::CostModel;
use crate::operator::{FluidVector, PageRankOperator};
use crate::{Error, Result};

/// Mutable state of one diffusion run.
#[derive(Clone, Debug)]
pub struct DiffusionState {
    h: Vec<f64>,
    f: FluidVector,
    leak: f64,
    residual: f64,
    entry_ops: u64,
    diffusions: u64,
}

impl DiffusionState {
    /// Fresh state: `H = 0`, `F = B`, no leak.
    pub fn new(op: &PageRankOperator) -> Self {
        Self::from_fluid(op, op.initial_fluid())
    }

    /// State with an explicit starting fluid (history and leak reset).
    ///
    /// The conservation law only holds for fluids reachable from `B`; this
    /// is primarily a test hook for exercising single updates.
    pub fn from_fluid(op: &PageRankOperator, fluid: FluidVector) -> Self {
        assert_eq!(fluid.len(), op.node_count());
        let residual = fluid.l1_norm();
        DiffusionState {
            h: vec![0.0; op.node_count()],
            f: fluid,
            leak: 0.0,
            residual,
            entry_ops: 0,
            diffusions: 0,
        }
    }

    pub fn history(&self) -> &[f64] {
        &self.h
    }

    pub fn fluid(&self) -> &FluidVector {
        &self.f
    }

    /// Accumulated mass diffused at dangling nodes.
    pub fn leak(&self) -> f64 {
        self.leak
    }

    /// Cached `|F|₁`, maintained incrementally across diffusions.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn entry_ops(&self) -> u64 {
        self.entry_ops
    }

    pub fn diffusions(&self) -> u64 {
        self.diffusions
    }

    /// Recomputes `r = |F|₁` by full summation, capping incremental drift.
    /// Called once per cycle by the solver.
    pub fn refresh_residual(&mut self) -> f64 {
        self.residual = self.f.l1_norm();
        self.residual
    }

    /// Diffuses `node`: moves its fluid to its children through column
    /// `node` of the operator.
    ///
    /// Let `φ = F_i`, or `φ = F_i / (1 − p_ii)` when `diag_elim` is set and
    /// the node has a self-loop. Then `H_i += φ`, `F_i = 0`, and every child
    /// `c` receives `p_ci · φ`. Without elimination the self-loop share
    /// `p_ii · φ` returns to `F_i` (the node stays eligible); with it the
    /// scaling accounts for all returns at once, as in Gauss-Seidel. If the
    /// node is dangling its fluid leaves the system and is added to the
    /// leak.
    pub fn diffuse(&mut self, op: &PageRankOperator, node: usize, diag_elim: bool) -> Result<()> {
        self.diffuse_with_cost(op, node, diag_elim, &mut CostModel::free())
    }

    /// Like [`diffuse`](Self::diffuse), charging `cost` once per entry use.
    pub fn diffuse_with_cost(
        &mut self,
        op: &PageRankOperator,
        node: usize,
        diag_elim: bool,
        cost: &mut CostModel,
    ) -> Result<()> {
        let n = op.node_count();
        if node >= n {
            return Err(Error::NodeOutOfRange { node, nodes: n });
        }
        let graph = op.graph();
        let f = self.f.as_mut_slice();
        let removed = f[node];
        let diag = if diag_elim { op.diag_weight(node) } else { 0.0 };
        let phi = if diag > 0.0 { removed / (1.0 - diag) } else { removed };

        self.h[node] += phi;
        f[node] = 0.0;

        let w = op.out_weight(node);
        let mut added = 0.0;
        for &child in graph.children(node) {
            cost.charge_entry();
            if diag_elim && child == node {
                continue;
            }
            let share = w * phi;
            f[child] += share;
            added += share;
        }

        if op.is_dangling(node) {
            self.leak += phi;
        }

        self.residual += added - removed;
        self.entry_ops += graph.out_degree(node) as u64;
        self.diffusions += 1;
        Ok(())
    }

    /// One Jacobi step as the simultaneous diffusion of all nodes:
    /// `H += F`, `F ← P·F`, dangling fluid added to the leak.
    ///
    /// Every matrix entry is used regardless of zero fluid, so the step
    /// always costs exactly `l` entry operations.
    pub fn synchronous_sweep(&mut self, op: &PageRankOperator) {
        self.synchronous_sweep_with_cost(op, &mut CostModel::free());
    }

    /// Like [`synchronous_sweep`](Self::synchronous_sweep), charging `cost`
    /// once per entry use.
    pub fn synchronous_sweep_with_cost(&mut self, op: &PageRankOperator, cost: &mut CostModel) {
        let n = op.node_count();
        let graph = op.graph();
        let old = self.f.as_mut_slice();
        let mut new = vec![0.0f64; n];
        for (node, (&phi, h)) in old.iter().zip(self.h.iter_mut()).enumerate() {
            *h += phi;
            if op.is_dangling(node) {
                self.leak += phi;
            }
            let w = op.out_weight(node);
            for &child in graph.children(node) {
                cost.charge_entry();
                new[child] += w * phi;
            }
        }
        old.copy_from_slice(&new);
        self.residual = self.f.l1_norm();
        self.entry_ops += graph.edge_count() as u64;
        self.diffusions += n as u64;
    }

    /// `|F|₁ + (1 − d)·|H|₁ + d·e − (1 − d)`: zero (up to rounding) on every
    /// reachable state.
    pub fn conservation_defect(&self, damping: f64) -> f64 {
        let h_norm: f64 = self.h.iter().map(|v| v.abs()).sum();
        self.f.l1_norm() + (1.0 - damping) * h_norm + damping * self.leak - (1.0 - damping)
    }
}

/// One Gauss-Seidel line update of `h[node]`, returning the leak delta.
///
/// Sets `h[node] = Σ_j p_nj·h[j] + b_n`, where the diagonal term is
/// excluded and the result divided by `1 − p_nn` when `keep_diag` is false
/// (classical Gauss-Seidel, equivalent to diffusion with diagonal
/// elimination), or included with the old `h[node]` when it is true.
///
/// The returned delta is `(new − old)·(1 − p_nn)` for a dangling node and 0
/// otherwise; accumulated over a run it equals the diffusion engine's leak,
/// which makes the corrected error formula available without maintaining
/// the fluid vector.
pub fn gs_update(
    h: &mut [f64],
    op: &PageRankOperator,
    node: usize,
    keep_diag: bool,
) -> Result<f64> {
    gs_update_with_cost(h, op, node, keep_diag, &mut CostModel::free())
}

/// Like [`gs_update`], charging `cost` once per entry use.
pub fn gs_update_with_cost(
    h: &mut [f64],
    op: &PageRankOperator,
    node: usize,
    keep_diag: bool,
    cost: &mut CostModel,
) -> Result<f64> {
    let n = op.node_count();
    if node >= n {
        return Err(Error::NodeOutOfRange { node, nodes: n });
    }
    let mut sum = 0.0;
    for &parent in op.graph().parents(node) {
        cost.charge_entry();
        if parent == node && !keep_diag {
            continue;
        }
        sum += op.out_weight(parent) * h[parent];
    }
    let diag = op.diag_weight(node);
    let old = h[node];
    let new = if keep_diag { sum + op.source_term() } else { (sum + op.source_term()) / (1.0 - diag) };
    h[node] = new;
    if op.is_dangling(node) {
        Ok((new - old) * (1.0 - diag))
    } else {
        Ok(0.0)
    }
}

/// The fluid implied by a history vector: `F_i = b_i + Σ_j p_ij·h_j − h_i`.
///
/// This is what the Gauss-Seidel path evaluates once per sweep to measure
/// its error; along any diffusion trajectory it reproduces the engine's
/// maintained fluid.
pub fn residual_fluid(op: &PageRankOperator, h: &[f64]) -> FluidVector {
    let n = op.node_count();
    assert_eq!(h.len(), n);
    let b = op.source_term();
    let mut values = vec![0.0f64; n];
    for (i, value) in values.iter_mut().enumerate() {
        let mut sum = 0.0;
        for &parent in op.graph().parents(i) {
            sum += op.out_weight(parent) * h[parent];
        }
        *value = b + sum - h[i];
    }
    FluidVector::from_values(values)
}
