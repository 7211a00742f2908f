//! Cost accounting: synthetic per-entry work, run reports and the
//! line/column iterator micro-benchmark.
//!
//! The theoretical cost unit is the *entry operation*: one use of a nonzero
//! matrix entry during collection (line orientation) or diffusion (column
//! orientation). `nb_iter = entry_ops / l` converts entry operations into
//! whole-matrix-pass equivalents, so a synchronous sweep costs exactly 1.
//! To emulate operators whose per-entry evaluation dominates the runtime, a
//! [`CostModel`] burns `m` steps of `x = a*x + b` per entry use; the final
//! `x` is folded into a checksum that callers must emit, so the loop cannot
//! be elided.

use std::time::{Duration, Instant};

use crate::graph::Graph;
use crate::solver::RunResult;

/// Synthetic per-entry workload.
#[derive(Clone, Debug)]
pub struct CostModel {
    m: u64,
    a: f64,
    b: f64,
    checksum: f64,
}

impl CostModel {
    /// Loop constants chosen to keep `x` in [1, 2] for any `m`.
    pub const DEFAULT_A: f64 = 0.999999;
    pub const DEFAULT_B: f64 = 1e-6;

    pub fn new(m: u64) -> Self {
        Self::with_constants(m, Self::DEFAULT_A, Self::DEFAULT_B)
    }

    pub fn with_constants(m: u64, a: f64, b: f64) -> Self {
        CostModel { m, a, b, checksum: 0.0 }
    }

    /// A model that charges nothing (`m = 0`).
    pub fn free() -> Self {
        Self::new(0)
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn checksum(&self) -> f64 {
        self.checksum
    }

    /// Charges the synthetic cost of one entry use: `m` iterations of
    /// `x = a*x + b` from `x = 1`, final value folded into the checksum.
    /// With `m = 0` the checksum is left untouched.
    #[inline]
    pub fn charge_entry(&mut self) {
        if self.m == 0 {
            return;
        }
        let (a, b) = (self.a, self.b);
        let mut x = 1.0f64;
        for _ in 0..self.m {
            x = a * x + b;
        }
        self.checksum += x;
    }
}

/// Adjacency orientation used by [`iterator_microbench`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// Predecessor lists (collection order).
    Line,
    /// Successor lists (diffusion order).
    Column,
}

impl Orientation {
    pub fn label(&self) -> &'static str {
        match self {
            Orientation::Line => "line",
            Orientation::Column => "column",
        }
    }
}

/// Output of one [`iterator_microbench`] run.
#[derive(Clone, Copy, Debug)]
pub struct MicrobenchReport {
    /// Sum of all adjacency ids visited, as f64. Consumed by output so the
    /// traversal cannot be optimized away.
    pub checksum: f64,
    /// Number of adjacency entries touched: `l * repeats` for either
    /// orientation.
    pub entries_touched: u64,
    pub wall: Duration,
}

/// Walks the whole adjacency structure `repeats` times in the requested
/// orientation, summing the stored ids.
///
/// Both orientations touch exactly `l * repeats` entries; only the memory
/// access pattern differs, which is the point of the comparison.
pub fn iterator_microbench(g: &Graph, orientation: Orientation, repeats: u32) -> MicrobenchReport {
    assert!(repeats >= 1, "repeats must be at least 1");
    let n = g.node_count();
    let start = Instant::now();
    let mut checksum = 0.0f64;
    let mut entries: u64 = 0;
    for _ in 0..repeats {
        match orientation {
            Orientation::Line => {
                for i in 0..n {
                    let list = g.parents(i);
                    for &p in list {
                        checksum += p as f64;
                    }
                    entries += list.len() as u64;
                }
            }
            Orientation::Column => {
                for i in 0..n {
                    let list = g.children(i);
                    for &c in list {
                        checksum += c as f64;
                    }
                    entries += list.len() as u64;
                }
            }
        }
    }
    MicrobenchReport { checksum, entries_touched: entries, wall: start.elapsed() }
}

/// Cost summary of a finished solver run.
#[derive(Clone, Copy, Debug)]
pub struct CostReport {
    pub entry_ops: u64,
    /// `entry_ops / l`: fractional whole-matrix-pass equivalents.
    pub nb_iter: f64,
    pub wall_ms: f64,
    /// Whether `wall_ms` includes the indirect operations (convergence
    /// tests, trace emission) or only the iteration loop itself.
    pub indirect_included: bool,
}

/// Derives a [`CostReport`] from a run.
///
/// With `include_indirect = false` the time spent in per-cycle convergence
/// checks and trace emission is subtracted from the wall clock.
pub fn time_run(result: &RunResult, include_indirect: bool) -> CostReport {
    let wall = if include_indirect {
        result.wall
    } else {
        result.wall.saturating_sub(result.indirect_wall)
    };
    CostReport {
        entry_ops: result.entry_ops,
        nb_iter: result.nb_iter,
        wall_ms: wall.as_secs_f64() * 1e3,
        indirect_included: include_indirect,
    }
}
