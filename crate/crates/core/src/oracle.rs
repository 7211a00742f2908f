//! Dense ground-truth solvers for desk-scale validation.
//!
//! Both oracles build the full matrix and run Gaussian elimination with
//! partial pivoting, deliberately sharing nothing with the diffusion
//! machinery they validate. [`dense_solve_uncompleted`] solves
//! `(I − P)X = B` with dangling columns left empty;
//! [`dense_pagerank_completed`] fills every dangling column with `d/n`
//! first, which yields the classical PageRank vector of unit mass.

use crate::graph::Graph;
use crate::operator::PageRankOperator;
use crate::{Error, Result};

/// Hard cap on the dense system size.
pub const MAX_DENSE_NODES: usize = 2048;

/// A dense solution together with the achieved `|Ax − b|₁`.
#[derive(Clone, Debug)]
pub struct DenseSolution {
    pub x: Vec<f64>,
    pub residual_norm: f64,
}

/// Solves `(I − P)X = B` for the uncompleted operator.
pub fn dense_solve_uncompleted(op: &PageRankOperator) -> Result<DenseSolution> {
    let matrix = build_system(op.graph(), op.damping(), false);
    solve(matrix, op.node_count(), op.source_term())
}

/// Solves the completed equation: dangling columns filled with `d/n`.
///
/// The solution is the classical PageRank vector; its entries sum to 1.
pub fn dense_pagerank_completed(g: &Graph, damping: f64) -> Result<DenseSolution> {
    if !(damping > 0.0 && damping < 1.0) {
        return Err(Error::InvalidDamping(damping));
    }
    let matrix = build_system(g, damping, true);
    let n = g.node_count();
    solve(matrix, n, (1.0 - damping) / n as f64)
}

/// Dense `A = I − P` in row-major order, optionally with completed dangling
/// columns.
fn build_system(g: &Graph, damping: f64, complete: bool) -> Vec<f64> {
    let n = g.node_count();
    let mut a = vec![0.0f64; n * n];
    for i in 0..n {
        a[i * n + i] = 1.0;
    }
    for j in 0..n {
        let deg = g.out_degree(j);
        if deg == 0 {
            if complete {
                let fill = damping / n as f64;
                for i in 0..n {
                    a[i * n + j] -= fill;
                }
            }
            continue;
        }
        let w = damping / deg as f64;
        for &i in g.children(j) {
            a[i * n + j] -= w;
        }
    }
    a
}

/// Gaussian elimination with partial pivoting on `A x = b`, with `b`
/// uniform. Returns the solution and the residual norm against the original
/// system.
fn solve(a: Vec<f64>, n: usize, b_value: f64) -> Result<DenseSolution> {
    if n > MAX_DENSE_NODES {
        return Err(Error::DenseSizeExceeded { nodes: n, limit: MAX_DENSE_NODES });
    }
    let original = a.clone();
    let mut a = a;
    let mut x = vec![b_value; n];

    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_mag = a[col * n + col].abs();
        for row in col + 1..n {
            let mag = a[row * n + col].abs();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        if pivot_mag < 1e-300 {
            return Err(Error::SingularSystem { pivot: pivot_mag, column: col });
        }
        if pivot_row != col {
            for k in col..n {
                a.swap(col * n + k, pivot_row * n + k);
            }
            x.swap(col, pivot_row);
        }
        let pivot = a[col * n + col];
        for row in col + 1..n {
            let factor = a[row * n + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            a[row * n + col] = 0.0;
            for k in col + 1..n {
                a[row * n + k] -= factor * a[col * n + k];
            }
            x[row] -= factor * x[col];
        }
    }

    for row in (0..n).rev() {
        let mut sum = x[row];
        for k in row + 1..n {
            sum -= a[row * n + k] * x[k];
        }
        x[row] = sum / a[row * n + row];
    }

    let mut residual_norm = 0.0;
    for i in 0..n {
        let mut acc = -b_value;
        for j in 0..n {
            acc += original[i * n + j] * x[j];
        }
        residual_norm += acc.abs();
    }

    Ok(DenseSolution { x, residual_norm })
}
