//! Exact distance to the limit, corrected for dangling-node leakage.
//!
//! When every column of `P` sums to `d`, the residual mass alone gives the
//! exact L1 distance to the limit: `|H_∞ − H_n|₁ = r_n / (1 − d)`. Dangling
//! columns sum to zero instead, and the mass `e_n` diffused at dangling
//! nodes would have had to be re-injected uniformly — and the re-injected
//! mass leaks again, and so on. Summing the geometric cascade turns the
//! naive starting mass `1 − d` into `(1 − d)² / (1 − d − d·e_n)`, so that
//!
//! ```text
//! |H_∞ − (1 − d)/(1 − d − d·e_n) · H_n|₁ = r_n / (1 − d − d·e_n)
//! ```
//!
//! where `H_∞` is the completed fixed point. The left-hand scaling is the
//! final renormalization; the right-hand side is the corrected error used
//! as the convergence criterion by every solver in this crate.

use crate::diffusion::DiffusionState;
use crate::{Error, Result};

/// A `(r, e, d)` triple with its corrected error.
#[derive(Clone, Copy, Debug)]
pub struct ErrorSnapshot {
    pub residual: f64,
    pub leak: f64,
    pub damping: f64,
    pub corrected: f64,
}

impl ErrorSnapshot {
    pub fn new(residual: f64, leak: f64, damping: f64) -> Result<Self> {
        Ok(ErrorSnapshot {
            residual,
            leak,
            damping,
            corrected: corrected_error(residual, leak, damping)?,
        })
    }
}

/// The exact L1 distance to the completed limit after renormalization:
/// `r / (1 − d − d·e)`.
///
/// Errors when the denominator is not positive, which no legal leak value
/// can produce; it signals corrupted accounting upstream.
pub fn corrected_error(residual: f64, leak: f64, damping: f64) -> Result<f64> {
    let denominator = 1.0 - damping - damping * leak;
    if denominator <= 0.0 {
        return Err(Error::LeakAccounting { denominator });
    }
    Ok(residual / denominator)
}

/// Scales every history entry by `(1 − d)/(1 − d − d·e)`, mapping the
/// uncompleted trajectory onto the completed limit.
pub fn renormalize(h: &[f64], leak: f64, damping: f64) -> Result<Vec<f64>> {
    let denominator = 1.0 - damping - damping * leak;
    if denominator <= 0.0 {
        return Err(Error::LeakAccounting { denominator });
    }
    let factor = (1.0 - damping) / denominator;
    Ok(h.iter().map(|&v| v * factor).collect())
}

/// Whether the state's corrected error is within `target`.
///
/// This is the convergence test all solvers run once per cycle; it is an
/// indirect operation, not counted as entry work.
pub fn target_reached(state: &DiffusionState, damping: f64, target: f64) -> Result<bool> {
    Ok(corrected_error(state.residual(), state.leak(), damping)? <= target)
}
