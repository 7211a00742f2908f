//! Node-selection strategies for the diffusion sequence.
//!
//! The choice of the sequence `i₁, i₂, …` is the main optimization lever of
//! the diffusion approach. All strategies here are cheap index-order scans
//! (no priority heap): the selection cost itself is part of what the
//! benchmarks measure.
//!
//! A *cycle* is one batch emission: the residual snapshot `r_cycle` (and the
//! fluid maximum for the max-relative rule) is frozen when the batch is
//! computed, and refreshed exactly once per cycle.

use std::str::FromStr;

use crate::diffusion::DiffusionState;
use crate::operator::PageRankOperator;

/// Solver algorithm identifiers, as exposed on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Power iteration (synchronous sweeps, equivalent to Jacobi).
    Pi,
    /// Gauss-Seidel, cyclic sequence, diagonal terms eliminated.
    Gs,
    /// Gauss-Seidel, cyclic sequence, diagonal terms kept.
    GsPrime,
    /// Diffusion, cyclic sequence over nodes with positive fluid.
    DiCyc,
    /// Diffusion, threshold on the fluid, decrement factor 1.2.
    DiMax,
    /// Diffusion, fluid above a tenth of the per-cycle maximum.
    DiMax2,
    /// Diffusion, threshold on the fluid/history ratio after a peel
    /// pre-phase, decrement factor 1.2.
    DiOp,
    /// As [`DiOp`](Algorithm::DiOp) with decrement factor 10.
    DiOp2,
    /// Diffusion, fluid above 0.9 of the per-cycle average `r_cycle / n`.
    DiOp3,
    /// Diffusion, unitary diffusion cost above the average: fluid above
    /// `r_cycle · outdeg / l`.
    DiSop,
}

impl Algorithm {
    pub const ALL: [Algorithm; 10] = [
        Algorithm::Pi,
        Algorithm::Gs,
        Algorithm::GsPrime,
        Algorithm::DiCyc,
        Algorithm::DiMax,
        Algorithm::DiMax2,
        Algorithm::DiOp,
        Algorithm::DiOp2,
        Algorithm::DiOp3,
        Algorithm::DiSop,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Algorithm::Pi => "pi",
            Algorithm::Gs => "gs",
            Algorithm::GsPrime => "gsp",
            Algorithm::DiCyc => "di-cyc",
            Algorithm::DiMax => "di-max",
            Algorithm::DiMax2 => "di-max2",
            Algorithm::DiOp => "di-op",
            Algorithm::DiOp2 => "di-op2",
            Algorithm::DiOp3 => "di-op3",
            Algorithm::DiSop => "di-sop",
        }
    }

    /// The selection rule for diffusion variants; `None` for the classical
    /// baselines.
    pub fn selection(&self) -> Option<Selection> {
        match self {
            Algorithm::Pi | Algorithm::Gs | Algorithm::GsPrime => None,
            Algorithm::DiCyc => Some(Selection::Cyclic),
            Algorithm::DiMax => Some(Selection::FluidThreshold { decrement: 1.2 }),
            Algorithm::DiMax2 => Some(Selection::MaxRelative),
            Algorithm::DiOp => Some(Selection::RatioThreshold { decrement: 1.2 }),
            Algorithm::DiOp2 => Some(Selection::RatioThreshold { decrement: 10.0 }),
            Algorithm::DiOp3 => Some(Selection::AverageRelative),
            Algorithm::DiSop => Some(Selection::UnitCost),
        }
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Algorithm::ALL.iter().copied().find(|a| a.id() == s).ok_or_else(|| {
            let ids: Vec<_> = Algorithm::ALL.iter().map(|a| a.id()).collect();
            format!("unknown algorithm {s:?} (expected one of {})", ids.join(", "))
        })
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

/// Selection rule of a diffusion variant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Selection {
    /// Index order, every node with positive fluid.
    Cyclic,
    /// All nodes with fluid at or above a persistent threshold; when none
    /// qualify the threshold shrinks by the decrement factor and the scan
    /// repeats.
    FluidThreshold { decrement: f64 },
    /// Fluid strictly above a tenth of the cycle-start maximum.
    MaxRelative,
    /// Threshold scheme on the fluid/history ratio (infinite while a node
    /// has fluid but no history yet), after a one-shot pre-phase that
    /// diffuses the zero-in-degree closure in peel order.
    RatioThreshold { decrement: f64 },
    /// Fluid strictly above `0.9 · r_cycle / n`.
    AverageRelative,
    /// Fluid strictly above `r_cycle · outdeg / l`: unitary diffusion cost
    /// above the per-entry average.
    UnitCost,
}

impl Selection {
    fn uses_peel_prephase(&self) -> bool {
        matches!(self, Selection::RatioThreshold { .. })
    }
}

/// Produces the diffusion batches for one run.
#[derive(Clone, Debug)]
pub struct Scheduler {
    selection: Selection,
    /// Threshold for the threshold schemes. NaN until first consulted, then
    /// initialized to the criterion maximum so the first batch is the
    /// argmax set.
    threshold: f64,
    cycle_residual: f64,
    peel_queue: Option<Vec<usize>>,
    cycle_index: u64,
}

impl Scheduler {
    pub fn new(selection: Selection, op: &PageRankOperator) -> Self {
        let peel_queue = if selection.uses_peel_prephase() {
            Some(op.graph().zero_indegree_peel())
        } else {
            None
        };
        Scheduler {
            selection,
            threshold: f64::NAN,
            cycle_residual: f64::NAN,
            peel_queue,
            cycle_index: 0,
        }
    }

    pub fn selection(&self) -> Selection {
        self.selection
    }

    pub fn cycle_index(&self) -> u64 {
        self.cycle_index
    }

    /// Residual snapshot frozen at the start of the current cycle.
    pub fn cycle_residual(&self) -> f64 {
        self.cycle_residual
    }

    /// Computes the next batch of nodes to diffuse, in emission order.
    ///
    /// Must only be called on a non-converged state (`r > 0`). Every batch
    /// is non-empty and every member has positive fluid at emission: when a
    /// strict rule selects nothing, the single fluid argmax is emitted
    /// instead so the run always progresses.
    pub fn next_batch(&mut self, state: &DiffusionState, op: &PageRankOperator) -> Vec<usize> {
        debug_assert!(state.residual() > 0.0, "scheduler queried on a converged state");
        self.cycle_index += 1;
        self.cycle_residual = state.residual();

        if let Some(peel) = self.peel_queue.take() {
            if !peel.is_empty() {
                return peel;
            }
        }

        let f = state.fluid();
        let n = op.node_count();
        let batch = match self.selection {
            Selection::Cyclic => (0..n).filter(|&i| f[i] > 0.0).collect(),
            Selection::FluidThreshold { decrement } => {
                self.threshold_scan(n, decrement, |i| f[i])
            }
            Selection::RatioThreshold { decrement } => {
                let h = state.history();
                self.threshold_scan(n, decrement, |i| if f[i] > 0.0 { f[i] / h[i] } else { 0.0 })
            }
            Selection::MaxRelative => {
                let max = (0..n).map(|i| f[i]).fold(0.0f64, f64::max);
                (0..n).filter(|&i| f[i] > max / 10.0).collect()
            }
            Selection::AverageRelative => {
                let bar = self.cycle_residual / n as f64 * 0.9;
                (0..n).filter(|&i| f[i] > bar).collect()
            }
            Selection::UnitCost => {
                let l = op.graph().edge_count() as f64;
                (0..n)
                    .filter(|&i| f[i] > self.cycle_residual * op.graph().out_degree(i) as f64 / l)
                    .collect()
            }
        };
        if !batch.is_empty() {
            return batch;
        }

        // Progress fallback: a strict rule can select nothing (all unit
        // costs exactly average, say); emit the fluid argmax alone, first
        // index on ties.
        let mut argmax = 0;
        for i in 1..n {
            if f[i] > f[argmax] {
                argmax = i;
            }
        }
        vec![argmax]
    }

    /// Scan-selects every node whose criterion is at or above the current
    /// threshold; while the scan comes up empty the threshold shrinks
    /// multiplicatively and the scan repeats.
    fn threshold_scan(
        &mut self,
        n: usize,
        decrement: f64,
        criterion: impl Fn(usize) -> f64,
    ) -> Vec<usize> {
        loop {
            let mut selected = Vec::new();
            let mut max_crit = 0.0f64;
            for i in 0..n {
                let c = criterion(i);
                if c > max_crit {
                    max_crit = c;
                }
                if c > 0.0 && c >= self.threshold {
                    selected.push(i);
                }
            }
            if !selected.is_empty() {
                return selected;
            }
            if max_crit <= 0.0 {
                return Vec::new();
            }
            if self.threshold.is_nan() || self.threshold.is_infinite() {
                // First consult, or every infinite-ratio node has drained:
                // restart from the (finite) criterion maximum.
                self.threshold = max_crit;
            } else {
                self.threshold /= decrement;
                // Extra divisions without rescanning select the same batch
                // the literal decrement-and-rescan loop would.
                while self.threshold > max_crit {
                    self.threshold /= decrement;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::operator::{FluidVector, PageRankOperator};

    fn g3() -> Graph {
        Graph::from_edges(3, [(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn algorithm_ids_round_trip() {
        for algo in Algorithm::ALL {
            assert_eq!(algo.id().parse::<Algorithm>().unwrap(), algo);
        }
        assert!("dI-cyc".parse::<Algorithm>().is_err());
        assert!("".parse::<Algorithm>().is_err());
    }

    #[test]
    fn unit_cost_on_g3_selects_the_dangling_node() {
        // r = 0.5, l = 3, out-degrees (2, 1, 0): the thresholds are 1/3,
        // 1/6, 0 while every fluid entry is 1/6. Only node 2 passes the
        // strict comparison.
        let g = g3();
        let op = PageRankOperator::new(&g, 0.5).unwrap();
        let state = DiffusionState::new(&op);
        let mut sched = Scheduler::new(Selection::UnitCost, &op);
        assert_eq!(sched.next_batch(&state, &op), vec![2]);
        assert_eq!(sched.cycle_index(), 1);
        assert_eq!(sched.cycle_residual(), 0.5);
    }

    #[test]
    fn average_relative_on_g3_selects_everything() {
        // Threshold 0.5/3 · 0.9 = 0.15 < 1/6.
        let g = g3();
        let op = PageRankOperator::new(&g, 0.5).unwrap();
        let state = DiffusionState::new(&op);
        let mut sched = Scheduler::new(Selection::AverageRelative, &op);
        assert_eq!(sched.next_batch(&state, &op), vec![0, 1, 2]);
    }

    #[test]
    fn cyclic_skips_zero_fluid() {
        let g = g3();
        let op = PageRankOperator::new(&g, 0.5).unwrap();
        let state =
            DiffusionState::from_fluid(&op, FluidVector::from_values(vec![0.0, 0.2, 0.0]));
        let mut sched = Scheduler::new(Selection::Cyclic, &op);
        assert_eq!(sched.next_batch(&state, &op), vec![1]);
    }

    #[test]
    fn fluid_threshold_starts_at_the_maximum() {
        let g = g3();
        let op = PageRankOperator::new(&g, 0.5).unwrap();
        let state =
            DiffusionState::from_fluid(&op, FluidVector::from_values(vec![0.1, 0.4, 0.2]));
        let mut sched = Scheduler::new(Selection::FluidThreshold { decrement: 1.2 }, &op);
        assert_eq!(sched.next_batch(&state, &op), vec![1]);
        // Threshold persists: 0.4, then shrinks by 1.2 until 0.2 qualifies.
        let state =
            DiffusionState::from_fluid(&op, FluidVector::from_values(vec![0.1, 0.0, 0.2]));
        assert_eq!(sched.next_batch(&state, &op), vec![2]);
    }

    #[test]
    fn max_relative_selects_above_tenth_of_maximum() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let op = PageRankOperator::new(&g, 0.5).unwrap();
        let state = DiffusionState::from_fluid(
            &op,
            FluidVector::from_values(vec![1.0, 0.11, 0.1, 0.05]),
        );
        let mut sched = Scheduler::new(Selection::MaxRelative, &op);
        assert_eq!(sched.next_batch(&state, &op), vec![0, 1]);
    }

    #[test]
    fn ratio_threshold_drains_the_peel_first() {
        let g = g3();
        let op = PageRankOperator::new(&g, 0.5).unwrap();
        let mut state = DiffusionState::new(&op);
        let mut sched = Scheduler::new(Selection::RatioThreshold { decrement: 1.2 }, &op);
        let batch = sched.next_batch(&state, &op);
        assert_eq!(batch, vec![0, 1, 2]);
        for node in batch {
            state.diffuse(&op, node, true).unwrap();
        }
        // The whole graph is in the closure here, so the run is done.
        assert_eq!(state.residual(), 0.0);
    }

    #[test]
    fn ratio_threshold_handles_infinite_ratios() {
        // Cycle graph: no peel. All ratios start infinite (h = 0).
        let g = Graph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        let op = PageRankOperator::new(&g, 0.5).unwrap();
        let mut state = DiffusionState::new(&op);
        let mut sched = Scheduler::new(Selection::RatioThreshold { decrement: 1.2 }, &op);

        let batch = sched.next_batch(&state, &op);
        assert_eq!(batch, vec![0, 1]);
        for node in batch {
            state.diffuse(&op, node, true).unwrap();
        }
        // Both histories are now positive; ratios are finite again and the
        // scheduler must still make progress.
        let batch = sched.next_batch(&state, &op);
        assert!(!batch.is_empty());
        for &node in &batch {
            assert!(state.fluid()[node] > 0.0);
        }
    }

    #[test]
    fn strict_rules_fall_back_to_the_argmax() {
        // Symmetric 2-cycle: each unit cost equals the average exactly, so
        // the strict comparison selects nothing.
        let g = Graph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        let op = PageRankOperator::new(&g, 0.5).unwrap();
        let state = DiffusionState::new(&op);
        let mut sched = Scheduler::new(Selection::UnitCost, &op);
        assert_eq!(sched.next_batch(&state, &op), vec![0]);
    }

    #[test]
    fn batches_only_contain_positive_fluid() {
        let g = crate::synth::random_graph(&crate::synth::RandomGraphConfig {
            nodes: 40,
            density: 0.1,
            self_loop_probability: 0.1,
            force_dangling: 3,
            seed: 3,
        });
        let op = PageRankOperator::new(&g, 0.85).unwrap();
        for selection in [
            Selection::Cyclic,
            Selection::FluidThreshold { decrement: 1.2 },
            Selection::MaxRelative,
            Selection::RatioThreshold { decrement: 1.2 },
            Selection::RatioThreshold { decrement: 10.0 },
            Selection::AverageRelative,
            Selection::UnitCost,
        ] {
            let mut state = DiffusionState::new(&op);
            let mut sched = Scheduler::new(selection, &op);
            for _ in 0..50 {
                state.refresh_residual();
                if state.residual() == 0.0 {
                    break;
                }
                let batch = sched.next_batch(&state, &op);
                assert!(!batch.is_empty());
                for &node in &batch {
                    assert!(
                        state.fluid()[node] > 0.0,
                        "{selection:?} emitted node {node} with zero fluid"
                    );
                    state.diffuse(&op, node, true).unwrap();
                }
            }
        }
    }
}
