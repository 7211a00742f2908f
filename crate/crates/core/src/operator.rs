//! The damped transition operator over a graph.
//!
//! For an edge `j → i` the operator carries `p_ij = d / outdeg(j)`, so every
//! non-dangling column sums to `d` and dangling columns are empty: no
//! completion is applied, the mass diffused at a dangling node simply leaves
//! the system and is accounted for separately. Entry weights are derived
//! from the out-degrees on the fly rather than stored per edge.

use crate::graph::Graph;
use crate::{Error, Result};

/// Damped PageRank-style operator: a graph plus a damping factor in (0, 1).
#[derive(Clone, Debug)]
pub struct PageRankOperator<'g> {
    graph: &'g Graph,
    damping: f64,
    self_loop: Box<[bool]>,
}

/// Non-negative per-node mass vector.
#[derive(Clone, Debug, PartialEq)]
pub struct FluidVector {
    values: Vec<f64>,
}

impl FluidVector {
    pub fn from_values(values: Vec<f64>) -> Self {
        FluidVector { values }
    }

    pub fn uniform(n: usize, value: f64) -> Self {
        FluidVector { values: vec![value; n] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.values
    }
}

impl std::ops::Index<usize> for FluidVector {
    type Output = f64;

    fn index(&self, index: usize) -> &f64 {
        &self.values[index]
    }
}

impl<'g> PageRankOperator<'g> {
    /// Wraps `graph` with damping `d`. Errors unless `0 < d < 1`.
    pub fn new(graph: &'g Graph, damping: f64) -> Result<Self> {
        if !(damping > 0.0 && damping < 1.0) {
            return Err(Error::InvalidDamping(damping));
        }
        let self_loop = (0..graph.node_count()).map(|i| graph.has_self_loop(i)).collect();
        Ok(PageRankOperator { graph, damping, self_loop })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn damping(&self) -> f64 {
        self.damping
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn is_dangling(&self, node: usize) -> bool {
        self.graph.out_degree(node) == 0
    }

    /// Weight carried by every edge leaving `node`: `d / outdeg(node)`.
    ///
    /// Zero for dangling nodes (which have no edges).
    pub fn out_weight(&self, node: usize) -> f64 {
        let deg = self.graph.out_degree(node);
        if deg == 0 {
            0.0
        } else {
            self.damping / deg as f64
        }
    }

    /// Diagonal entry `p_ii`: the out-weight if `node` has a self-loop.
    pub fn diag_weight(&self, node: usize) -> f64 {
        if self.self_loop[node] {
            self.out_weight(node)
        } else {
            0.0
        }
    }

    /// Per-node source term `b_i = (1 - d) / n`.
    pub fn source_term(&self) -> f64 {
        (1.0 - self.damping) / self.node_count() as f64
    }

    /// The starting fluid `F_0 = B`: every entry `(1 - d) / n`.
    pub fn initial_fluid(&self) -> FluidVector {
        FluidVector::uniform(self.node_count(), self.source_term())
    }

    /// Sums the entries of column `node`: `d` for a non-dangling node, `0`
    /// for a dangling one.
    pub fn column_sum(&self, node: usize) -> Result<f64> {
        let n = self.node_count();
        if node >= n {
            return Err(Error::NodeOutOfRange { node, nodes: n });
        }
        let w = self.out_weight(node);
        Ok(self.graph.children(node).iter().map(|_| w).sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use proptest::prelude::*;

    fn g3() -> Graph {
        Graph::from_edges(3, [(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    fn c2() -> Graph {
        Graph::from_edges(2, [(0, 1), (1, 0)]).unwrap()
    }

    #[test]
    fn weights_of_g3() {
        let g = g3();
        let op = PageRankOperator::new(&g, 0.5).unwrap();
        assert_eq!(op.out_weight(0), 0.25);
        assert_eq!(op.out_weight(1), 0.5);
        assert_eq!(op.out_weight(2), 0.0);
        assert!(op.is_dangling(2));
        assert!(!op.is_dangling(0));
        assert_eq!(op.diag_weight(0), 0.0);
    }

    #[test]
    fn weights_of_c2() {
        let g = c2();
        let op = PageRankOperator::new(&g, 0.5).unwrap();
        assert_eq!(op.out_weight(0), 0.5);
        assert_eq!(op.out_weight(1), 0.5);
        assert_eq!(op.column_sum(1).unwrap(), 0.5);
    }

    #[test]
    fn damping_must_be_strictly_inside_unit_interval() {
        let g = g3();
        for bad in [0.0, 1.0, -0.3, 1.5, f64::NAN] {
            assert!(matches!(PageRankOperator::new(&g, bad), Err(Error::InvalidDamping(_))));
        }
    }

    #[test]
    fn initial_fluid_examples() {
        let g = g3();
        let op = PageRankOperator::new(&g, 0.5).unwrap();
        let f = op.initial_fluid();
        for &v in f.values() {
            assert_eq!(v, 0.5 / 3.0);
        }
        assert!((f.l1_norm() - 0.5).abs() <= 1e-15 * 3.0);

        let single = Graph::from_edges(1, []).unwrap();
        let op = PageRankOperator::new(&single, 0.85).unwrap();
        let f = op.initial_fluid();
        assert!((f[0] - 0.15).abs() < 1e-15);
    }

    #[test]
    fn column_sum_examples() {
        let g = g3();
        let op = PageRankOperator::new(&g, 0.5).unwrap();
        assert_eq!(op.column_sum(0).unwrap(), 0.5);
        assert_eq!(op.column_sum(2).unwrap(), 0.0);
        assert!(matches!(op.column_sum(3), Err(Error::NodeOutOfRange { node: 3, nodes: 3 })));
    }

    #[test]
    fn diag_weight_sees_self_loops() {
        let g = Graph::from_edges(2, [(0, 0), (0, 1)]).unwrap();
        let op = PageRankOperator::new(&g, 0.5).unwrap();
        assert_eq!(op.diag_weight(0), 0.25);
        assert_eq!(op.diag_weight(1), 0.0);
        assert!(op.diag_weight(0) < 1.0);
    }

    proptest! {
        // Every column sums to d or to 0, nothing else.
        #[test]
        fn column_sum_dichotomy(
            edges in prop::collection::vec((0usize..24, 0usize..24), 0..200),
            d in 0.05f64..0.99,
        ) {
            let g = Graph::from_edges(24, edges).unwrap();
            let op = PageRankOperator::new(&g, d).unwrap();
            for j in 0..g.node_count() {
                let s = op.column_sum(j).unwrap();
                if op.is_dangling(j) {
                    prop_assert_eq!(s, 0.0);
                } else {
                    prop_assert!((s - d).abs() <= 1e-12);
                }
            }
        }

        #[test]
        fn initial_fluid_mass_is_one_minus_d(
            n in 1usize..200,
            d in 0.05f64..0.99,
        ) {
            let g = Graph::from_edges(n, []).unwrap();
            let op = PageRankOperator::new(&g, d).unwrap();
            let f = op.initial_fluid();
            prop_assert!((f.l1_norm() - (1.0 - d)).abs() <= 1e-15 * n as f64);
        }
    }
}
