//! Deterministic synthetic graphs for tests and benchmarks.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

/// Parameters for [`random_graph`].
#[derive(Clone, Copy, Debug)]
pub struct RandomGraphConfig {
    pub nodes: usize,
    /// Probability of each ordered pair `(i, j)`, `i ≠ j`, being an edge.
    pub density: f64,
    /// Probability of each self-loop.
    pub self_loop_probability: f64,
    /// Number of nodes stripped of all out-edges afterwards.
    pub force_dangling: usize,
    pub seed: u64,
}

/// Dense-ish Bernoulli digraph, reproducible from the seed.
pub fn random_graph(cfg: &RandomGraphConfig) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.nodes;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let p = if i == j { cfg.self_loop_probability } else { cfg.density };
            if p > 0.0 && rng.gen_bool(p.min(1.0)) {
                edges.push((i, j));
            }
        }
    }
    if cfg.force_dangling > 0 && n > 0 {
        let victims = rand::seq::index::sample(&mut rng, n, cfg.force_dangling.min(n));
        let victims: Vec<usize> = victims.into_iter().collect();
        edges.retain(|&(src, _)| !victims.contains(&src));
    }
    Graph::from_edges(n, edges).expect("generated edges are in range")
}

/// Web-shaped benchmark graph: near-uniform out-degrees, power-law
/// in-degrees, a block of pure sources (zero in-degree) and a small block of
/// pure sinks (dangling).
///
/// Node layout: ids `[0, n/8)` never appear as targets, ids `[n - n/50, n)`
/// never appear as sources. Targets are drawn with probability proportional
/// to `(rank + 1)^-0.8` over the remaining pool, so a handful of popular
/// nodes collect most of the mass, as in graphs built from human
/// contributions. The realized edge count lands slightly below
/// `target_edges` because duplicates collapse.
pub fn power_law_graph(n: usize, target_edges: usize, seed: u64) -> Graph {
    assert!(n >= 16, "layout needs at least 16 nodes");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let source_only = n / 8;
    let sink_start = n - n / 50;

    // Inverse-CDF table for the target distribution.
    let pool = sink_start - source_only + (n - sink_start);
    let mut cumulative = Vec::with_capacity(pool);
    let mut total = 0.0f64;
    for rank in 0..pool {
        total += 1.0 / ((rank + 1) as f64).powf(1.05);
        cumulative.push(total);
    }

    let mut edges = Vec::with_capacity(target_edges);
    for _ in 0..target_edges {
        let src = rng.gen_range(0..sink_start);
        let ticket = rng.gen_range(0.0..total);
        let rank = cumulative.partition_point(|&c| c < ticket);
        let dst = source_only + rank;
        edges.push((src, dst));
    }
    Graph::from_edges(n, edges).expect("generated edges are in range")
}
