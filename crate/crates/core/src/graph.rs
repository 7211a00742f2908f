//! Immutable sparse directed graphs in dual orientation.
//!
//! A [`Graph`] stores both orientations of the adjacency structure in
//! compressed form: `children(j)` is the support of column `j` of the
//! transition matrix (diffusion order), `parents(i)` the support of line `i`
//! (collection order). Graphs are loaded from plain edge-list text files,
//! one `src dst` pair per line, and are immutable afterwards, so they can be
//! shared freely across threads.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Sparse directed graph over nodes `0..n`, stored in both orientations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    child_offsets: Box<[usize]>,
    child_ids: Box<[usize]>,
    parent_offsets: Box<[usize]>,
    parent_ids: Box<[usize]>,
}

/// Degree statistics of a graph.
///
/// `zero_in_closure_count` counts the closure of the "no incoming links"
/// base under "all parents already classified": exactly the nodes whose
/// fluid reaches zero after finitely many diffusions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphStats {
    pub edge_count: usize,
    pub dangling_count: usize,
    pub zero_in_closure_count: usize,
    pub loop_count: usize,
    pub max_in_degree: usize,
    pub max_out_degree: usize,
}

/// One row of the per-node degree profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeRecord {
    pub node: usize,
    pub in_degree: usize,
    pub out_degree: usize,
}

impl Graph {
    /// Builds a graph over `0..n` from an edge list.
    ///
    /// Duplicate edges are collapsed; self-loops are kept. Errors if an
    /// endpoint is `>= n`.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut list: Vec<(usize, usize)> = edges.into_iter().collect();
        for &(src, dst) in &list {
            let worst = src.max(dst);
            if worst >= n {
                return Err(Error::NodeOutOfRange { node: worst, nodes: n });
            }
        }
        list.sort_unstable();
        list.dedup();

        let mut child_offsets = vec![0usize; n + 1];
        for &(src, _) in &list {
            child_offsets[src + 1] += 1;
        }
        for i in 1..=n {
            child_offsets[i] += child_offsets[i - 1];
        }
        let child_ids: Vec<usize> = list.iter().map(|&(_, dst)| dst).collect();

        let mut parent_offsets = vec![0usize; n + 1];
        for &(_, dst) in &list {
            parent_offsets[dst + 1] += 1;
        }
        for i in 1..=n {
            parent_offsets[i] += parent_offsets[i - 1];
        }
        let mut cursor = parent_offsets[..n].to_vec();
        let mut parent_ids = vec![0usize; list.len()];
        // The edge list is sorted by (src, dst), so each parent list comes
        // out sorted as well.
        for &(src, dst) in &list {
            parent_ids[cursor[dst]] = src;
            cursor[dst] += 1;
        }

        Ok(Graph {
            child_offsets: child_offsets.into_boxed_slice(),
            child_ids: child_ids.into_boxed_slice(),
            parent_offsets: parent_offsets.into_boxed_slice(),
            parent_ids: parent_ids.into_boxed_slice(),
        })
    }

    /// Loads a graph from an edge-list text file.
    ///
    /// Each non-empty line holds two whitespace-separated node ids
    /// `src dst`; lines starting with `#` are comments. With `limit_n` the
    /// node set is `0..limit_n` and every edge touching a node outside it is
    /// dropped; without it the node set runs up to the largest id seen.
    pub fn load_edge_list(path: impl AsRef<Path>, limit_n: Option<usize>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|source| Error::Io { path: path.into(), source })?;
        let reader = BufReader::new(file);

        let mut edges = Vec::new();
        let mut max_id = None::<usize>;
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|source| Error::Io { path: path.into(), source })?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (src, dst) = parse_edge_line(path, idx + 1, trimmed)?;
            if let Some(limit) = limit_n {
                if src >= limit || dst >= limit {
                    continue;
                }
            }
            max_id = Some(max_id.map_or(src.max(dst), |m| m.max(src.max(dst))));
            edges.push((src, dst));
        }

        let n = limit_n.unwrap_or_else(|| max_id.map_or(0, |m| m + 1));
        Self::from_edges(n, edges)
    }

    pub fn node_count(&self) -> usize {
        self.child_offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.child_ids.len()
    }

    /// Successors of `node`: the support of column `node` of `P`.
    pub fn children(&self, node: usize) -> &[usize] {
        &self.child_ids[self.child_offsets[node]..self.child_offsets[node + 1]]
    }

    /// Predecessors of `node`: the support of line `node` of `P`.
    pub fn parents(&self, node: usize) -> &[usize] {
        &self.parent_ids[self.parent_offsets[node]..self.parent_offsets[node + 1]]
    }

    pub fn out_degree(&self, node: usize) -> usize {
        self.child_offsets[node + 1] - self.child_offsets[node]
    }

    pub fn in_degree(&self, node: usize) -> usize {
        self.parent_offsets[node + 1] - self.parent_offsets[node]
    }

    pub fn has_self_loop(&self, node: usize) -> bool {
        self.children(node).binary_search(&node).is_ok()
    }

    /// All edges `(src, dst)` in column order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count())
            .flat_map(move |src| self.children(src).iter().map(move |&dst| (src, dst)))
    }

    /// The reverse graph: every edge `j → i` becomes `i → j`.
    ///
    /// Both orientations are already stored, so this only swaps them.
    pub fn transpose(&self) -> Graph {
        Graph {
            child_offsets: self.parent_offsets.clone(),
            child_ids: self.parent_ids.clone(),
            parent_offsets: self.child_offsets.clone(),
            parent_ids: self.child_ids.clone(),
        }
    }

    /// Computes the degree statistics.
    pub fn stats(&self) -> GraphStats {
        let n = self.node_count();
        let mut dangling = 0;
        let mut loops = 0;
        let mut max_in = 0;
        let mut max_out = 0;
        for i in 0..n {
            let out = self.out_degree(i);
            let inc = self.in_degree(i);
            if out == 0 {
                dangling += 1;
            }
            if self.has_self_loop(i) {
                loops += 1;
            }
            max_in = max_in.max(inc);
            max_out = max_out.max(out);
        }
        GraphStats {
            edge_count: self.edge_count(),
            dangling_count: dangling,
            zero_in_closure_count: self.zero_indegree_peel().len(),
            loop_count: loops,
            max_in_degree: max_in,
            max_out_degree: max_out,
        }
    }

    /// Peels the recursive zero-in-degree closure in topological order.
    ///
    /// Base case: nodes with no incoming links. A node whose parents are all
    /// already peeled is peeled too, so every returned node appears after
    /// all of its parents. Nodes on cycles (including self-loops) are never
    /// returned.
    pub fn zero_indegree_peel(&self) -> Vec<usize> {
        let n = self.node_count();
        let mut remaining: Vec<usize> = (0..n).map(|i| self.in_degree(i)).collect();
        let mut order: Vec<usize> = (0..n).filter(|&i| remaining[i] == 0).collect();
        let mut head = 0;
        while head < order.len() {
            let node = order[head];
            head += 1;
            for &child in self.children(node) {
                remaining[child] -= 1;
                if remaining[child] == 0 {
                    order.push(child);
                }
            }
        }
        order
    }

    /// Per-node `(node, in_degree, out_degree)` records in id order.
    pub fn degree_profile(&self) -> Vec<DegreeRecord> {
        (0..self.node_count())
            .map(|node| DegreeRecord {
                node,
                in_degree: self.in_degree(node),
                out_degree: self.out_degree(node),
            })
            .collect()
    }

    /// Samples `min(k, l)` distinct edges uniformly without replacement.
    ///
    /// Deterministic for a fixed seed.
    pub fn edge_sample(&self, k: usize, seed: u64) -> Vec<(usize, usize)> {
        let l = self.edge_count();
        let amount = k.min(l);
        if amount == 0 {
            return Vec::new();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let picks = rand::seq::index::sample(&mut rng, l, amount);
        let edges: Vec<(usize, usize)> = self.edges().collect();
        picks.into_iter().map(|idx| edges[idx]).collect()
    }
}

fn parse_edge_line(path: &Path, line: usize, text: &str) -> Result<(usize, usize)> {
    let mut fields = text.split_whitespace();
    let malformed = |reason: String| Error::MalformedLine { path: path.into(), line, reason };
    let src = fields
        .next()
        .ok_or_else(|| malformed("missing source id".into()))?
        .parse::<usize>()
        .map_err(|e| malformed(format!("bad source id: {e}")))?;
    let dst = fields
        .next()
        .ok_or_else(|| malformed("missing destination id".into()))?
        .parse::<usize>()
        .map_err(|e| malformed(format!("bad destination id: {e}")))?;
    if let Some(extra) = fields.next() {
        return Err(malformed(format!("unexpected trailing field {extra:?}")));
    }
    Ok((src, dst))
}
