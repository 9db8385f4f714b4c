//! Undirected simple graphs, cuts and the metrics defined on them.

mod cut;
pub mod io;
mod kcore;
mod metrics;

pub use cut::Cut;
pub use kcore::{k_core, KCore};
pub use metrics::{
    conductance, d_norm, d_norm_degree_sum, d_vol, d_vol_degree_sum, degree_volume, edges_across,
    volume,
};

use crate::error::{Error, Result};

/// Undirected simple graph on nodes `0..n`.
///
/// Stored as compressed per-node neighbor lists, each sorted ascending and
/// free of duplicates and self-loops. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl Graph {
    /// Graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            neighbors: Vec::new(),
        }
    }

    /// Builds a graph from undirected edges. Self-loops are dropped and
    /// duplicate or reversed edges collapse to one.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n > u32::MAX as usize {
            return Err(Error::argument(format!("node count {n} exceeds u32 range")));
        }
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::argument(format!(
                    "edge ({u}, {v}) out of range for {n} nodes"
                )));
            }
            if u != v {
                pairs.push((u as u32, v as u32));
            }
        }
        Ok(Self::from_checked_pairs(n, &pairs))
    }

    /// Builds a graph from per-node neighbor lists, which must already be
    /// symmetric and loop-free.
    pub fn from_adjacency(adjacency: Vec<Vec<usize>>) -> Result<Self> {
        let n = adjacency.len();
        let mut pairs = Vec::new();
        for (i, row) in adjacency.iter().enumerate() {
            for &j in row {
                if j >= n {
                    return Err(Error::argument(format!(
                        "neighbor {j} of node {i} out of range for {n} nodes"
                    )));
                }
                if j == i {
                    return Err(Error::argument(format!("self-loop at node {i}")));
                }
                if !adjacency[j].contains(&i) {
                    return Err(Error::argument(format!(
                        "asymmetric adjacency: {j} in row {i} but {i} not in row {j}"
                    )));
                }
                pairs.push((i as u32, j as u32));
            }
        }
        Ok(Self::from_checked_pairs(n, &pairs))
    }

    fn from_checked_pairs(n: usize, pairs: &[(u32, u32)]) -> Self {
        let mut degree = vec![0usize; n];
        for &(u, v) in pairs {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + degree[i];
        }
        let mut fill = offsets.clone();
        let mut raw = vec![0u32; offsets[n]];
        for &(u, v) in pairs {
            raw[fill[u as usize]] = v;
            fill[u as usize] += 1;
            raw[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        // sort and dedup each row, compacting in place
        let mut neighbors = Vec::with_capacity(raw.len());
        let mut compact = vec![0usize; n + 1];
        for i in 0..n {
            let row = &mut raw[offsets[i]..offsets[i + 1]];
            row.sort_unstable();
            let start = neighbors.len();
            for &j in row.iter() {
                if neighbors.len() == start || *neighbors.last().unwrap() != j {
                    neighbors.push(j);
                }
            }
            compact[i + 1] = neighbors.len();
        }
        neighbors.shrink_to_fit();
        Graph {
            offsets: compact,
            neighbors,
        }
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    /// Number of neighbors of node `i`.
    pub fn degree(&self, i: usize) -> Result<usize> {
        self.check_node(i)?;
        Ok(self.offsets[i + 1] - self.offsets[i])
    }

    /// Sorted neighbor list of node `i`. Panics if `i` is out of range.
    #[inline]
    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).min()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.node_count()
            && j < self.node_count()
            && self.neighbors(i).binary_search(&(j as u32)).is_ok()
    }

    /// First node with no neighbors, if any.
    pub fn first_isolated(&self) -> Option<usize> {
        self.offsets.windows(2).position(|w| w[0] == w[1])
    }

    /// Each undirected edge once as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| (v as usize) > u)
                .map(move |&v| (u, v as usize))
        })
    }

    /// Subgraph induced by `nodes`; node `k` of the result is `nodes[k]`.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Result<Graph> {
        let n = self.node_count();
        let mut position = vec![u32::MAX; n];
        for (k, &v) in nodes.iter().enumerate() {
            self.check_node(v)?;
            if position[v] != u32::MAX {
                return Err(Error::argument(format!("node {v} listed twice")));
            }
            position[v] = k as u32;
        }
        let mut pairs = Vec::new();
        for (k, &v) in nodes.iter().enumerate() {
            for &w in self.neighbors(v) {
                let pw = position[w as usize];
                if pw != u32::MAX && (k as u32) < pw {
                    pairs.push((k as u32, pw));
                }
            }
        }
        Ok(Self::from_checked_pairs(nodes.len(), &pairs))
    }

    pub(crate) fn check_node(&self, i: usize) -> Result<()> {
        if i >= self.node_count() {
            return Err(Error::argument(format!(
                "node index {i} out of range for {} nodes",
                self.node_count()
            )));
        }
        Ok(())
    }
}
