use std::collections::VecDeque;

use super::Graph;

/// The k-core of a graph together with the original index of each kept node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KCore {
    pub graph: Graph,
    /// `original[new] = old`, ascending.
    pub original: Vec<usize>,
}

/// Maximal induced subgraph in which every node has degree at least `k`.
///
/// Peels nodes whose residual degree drops below `k` until none remain.
pub fn k_core(g: &Graph, k: usize) -> KCore {
    let n = g.node_count();
    let mut degree = g.degrees();
    let mut removed = vec![false; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| degree[v] < k).collect();
    for &v in &queue {
        removed[v] = true;
    }
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            let w = w as usize;
            if removed[w] {
                continue;
            }
            degree[w] -= 1;
            if degree[w] < k {
                removed[w] = true;
                queue.push_back(w);
            }
        }
    }
    let original: Vec<usize> = (0..n).filter(|&v| !removed[v]).collect();
    let graph = g
        .induced_subgraph(&original)
        .expect("kept nodes are distinct and in range");
    KCore { graph, original }
}
