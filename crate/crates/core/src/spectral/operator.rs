use crate::error::{Error, Result};
use crate::graph::Graph;

/// Which random-walk matrix an operator applies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Walk {
    /// `B = D⁻¹A`.
    Plain,
    /// `W_α = αI + (1 − α)B`.
    Lazy { alpha: f64 },
    /// `W̃_α = W_α − J/n`: the lazy walk with its constant leading eigenvector removed.
    Deflated { alpha: f64 },
}

impl Walk {
    pub fn lazy_factor(self) -> f64 {
        match self {
            Walk::Plain => 0.0,
            Walk::Lazy { alpha } | Walk::Deflated { alpha } => alpha,
        }
    }

    pub fn is_deflated(self) -> bool {
        matches!(self, Walk::Deflated { .. })
    }
}

pub const DEFAULT_LAZY: f64 = 0.5;

/// Matrix-free random-walk operator over a borrowed graph.
///
/// `apply` costs `O(|E| + n)`; the matrix is never formed.
#[derive(Debug, Clone)]
pub struct WalkOperator<'g> {
    graph: &'g Graph,
    walk: Walk,
}

/// `Σ_{j ∈ N(i)} x_j`, summed in ascending neighbor order.
#[inline]
pub fn neighbor_sum(neighbors: &[u32], x: &[f64]) -> f64 {
    neighbors.iter().map(|&j| x[j as usize]).sum()
}

/// One row of the lazy walk: `α x_i + (1 − α) (Σ_{j ∈ N(i)} x_j) / d_i`.
#[inline]
pub fn lazy_walk_entry(alpha: f64, xi: f64, neighbor_sum: f64, degree: f64) -> f64 {
    alpha * xi + (1.0 - alpha) * (neighbor_sum / degree)
}

/// Arithmetic mean, `(1/n) Σ x_j`.
#[inline]
pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

impl<'g> WalkOperator<'g> {
    pub fn new(graph: &'g Graph, walk: Walk) -> Result<Self> {
        let alpha = walk.lazy_factor();
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::argument(format!("lazy factor {alpha} outside [0, 1)")));
        }
        if graph.node_count() == 0 {
            return Err(Error::domain("walk operator on an empty graph"));
        }
        if let Some(i) = graph.first_isolated() {
            return Err(Error::domain(format!(
                "random walk undefined: node {i} is isolated"
            )));
        }
        Ok(WalkOperator { graph, walk })
    }

    pub fn plain(graph: &'g Graph) -> Result<Self> {
        Self::new(graph, Walk::Plain)
    }

    pub fn lazy(graph: &'g Graph, alpha: f64) -> Result<Self> {
        Self::new(graph, Walk::Lazy { alpha })
    }

    pub fn deflated(graph: &'g Graph, alpha: f64) -> Result<Self> {
        Self::new(graph, Walk::Deflated { alpha })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn walk(&self) -> Walk {
        self.walk
    }

    pub fn n(&self) -> usize {
        self.graph.node_count()
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n() {
            return Err(Error::argument(format!(
                "vector of length {} for an operator on {} nodes",
                x.len(),
                self.n()
            )));
        }
        let mut out = vec![0.0; x.len()];
        self.apply_into(x, &mut out);
        Ok(out)
    }

    /// Unchecked variant of [`apply`](Self::apply); panics on length mismatch.
    pub fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        assert_eq!(x.len(), self.n());
        assert_eq!(out.len(), self.n());
        let alpha = self.walk.lazy_factor();
        let shift = if self.walk.is_deflated() { mean(x) } else { 0.0 };
        for (i, o) in out.iter_mut().enumerate() {
            let nb = self.graph.neighbors(i);
            *o = lazy_walk_entry(alpha, x[i], neighbor_sum(nb, x), nb.len() as f64) - shift;
        }
    }

    /// Explicit row-major matrix. For verification on small graphs only.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        let alpha = self.walk.lazy_factor();
        let shift = if self.walk.is_deflated() { 1.0 / n as f64 } else { 0.0 };
        (0..n)
            .map(|i| {
                let nb = self.graph.neighbors(i);
                let d = nb.len() as f64;
                let mut row = vec![-shift; n];
                row[i] += alpha;
                for &j in nb {
                    row[j as usize] += (1.0 - alpha) / d;
                }
                row
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn plain_walk_preserves_constants() {
        let g = complete(3);
        let b = WalkOperator::plain(&g).unwrap();
        assert_eq!(b.apply(&[1.0, 1.0, 1.0]).unwrap(), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn deflated_walk_annihilates_constants() {
        for g in [complete(5), path(7), barbell_triangles(), star(4)] {
            let w = WalkOperator::deflated(&g, 0.5).unwrap();
            let y = w.apply(&vec![1.0; g.node_count()]).unwrap();
            assert!(y.iter().all(|v| v.abs() <= 1e-12), "{y:?}");
        }
    }

    #[test]
    fn lazy_walk_on_path() {
        let g = path(3);
        let w = WalkOperator::lazy(&g, 0.5).unwrap();
        assert_eq!(w.apply(&[1.0, 0.0, 0.0]).unwrap(), vec![0.5, 0.25, 0.0]);
    }

    #[test]
    fn isolated_node_is_named() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        match WalkOperator::plain(&g) {
            Err(Error::Domain(msg)) => assert!(msg.contains("node 2")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn row_sums() {
        let g = barbell_triangles();
        for (walk, want) in [
            (Walk::Plain, 1.0),
            (Walk::Lazy { alpha: 0.3 }, 1.0),
            (Walk::Deflated { alpha: 0.5 }, 0.0),
        ] {
            let m = WalkOperator::new(&g, walk).unwrap().to_dense();
            for row in m {
                assert!((row.iter().sum::<f64>() - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dense_matches_apply() {
        let g = star(4);
        let op = WalkOperator::deflated(&g, 0.5).unwrap();
        let x = [0.3, -1.0, 2.0, 0.5, -0.25];
        let m = op.to_dense();
        let y = op.apply(&x).unwrap();
        for i in 0..5 {
            let dense: f64 = (0..5).map(|j| m[i][j] * x[j]).sum();
            assert!((dense - y[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_lazy_factor() {
        let g = complete(3);
        assert!(WalkOperator::lazy(&g, 1.0).is_err());
        assert!(WalkOperator::lazy(&g, -0.1).is_err());
    }
}
