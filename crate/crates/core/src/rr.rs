//! Randomized-response baseline: flip every adjacency bit, then run plain
//! spectral clustering on the result.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Cut, Graph};
use crate::seed::{Purpose, Seed};
use crate::spectral::spectral_cut;

/// Largest node count materialized without an explicit override.
pub const MAX_DENSE_NODES: usize = 30_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlipParams {
    pub epsilon: f64,
    pub flip_probability: f64,
}

impl FlipParams {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(Error::argument(format!("privacy budget must be positive, got {epsilon}")));
        }
        Ok(FlipParams {
            epsilon,
            flip_probability: 1.0 / (epsilon.exp() + 1.0),
        })
    }
}

/// Flips each unordered pair `{i, j}` independently with probability
/// `1/(e^ε + 1)`. Row `i` decides the pairs `j > i` from its own stream.
pub fn randomize_response(g: &Graph, epsilon: f64, seed: Seed) -> Result<Graph> {
    randomize_response_with_limit(g, epsilon, seed, MAX_DENSE_NODES)
}

/// As [`randomize_response`] with a caller-chosen size guard.
pub fn randomize_response_with_limit(g: &Graph, epsilon: f64, seed: Seed, max_nodes: usize) -> Result<Graph> {
    let params = FlipParams::new(epsilon)?;
    let n = g.node_count();
    if n > max_nodes {
        return Err(Error::Resource(format!(
            "randomized response on {n} nodes needs Θ(n²) bits; limit is {max_nodes}"
        )));
    }
    let p = params.flip_probability;
    let rows: Vec<Vec<(usize, usize)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed.substream(Purpose::BaselineFlips, 0, i as u64);
            let nb = g.neighbors(i);
            let mut k = nb.partition_point(|&j| (j as usize) <= i);
            let mut row = Vec::new();
            for j in i + 1..n {
                let present = k < nb.len() && nb[k] as usize == j;
                if present {
                    k += 1;
                }
                let flip = rng.random::<f64>() < p;
                if present != flip {
                    row.push((i, j));
                }
            }
            row
        })
        .collect();
    Graph::from_edges(n, rows.into_iter().flatten())
}

/// Spectral cut of the randomized-response graph.
pub fn rr_spectral_cut(g: &Graph, epsilon: f64, seed: Seed) -> Result<Cut> {
    spectral_cut(&randomize_response(g, epsilon, seed)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;

    #[test]
    fn flip_probability() {
        let f = FlipParams::new(1e-9).unwrap();
        assert!((f.flip_probability - (0.5 - 2.5e-10)).abs() < 1e-15);
        assert!(FlipParams::new(0.0).is_err());
        assert!((FlipParams::new(1.0).unwrap().flip_probability - 0.268_941_421_369_995).abs() < 1e-12);
    }

    #[test]
    fn huge_epsilon_is_identity() {
        let g = fixtures::barbell_triangles();
        let out = randomize_response(&g, 800.0, Seed(4)).unwrap();
        assert_eq!(out, g);
    }

    #[test]
    fn size_guard() {
        let g = Graph::empty(11);
        assert!(matches!(
            randomize_response_with_limit(&g, 1.0, Seed(0), 10),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn flips_empty_graph_at_binomial_rate() {
        let n = 2000usize;
        let out = randomize_response(&Graph::empty(n), 1.0, Seed(0)).unwrap();
        let pairs = (n * (n - 1) / 2) as f64;
        let p = 1.0 / (1f64.exp() + 1.0);
        let mean = pairs * p;
        let sd = (pairs * p * (1.0 - p)).sqrt();
        assert!((out.edge_count() as f64 - mean).abs() < 4.0 * sd);
    }

    #[test]
    fn deterministic() {
        let g = fixtures::complete(40);
        assert_eq!(
            randomize_response(&g, 1.0, Seed(2)).unwrap(),
            randomize_response(&g, 1.0, Seed(2)).unwrap()
        );
    }
}
