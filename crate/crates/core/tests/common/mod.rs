#![allow(dead_code)]

use std::collections::VecDeque;

use ldp_pic::generators::{gen_sbm, SbmParams};
use ldp_pic::graph::Graph;
use ldp_pic::Seed;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn erdos_renyi(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn is_connected(g: &Graph) -> bool {
    let n = g.node_count();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if !seen[w as usize] {
                seen[w as usize] = true;
                count += 1;
                queue.push_back(w as usize);
            }
        }
    }
    count == n
}

/// `count` connected graphs with sizes in `sizes`, alternating between
/// Erdős–Rényi and two-block SBM.
pub fn random_connected_graphs(count: usize, sizes: std::ops::RangeInclusive<usize>, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut k = 0u64;
    while out.len() < count {
        let n = rng.random_range(sizes.clone());
        let g = if out.len() % 2 == 0 {
            let p = rng.random_range(0.1f64..0.6).max(3.0 * (n as f64).ln() / n as f64).min(1.0);
            erdos_renyi(n, p, &mut rng)
        } else {
            let p = rng.random_range(0.3..0.9);
            let q = rng.random_range(0.05..0.3);
            gen_sbm(&SbmParams::balanced(n, p, q), Seed(seed.wrapping_mul(1000) + k)).unwrap().graph
        };
        k += 1;
        if is_connected(&g) {
            out.push(g);
        }
    }
    out
}

pub fn adjacency(g: &Graph) -> DMatrix<f64> {
    let n = g.node_count();
    let mut a = DMatrix::zeros(n, n);
    for (u, v) in g.edges() {
        a[(u, v)] = 1.0;
        a[(v, u)] = 1.0;
    }
    a
}

/// `W = ½I + ½D⁻¹A`, built from scratch.
pub fn dense_lazy_walk(g: &Graph) -> DMatrix<f64> {
    let a = adjacency(g);
    let n = g.node_count();
    let mut w = DMatrix::zeros(n, n);
    for i in 0..n {
        let d: f64 = a.row(i).sum();
        for j in 0..n {
            w[(i, j)] = 0.5 * a[(i, j)] / d;
        }
        w[(i, i)] += 0.5;
    }
    w
}

/// `W̃ = W − J/n`.
pub fn dense_deflated(g: &Graph) -> DMatrix<f64> {
    let n = g.node_count();
    dense_lazy_walk(g).map(|v| v - 1.0 / n as f64)
}

/// Eigenvalues of `W` through the symmetric `D^{1/2} W D^{-1/2}`, descending.
pub fn lazy_walk_spectrum(g: &Graph) -> Vec<f64> {
    let a = adjacency(g);
    let n = g.node_count();
    let inv_sqrt: Vec<f64> = (0..n).map(|i| 1.0 / a.row(i).sum().sqrt()).collect();
    let mut s = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            s[(i, j)] = 0.5 * inv_sqrt[i] * a[(i, j)] * inv_sqrt[j];
        }
        s[(i, i)] += 0.5;
    }
    let mut ev: Vec<f64> = s.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|x, y| y.partial_cmp(x).unwrap());
    ev
}

pub fn power(m: &DMatrix<f64>, x: &[f64], t: usize) -> Vec<f64> {
    let mut v = DVector::from_column_slice(x);
    for _ in 0..t {
        v = m * v;
    }
    v.iter().copied().collect()
}

/// Smallest `k` with `P(Bin(trials, p) ≤ k) ≥ level`.
pub fn binomial_quantile(trials: u64, p: f64, level: f64) -> u64 {
    let mut pmf = (1.0 - p).powf(trials as f64);
    let mut cdf = pmf;
    let mut k = 0u64;
    while cdf < level {
        pmf *= (trials - k) as f64 / (k + 1) as f64 * p / (1.0 - p);
        k += 1;
        cdf += pmf;
    }
    k
}
