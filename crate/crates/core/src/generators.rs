//! Seeded two-cluster random graph models and the Gaussian start vector.
//!
//! Every generator visits unordered pairs `(i, j)`, `i < j`, in
//! lexicographic order and draws one uniform per candidate pair from the
//! seed's edge stream, so output depends only on parameters and seed.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Cut, Graph};
use crate::seed::{Purpose, Seed};

fn check_probability(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::argument(format!("{name} = {v} is not a probability")));
    }
    Ok(())
}

fn check_size(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        return Err(Error::argument(format!("{name} must be at least 1")));
    }
    Ok(())
}

/// Two-block stochastic block model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SbmParams {
    pub n1: usize,
    pub n2: usize,
    /// Edge probability inside a cluster.
    pub p: f64,
    /// Edge probability across clusters.
    pub q: f64,
}

impl SbmParams {
    pub fn new(n1: usize, n2: usize, p: f64, q: f64) -> Self {
        SbmParams { n1, n2, p, q }
    }

    pub fn balanced(n: usize, p: f64, q: f64) -> Self {
        SbmParams::new(n / 2, n - n / 2, p, q)
    }

    pub fn n(&self) -> usize {
        self.n1 + self.n2
    }

    pub fn validate(&self) -> Result<()> {
        check_size("n1", self.n1)?;
        check_size("n2", self.n2)?;
        check_probability("p", self.p)?;
        check_probability("q", self.q)
    }
}

/// Bipartite SBM: parts `A1, A2` on one side and `B1, B2` on the other.
/// `Ai`–`Bi` pairs connect with `p`, `Ai`–`Bj` (`i ≠ j`) with `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BsbmParams {
    pub a1: usize,
    pub a2: usize,
    pub b1: usize,
    pub b2: usize,
    pub p: f64,
    pub q: f64,
}

impl BsbmParams {
    pub fn n(&self) -> usize {
        self.a1 + self.a2 + self.b1 + self.b2
    }

    pub fn validate(&self) -> Result<()> {
        check_size("a1", self.a1)?;
        check_size("a2", self.a2)?;
        check_size("b1", self.b1)?;
        check_size("b2", self.b2)?;
        check_probability("p", self.p)?;
        check_probability("q", self.q)
    }
}

/// Degree-corrected SBM with a power-law degree sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DcbmParams {
    pub n1: usize,
    pub n2: usize,
    pub p: f64,
    pub q: f64,
    /// Power-law exponent, in `(2, 3)`.
    pub alpha: f64,
    /// Smallest allowed θ.
    pub theta_min: f64,
    /// Upper truncation of the power law; `None` means `sqrt(n) ln n`
    /// (raised to `theta_min` if smaller).
    pub theta_max: Option<f64>,
}

impl DcbmParams {
    pub fn n(&self) -> usize {
        self.n1 + self.n2
    }

    /// The resolved upper truncation.
    pub fn theta_upper(&self) -> f64 {
        let n = self.n() as f64;
        self.theta_max
            .unwrap_or_else(|| n.sqrt() * n.ln())
            .max(self.theta_min)
    }

    pub fn validate(&self) -> Result<()> {
        check_size("n1", self.n1)?;
        check_size("n2", self.n2)?;
        check_probability("p", self.p)?;
        check_probability("q", self.q)?;
        if !(self.alpha > 2.0 && self.alpha < 3.0) {
            return Err(Error::argument(format!(
                "power-law exponent {} outside (2, 3)",
                self.alpha
            )));
        }
        if !(self.theta_min >= 1.0) || !self.theta_min.is_finite() {
            return Err(Error::argument(format!(
                "theta_min = {} must be a finite value >= 1",
                self.theta_min
            )));
        }
        if let Some(hi) = self.theta_max {
            if !hi.is_finite() {
                return Err(Error::argument("theta_max must be finite"));
            }
        }
        Ok(())
    }
}

/// A generated graph with its planted bipartition.
#[derive(Debug, Clone)]
pub struct Planted {
    pub graph: Graph,
    pub truth: Cut,
}

/// A DCBM sample also exposes the degree parameters it was drawn with.
#[derive(Debug, Clone)]
pub struct DcbmSample {
    pub graph: Graph,
    pub truth: Cut,
    /// Raw θ per node (after the label permutation).
    pub theta: Vec<f64>,
    pub theta_upper: f64,
}

pub fn gen_sbm(params: &SbmParams, seed: Seed) -> Result<Planted> {
    params.validate()?;
    let n = params.n();
    let mut rng = seed.stream(Purpose::GraphEdges);
    let mut edges = Vec::new();
    for i in 0..n {
        let ci = i < params.n1;
        for j in i + 1..n {
            let prob = if ci == (j < params.n1) { params.p } else { params.q };
            if rng.random::<f64>() < prob {
                edges.push((i, j));
            }
        }
    }
    Ok(Planted {
        graph: Graph::from_edges(n, edges)?,
        truth: Cut::new(n, 0..params.n1)?,
    })
}

pub fn gen_bsbm(params: &BsbmParams, seed: Seed) -> Result<Planted> {
    params.validate()?;
    let n = params.n();
    let a_end = params.a1 + params.a2;
    let b1_end = a_end + params.b1;
    // block index: 0 = A1, 1 = A2, 2 = B1, 3 = B2
    let block = |v: usize| -> usize {
        if v < params.a1 {
            0
        } else if v < a_end {
            1
        } else if v < b1_end {
            2
        } else {
            3
        }
    };
    let mut rng = seed.stream(Purpose::GraphEdges);
    let mut edges = Vec::new();
    for i in 0..a_end {
        let bi = block(i);
        for j in a_end..n {
            let prob = if block(j) - 2 == bi { params.p } else { params.q };
            if rng.random::<f64>() < prob {
                edges.push((i, j));
            }
        }
    }
    let truth = Cut::new(n, (0..params.a1).chain(a_end..b1_end))?;
    Ok(Planted {
        graph: Graph::from_edges(n, edges)?,
        truth,
    })
}

/// Draws θ from the discrete power law `P(d) ∝ d^-alpha` on
/// `[ceil(theta_min), floor(theta_upper)]` by inverse CDF, then shuffles
/// the values across nodes.
pub fn sample_power_law_theta(params: &DcbmParams, seed: Seed) -> Result<Vec<f64>> {
    params.validate()?;
    let lo = params.theta_min.ceil() as u64;
    let hi = (params.theta_upper().floor() as u64).max(lo);
    let support = hi - lo + 1;
    if support > 10_000_000 {
        return Err(Error::Resource(format!(
            "power-law support of {support} values is too large"
        )));
    }
    let mut cdf = Vec::with_capacity(support as usize);
    let mut acc = 0.0;
    for d in lo..=hi {
        acc += (d as f64).powf(-params.alpha);
        cdf.push(acc);
    }
    let mut rng = seed.substream(Purpose::GraphEdges, 1, 0);
    let mut theta: Vec<f64> = (0..params.n())
        .map(|_| {
            let u = rng.random::<f64>() * acc;
            let k = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
            (lo + k as u64) as f64
        })
        .collect();
    theta.shuffle(&mut seed.stream(Purpose::Permutation));
    Ok(theta)
}

pub fn gen_dcbm(params: &DcbmParams, seed: Seed) -> Result<DcbmSample> {
    let theta = sample_power_law_theta(params, seed)?;
    let sbm = SbmParams::new(params.n1, params.n2, params.p, params.q);
    let planted = gen_dcbm_with_theta(&sbm, &theta, seed)?;
    Ok(DcbmSample {
        graph: planted.graph,
        truth: planted.truth,
        theta,
        theta_upper: params.theta_upper(),
    })
}

/// DCBM with an explicit degree sequence. θ is normalized to mean 1, and
/// pair `(i, j)` is an edge with probability `min(1, θi θj r)`, `r ∈ {p, q}`
/// by cluster pair. Expected degrees are therefore proportional to θ, and
/// θ ≡ const reproduces [`gen_sbm`] draw for draw.
pub fn gen_dcbm_with_theta(params: &SbmParams, theta: &[f64], seed: Seed) -> Result<Planted> {
    params.validate()?;
    let n = params.n();
    if theta.len() != n {
        return Err(Error::argument(format!(
            "θ has {} entries for {n} nodes",
            theta.len()
        )));
    }
    if theta.iter().any(|&t| !(t > 0.0) || !t.is_finite()) {
        return Err(Error::argument("θ entries must be positive and finite"));
    }
    let mean = theta.iter().sum::<f64>() / n as f64;
    let scaled: Vec<f64> = theta.iter().map(|t| t / mean).collect();
    let mut rng = seed.stream(Purpose::GraphEdges);
    let mut edges = Vec::new();
    for i in 0..n {
        let ci = i < params.n1;
        for j in i + 1..n {
            let r = if ci == (j < params.n1) { params.p } else { params.q };
            let prob = (scaled[i] * scaled[j] * r).min(1.0);
            if rng.random::<f64>() < prob {
                edges.push((i, j));
            }
        }
    }
    Ok(Planted {
        graph: Graph::from_edges(n, edges)?,
        truth: Cut::new(n, 0..params.n1)?,
    })
}

/// `n` i.i.d. standard normal entries from the seed's start-vector stream.
pub fn gen_init_vector(n: usize, seed: Seed) -> Vec<f64> {
    let mut rng = seed.stream(Purpose::InitVector);
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}
