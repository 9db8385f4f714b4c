use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// The private protocol.
    Ours,
    /// Randomized response followed by spectral clustering.
    Rr,
    /// Non-private spectral clustering.
    Spectral,
    /// The private protocol without the mean subtraction.
    PicNonelim,
    /// Non-private power iteration over a range of lazy factors.
    PicLazySweep,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Ours => "ours",
            Method::Rr => "rr",
            Method::Spectral => "spectral",
            Method::PicNonelim => "pic-nonelim",
            Method::PicLazySweep => "pic-lazy-sweep",
        }
    }

    /// Whether the method consumes a privacy budget.
    pub fn uses_epsilon(self) -> bool {
        matches!(self, Method::Ours | Method::Rr | Method::PicNonelim)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GraphSource {
    /// Balanced two-block SBM over the grid `n × p × q`.
    Sbm { n: Vec<usize>, p: Vec<f64>, q: Vec<f64> },
    /// A fixed graph, optionally reduced to its k-core.
    EdgeList { path: PathBuf, k: Option<usize> },
}

impl Default for GraphSource {
    fn default() -> Self {
        GraphSource::Sbm {
            n: vec![2000],
            p: vec![0.3],
            q: vec![0.2],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSpec {
    pub methods: Vec<Method>,
    pub source: GraphSource,
    pub epsilons: Vec<f64>,
    /// Number of seeds; seeds run from `first_seed` upwards.
    pub seeds: u64,
    pub first_seed: u64,
    /// Fixed iteration count; overrides the eigen-gap formula.
    pub iterations: Option<usize>,
    pub cap_iters: usize,
    pub clip_factor: f64,
    pub lazy_alphas: Vec<f64>,
    /// Non-private: disable Laplace noise and clipping.
    pub no_noise: bool,
    /// Non-private: disable degree padding.
    pub no_padding: bool,
    /// Size guard of the randomized-response baseline.
    pub rr_max_nodes: usize,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            methods: vec![Method::Ours, Method::Rr],
            source: GraphSource::default(),
            epsilons: vec![0.5, 1.0, 1.5, 2.0, 3.0, 4.0],
            seeds: 10,
            first_seed: 0,
            iterations: None,
            cap_iters: 50,
            clip_factor: ldp_pic::protocol::DEFAULT_CLIP_FACTOR,
            lazy_alphas: (0..10).map(|i| i as f64 / 10.0).collect(),
            no_noise: false,
            no_padding: false,
            rr_max_nodes: ldp_pic::rr::MAX_DENSE_NODES,
            out: None,
        }
    }
}

impl ExperimentSpec {
    pub fn from_toml_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn is_private(&self) -> bool {
        !self.no_noise && !self.no_padding
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            bail!("at least one method is required");
        }
        if self.seeds == 0 {
            bail!("at least one seed is required");
        }
        if self.methods.iter().any(|m| m.uses_epsilon()) && self.epsilons.is_empty() {
            bail!("privacy methods need at least one epsilon");
        }
        if let Some(e) = self.epsilons.iter().find(|e| !(**e > 0.0) || !e.is_finite()) {
            bail!("epsilon must be positive and finite, got {e}");
        }
        if self.cap_iters == 0 {
            bail!("iteration cap must be at least 1");
        }
        if self.methods.contains(&Method::PicLazySweep) && self.lazy_alphas.is_empty() {
            bail!("lazy sweep needs at least one alpha");
        }
        if let Some(a) = self.lazy_alphas.iter().find(|a| !(**a >= 0.0 && **a < 1.0)) {
            bail!("lazy factor must lie in [0, 1), got {a}");
        }
        match &self.source {
            GraphSource::Sbm { n, p, q } => {
                if n.is_empty() || p.is_empty() || q.is_empty() {
                    bail!("SBM source needs at least one n, p and q");
                }
                if let Some(n) = n.iter().find(|n| **n < 4) {
                    bail!("SBM size {n} too small");
                }
                if let Some(x) = p.iter().chain(q).find(|x| !(0.0..=1.0).contains(*x)) {
                    bail!("edge probability {x} outside [0, 1]");
                }
            }
            GraphSource::EdgeList { .. } => {}
        }
        Ok(())
    }

    pub fn seed_values(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.seeds).map(move |s| self.first_seed + s)
    }
}
