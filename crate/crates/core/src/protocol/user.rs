use rand::seq::index;

use super::config::ProtocolConfig;
use super::laplace::laplace_sample;
use super::ledger::{PrivacyLedger, QueryLabel};
use crate::error::{Error, Result};
use crate::seed::{Purpose, Seed};
use crate::spectral::{lazy_walk_entry, neighbor_sum};

/// One user's private adjacency row: a sorted neighbor list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyView {
    n: usize,
    neighbors: Vec<u32>,
}

impl AdjacencyView {
    pub fn new(n: usize, mut neighbors: Vec<u32>) -> Self {
        neighbors.sort_unstable();
        neighbors.dedup();
        AdjacencyView { n, neighbors }
    }

    pub fn neighbors(&self) -> &[u32] {
        &self.neighbors
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.neighbors.binary_search(&(j as u32)).is_ok()
    }

    fn insert(&mut self, j: usize) -> bool {
        match self.neighbors.binary_search(&(j as u32)) {
            Ok(_) => false,
            Err(pos) => {
                self.neighbors.insert(pos, j as u32);
                true
            }
        }
    }

    /// Flips bit `j` of the row. Used to build neighboring inputs when
    /// checking sensitivity.
    pub fn toggle(&mut self, j: usize) {
        assert!(j < self.n, "toggle target {j} out of range");
        match self.neighbors.binary_search(&(j as u32)) {
            Ok(pos) => {
                self.neighbors.remove(pos);
            }
            Err(pos) => self.neighbors.insert(pos, j as u32),
        }
    }
}

/// What padding did to one user's row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PaddingOutcome {
    pub added: usize,
    /// The row filled up before reaching δ.
    pub saturated: bool,
}

/// Public statistics of a broadcast vector. Every user derives the same
/// values from the same broadcast, so they are computed once per round.
#[derive(Debug, Clone)]
pub struct RoundInput<'a> {
    /// Round of the broadcast (`t − 1` for the values it feeds).
    pub round: usize,
    pub values: &'a [f64],
    pub max_abs: f64,
    pub mean: f64,
}

impl<'a> RoundInput<'a> {
    pub fn new(round: usize, values: &'a [f64]) -> Self {
        RoundInput {
            round,
            values,
            max_abs: values.iter().fold(0.0, |m, v| f64::max(m, v.abs())),
            mean: crate::spectral::mean(values),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum UserPhase {
    Fresh,
    Reported,
    Padded,
    /// Last round published.
    Iterated(usize),
}

/// Clamps `w` to `[-bound, bound]`.
#[inline]
pub fn clip(w: f64, bound: f64) -> f64 {
    w.clamp(-bound, bound)
}

/// A protocol participant holding its private row, its own budget ledger
/// and its noise streams.
#[derive(Debug, Clone)]
pub struct UserState {
    index: usize,
    view: AdjacencyView,
    ledger: PrivacyLedger,
    seed: Seed,
    phase: UserPhase,
}

impl UserState {
    pub fn new(index: usize, view: AdjacencyView, epsilon: f64, seed: Seed) -> Self {
        UserState {
            index,
            view,
            ledger: PrivacyLedger::new(epsilon),
            seed,
            phase: UserPhase::Fresh,
        }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn degree(&self) -> usize {
        self.view.len()
    }

    pub fn view(&self) -> &AdjacencyView {
        &self.view
    }

    /// Mutable access to the private row, for neighboring-input checks.
    pub fn view_mut(&mut self) -> &mut AdjacencyView {
        &mut self.view
    }

    pub fn ledger(&self) -> &PrivacyLedger {
        &self.ledger
    }

    /// Publishes `d_i + Lap(10/ε)`, spending ε/10.
    pub fn report_degree(&mut self, cfg: &ProtocolConfig) -> Result<f64> {
        if self.phase != UserPhase::Fresh {
            return Err(Error::order(format!(
                "user {} already reported its degree",
                self.index
            )));
        }
        let d = self.degree() as f64;
        let noisy = if cfg.noise_enabled {
            let mut rng = self.seed.substream(Purpose::DegreeNoise, 0, self.index as u64);
            d + laplace_sample(cfg.degree_noise_scale(), &mut rng)?
        } else {
            d
        };
        self.ledger.charge(QueryLabel::Degree, cfg.degree_budget())?;
        self.phase = UserPhase::Reported;
        Ok(noisy)
    }

    /// While `d_i < δ`, connect to a uniformly random non-neighbor.
    /// Only this user's row changes.
    pub fn pad_edges(&mut self, delta: f64, cfg: &ProtocolConfig) -> Result<PaddingOutcome> {
        if self.phase != UserPhase::Reported {
            return Err(Error::order(format!(
                "user {} padded before reporting or twice",
                self.index
            )));
        }
        self.phase = UserPhase::Padded;
        if !cfg.padding_enabled {
            return Ok(PaddingOutcome::default());
        }
        let d = self.degree();
        if !(delta > d as f64) {
            return Ok(PaddingOutcome::default());
        }
        let wanted = (delta - d as f64).ceil() as usize;
        let candidates: Vec<usize> = (0..self.view.n)
            .filter(|&j| j != self.index && !self.view.contains(j))
            .collect();
        let take = wanted.min(candidates.len());
        let mut rng = self.seed.substream(Purpose::Padding, 0, self.index as u64);
        for pick in index::sample(&mut rng, candidates.len(), take) {
            self.view.insert(candidates[pick]);
        }
        Ok(PaddingOutcome {
            added: take,
            saturated: take < wanted,
        })
    }

    /// Noise-free line value `½ x_i + ½ Σ_j a_ij x_j / d_i − mean(x)`
    /// (without the mean term when elimination is off).
    pub fn noise_free_value(&self, input: &RoundInput<'_>, eliminate: bool) -> Result<f64> {
        let d = self.degree();
        if d == 0 {
            return Err(Error::domain(format!(
                "user {} has degree 0; the walk step is undefined",
                self.index
            )));
        }
        let x = input.values;
        let w = lazy_walk_entry(0.5, x[self.index], neighbor_sum(self.view.neighbors(), x), d as f64);
        Ok(if eliminate { w - input.mean } else { w })
    }

    /// One round: compute the walk value, add
    /// `Lap((5T/9ε) max|x| / δ)`, clip to `±c` times that scale, publish,
    /// and spend `(9/10) ε / T`.
    pub fn iterate(&mut self, input: &RoundInput<'_>, delta: f64, cfg: &ProtocolConfig) -> Result<f64> {
        let expected = match self.phase {
            UserPhase::Padded => 0,
            UserPhase::Iterated(t) => t,
            _ => {
                return Err(Error::order(format!(
                    "user {} asked to iterate before padding",
                    self.index
                )))
            }
        };
        if input.round != expected {
            return Err(Error::order(format!(
                "user {} expected broadcast of round {expected}, got round {}",
                self.index, input.round
            )));
        }
        let t = expected + 1;
        if t > cfg.iterations {
            return Err(Error::order(format!(
                "user {} asked for round {t} beyond T = {}",
                self.index, cfg.iterations
            )));
        }
        if input.values.len() != self.view.n {
            return Err(Error::argument("broadcast length differs from node count"));
        }
        let w = self.noise_free_value(input, cfg.eliminate_leading)?;
        let value = if cfg.noise_enabled {
            if !(delta > 0.0) {
                return Err(Error::domain(format!(
                    "δ = {delta} ≤ 0: iteration noise scale is undefined (graph too sparse for this ε)"
                )));
            }
            let scale = cfg.iteration_noise_factor() * input.max_abs / delta;
            let noise = if scale > 0.0 {
                let mut rng = self.seed.substream(Purpose::IterationNoise, t as u64, self.index as u64);
                laplace_sample(scale, &mut rng)?
            } else {
                0.0
            };
            clip(w + noise, cfg.clip_factor * scale)
        } else {
            w
        };
        self.ledger.charge(QueryLabel::Iteration(t), cfg.iteration_budget())?;
        self.phase = UserPhase::Iterated(t);
        Ok(value)
    }
}
