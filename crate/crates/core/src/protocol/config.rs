use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::Seed;

pub const DEFAULT_CLIP_FACTOR: f64 = 10.0;

/// Tunables of one protocol run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    /// Total per-user privacy budget ε.
    pub epsilon: f64,
    /// Number of power-iteration rounds T.
    pub iterations: usize,
    /// Clipping factor c; published values are clamped to ±c × noise scale.
    pub clip_factor: f64,
    /// Failure parameter ζ of the minimum-degree estimate; `None` means 1/n.
    pub zeta: Option<f64>,
    pub seed: Seed,
    /// Subtract the broadcast mean each round (removes the constant
    /// eigenvector). Turning it off gives the non-eliminating ablation.
    pub eliminate_leading: bool,
    /// Non-private hook: draw Laplace noise and clip. Off means the exact
    /// noise-free iteration.
    pub noise_enabled: bool,
    /// Non-private hook: pad low-degree users up to δ.
    pub padding_enabled: bool,
}

impl ProtocolConfig {
    pub fn new(epsilon: f64, iterations: usize, seed: Seed) -> Self {
        ProtocolConfig {
            epsilon,
            iterations,
            clip_factor: DEFAULT_CLIP_FACTOR,
            zeta: None,
            seed,
            eliminate_leading: true,
            noise_enabled: true,
            padding_enabled: true,
        }
    }

    pub fn with_clip_factor(mut self, c: f64) -> Self {
        self.clip_factor = c;
        self
    }

    pub fn with_zeta(mut self, zeta: f64) -> Self {
        self.zeta = Some(zeta);
        self
    }

    pub fn without_elimination(mut self) -> Self {
        self.eliminate_leading = false;
        self
    }

    /// Disables noise and padding. Such a configuration is only accepted by
    /// the non-private entry points.
    pub fn noise_free(mut self) -> Self {
        self.noise_enabled = false;
        self.padding_enabled = false;
        self
    }

    /// Whether the run satisfies ε-edge LDP.
    pub fn is_private(&self) -> bool {
        self.noise_enabled && self.padding_enabled
    }

    pub fn zeta_for(&self, n: usize) -> f64 {
        self.zeta.unwrap_or(1.0 / n as f64)
    }

    /// Laplace scale of the degree report, `10/ε`.
    pub fn degree_noise_scale(&self) -> f64 {
        10.0 / self.epsilon
    }

    /// Per-user budget of the degree report, `ε/10`.
    pub fn degree_budget(&self) -> f64 {
        self.epsilon / 10.0
    }

    /// Per-user budget of each iteration, `(9/10) ε / T`.
    pub fn iteration_budget(&self) -> f64 {
        0.9 * self.epsilon / self.iterations as f64
    }

    /// `5T / 9ε`: multiplied by `max_j |x_j| / δ` it gives the iteration noise scale.
    pub fn iteration_noise_factor(&self) -> f64 {
        5.0 * self.iterations as f64 / (9.0 * self.epsilon)
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::argument(format!(
                "privacy budget must be positive and finite, got {}",
                self.epsilon
            )));
        }
        if self.iterations == 0 {
            return Err(Error::argument("iteration count T must be at least 1"));
        }
        if !(self.clip_factor >= 1.0) || !self.clip_factor.is_finite() {
            return Err(Error::argument(format!(
                "clipping factor must be >= 1, got {}",
                self.clip_factor
            )));
        }
        let zeta = self.zeta_for(n);
        if !(zeta > 0.0 && zeta < 1.0) {
            return Err(Error::argument(format!("ζ = {zeta} outside (0, 1)")));
        }
        Ok(())
    }
}
