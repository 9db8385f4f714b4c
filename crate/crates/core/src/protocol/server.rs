use super::config::ProtocolConfig;
use super::ledger::{PrivacyLedger, QueryLabel};
use crate::error::{Error, Result};
use crate::generators::gen_init_vector;
use crate::graph::Cut;

/// The aggregator. It only ever sees post-noise reports and broadcasts.
#[derive(Debug, Clone)]
pub struct ServerState {
    n: usize,
    round: usize,
    delta: Option<f64>,
    current: Option<Vec<f64>>,
    /// Audit copy of the per-user charges announced by the schedule.
    ledger: PrivacyLedger,
}

impl ServerState {
    pub fn new(n: usize, epsilon: f64) -> Self {
        ServerState {
            n,
            round: 0,
            delta: None,
            current: None,
            ledger: PrivacyLedger::new(epsilon),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn delta(&self) -> Option<f64> {
        self.delta
    }

    pub fn current(&self) -> Option<&[f64]> {
        self.current.as_deref()
    }

    pub fn ledger(&self) -> &PrivacyLedger {
        &self.ledger
    }

    /// `δ = min_i d̃_i − (10/ε) ln(n / 2ζ)` from exactly one report per user.
    pub fn compute_delta(&mut self, reports: &[(usize, f64)], cfg: &ProtocolConfig) -> Result<f64> {
        if self.delta.is_some() {
            return Err(Error::order("δ already computed"));
        }
        let mut seen = vec![false; self.n];
        let mut min = f64::INFINITY;
        for &(i, d) in reports {
            if i >= self.n {
                return Err(Error::order(format!("degree report from unknown user {i}")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::order(format!("duplicate degree report from user {i}")));
            }
            min = min.min(d);
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::order(format!("missing degree report from user {i}")));
        }
        let zeta = cfg.zeta_for(self.n);
        let delta = min - cfg.degree_noise_scale() * (self.n as f64 / (2.0 * zeta)).ln();
        self.ledger.charge(QueryLabel::Degree, cfg.degree_budget())?;
        self.delta = Some(delta);
        Ok(delta)
    }

    /// Draws the Gaussian start vector `x⁽⁰⁾`.
    pub fn init(&mut self, cfg: &ProtocolConfig) -> Result<&[f64]> {
        if self.delta.is_none() {
            return Err(Error::order("initial vector requested before δ"));
        }
        if self.current.is_some() {
            return Err(Error::order("initial vector already drawn"));
        }
        self.current = Some(gen_init_vector(self.n, cfg.seed));
        Ok(self.current.as_deref().unwrap())
    }

    /// Assembles round `t` from `(user, value)` pairs in any arrival order.
    pub fn aggregate(&mut self, round: usize, values: &[(usize, f64)], cfg: &ProtocolConfig) -> Result<&[f64]> {
        if self.current.is_none() {
            return Err(Error::order("aggregation before the initial vector"));
        }
        if round != self.round + 1 {
            return Err(Error::order(format!(
                "expected values for round {}, got round {round}",
                self.round + 1
            )));
        }
        let mut next = vec![f64::NAN; self.n];
        let mut seen = vec![false; self.n];
        for &(i, v) in values {
            if i >= self.n {
                return Err(Error::order(format!("value from unknown user {i}")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::order(format!("duplicate value from user {i} in round {round}")));
            }
            next[i] = v;
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::order(format!("missing value from user {i} in round {round}")));
        }
        self.ledger.charge(QueryLabel::Iteration(round), cfg.iteration_budget())?;
        self.round = round;
        self.current = Some(next);
        Ok(self.current.as_deref().unwrap())
    }

    /// `S = { i : x⁽ᵀ⁾_i > 0 }`.
    pub fn extract_cut(&self, cfg: &ProtocolConfig) -> Result<Cut> {
        if self.round != cfg.iterations {
            return Err(Error::order(format!(
                "cut requested at round {} before round T = {}",
                self.round, cfg.iterations
            )));
        }
        let x = self
            .current
            .as_deref()
            .ok_or_else(|| Error::order("no vector to extract a cut from"))?;
        Ok(Cut::from_signs(x))
    }
}
