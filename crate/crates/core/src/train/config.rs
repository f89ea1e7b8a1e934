use serde::{Deserialize, Serialize};

use super::TrainError;
use crate::rewrite::DEFAULT_BEAM_WIDTH;

/// Training and search parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    /// Initial Marquardt damping.
    pub mu0: f64,
    /// Damping factor applied on success (`μ·β`) and failure (`μ/β`).
    pub beta: f64,
    pub target_mse: f64,
    /// Jacobian evaluations per training run.
    pub max_iterations: usize,
    /// Exponent `n` of the smooth crystallization `Υₙ`.
    pub crystallization_exponent: u32,
    /// Restarts before the topology grows; `None` means `max(4, 2m)`.
    pub restarts_per_topology: Option<usize>,
    /// Index of the first topology tried.
    pub first_topology: usize,
    /// Number of topologies tried.
    pub max_topologies: usize,
    pub rng_seed: u64,
    /// Crystallized networks whose mse exceeds this multiple of the trained
    /// mse are discarded.
    pub degradation_factor: f64,
    /// Allowed mse increase while pruning.
    pub prune_tolerance: f64,
    pub beam_width: usize,
    /// Worker threads for restarts.
    pub jobs: usize,
    /// Print one line per accepted iteration to standard error.
    pub progress: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            mu0: 0.01,
            beta: 0.1,
            target_mse: 1e-3,
            max_iterations: 300,
            crystallization_exponent: 2,
            restarts_per_topology: None,
            first_topology: 0,
            max_topologies: 12,
            rng_seed: 0,
            degradation_factor: 2.0,
            prune_tolerance: 0.0,
            beam_width: DEFAULT_BEAM_WIDTH,
            jobs: 1,
            progress: false,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), TrainError> {
        let bad = |msg: &str| Err(TrainError::Config(msg.to_string()));
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return bad("beta must lie in (0, 1)");
        }
        if !(self.mu0 > 0.0 && self.mu0.is_finite()) {
            return bad("mu0 must be positive");
        }
        if !(self.target_mse > 0.0) {
            return bad("target_mse must be positive");
        }
        if self.crystallization_exponent == 0 {
            return bad("crystallization_exponent must be at least 1");
        }
        if !(self.degradation_factor >= 1.0) {
            return bad("degradation_factor must be at least 1");
        }
        if !(self.prune_tolerance >= 0.0) {
            return bad("prune_tolerance must be non-negative");
        }
        if self.restarts_per_topology == Some(0) || self.max_topologies == 0 {
            return bad("the search needs at least one restart and one topology");
        }
        if self.beam_width == 0 || self.jobs == 0 {
            return bad("beam_width and jobs must be positive");
        }
        Ok(())
    }

    /// Restarts per topology for `arity` inputs.
    pub fn restarts_for(&self, arity: usize) -> usize {
        self.restarts_per_topology.unwrap_or((2 * arity).max(4))
    }

    pub fn from_json(text: &str) -> Result<Self, TrainError> {
        let cfg: TrainConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }
}
