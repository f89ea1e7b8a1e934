//! Training ψ-networks toward Castro networks: smooth and crisp
//! crystallization, Jacobians, Levenberg-Marquardt, OBS pruning and the
//! reverse-engineering search.

mod config;
mod crystal;
mod jacobian;
mod lm;
mod obs;
mod reveng;

use thiserror::Error;

use crate::network::NetworkError;
use crate::rewrite::RewriteError;

pub use config::TrainConfig;
pub use crystal::{
    crisp_crystallize, representation_error, round_half_toward_zero, smooth_crystallize_network,
    smooth_crystallize_value,
};
pub use jacobian::{jacobian, jacobian_and_residuals, mse, residuals};
pub use lm::{lm_train, StopReason, TrainState, MAX_RETRIES};
pub use obs::obs_prune;
pub use reveng::{random_network, restart_rng, reverse_engineer, topology_schedule, Attempt, RevEngOutcome};

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("invalid training configuration: {0}")]
    Config(String),
    #[error("network expects {expected} inputs, data has {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("no training rows")]
    EmptyData,
    #[error("training config: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}
