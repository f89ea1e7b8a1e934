//! Rule-R decomposition, λ-similarity and approximation of unrepresentable
//! neurons by binary Castro networks.

mod approx;
mod rule_r;
mod similarity;

use thiserror::Error;

use crate::logic::LogicError;
use crate::network::NetworkError;

pub use approx::{
    best_approximation, extract_with_approximation, tree_to_formula, ApproximationResult, CandidateScore,
    ExtractionReport, NeuronReport,
};
pub use rule_r::{
    decompositions, is_representable, rule_r_splits, symmetry_classes, Decomposition, DecompositionSet,
    DEFAULT_BEAM_WIDTH,
};
pub use similarity::{lambda_similarity, mean_abs_diff, EvalMode, EvalSet, DEFAULT_MC_SAMPLES};

#[derive(Debug, Error)]
pub enum RewriteError {
    #[error("rule R needs weights in {{-1, 0, 1}} and an integer bias")]
    NotCastro,
    #[error("rule R needs at least 3 nonzero weights, found {0}")]
    FanInTooSmall(usize),
    #[error("input {0} has weight 0")]
    NotAnInput(usize),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("no candidate decomposition")]
    NoCandidates,
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Network(#[from] NetworkError),
}
