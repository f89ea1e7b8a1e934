//! ψ-networks: evaluation, compilation from formulas, neuron classification
//! and decompilation back to formulas.

mod classify;
mod compile;
mod decompile;
mod file;
mod literal;
mod net;
mod tree;

use thiserror::Error;

use crate::logic::LogicError;

pub use classify::{classify_neuron, neuron_to_formula, Literal, NeuronKind};
pub use compile::{compile_formula, compile_formula_with_arity, formula_tree};
pub use decompile::network_to_formula;
pub use file::{read_network, write_network, NetworkFile};
pub use literal::{parse_neuron_literal, LiteralError};
pub use net::{activate, CastroNetwork, Layer, Network, Neuron, Trace};
pub use tree::NeuronTree;

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("network expects {expected} inputs, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("malformed network: {0}")]
    Shape(String),
    #[error("neuron {index} of layer {layer} is not a Castro neuron")]
    NotCastro { layer: usize, index: usize },
    #[error("neuron has a weight outside {{-1, 0, 1}} or a non-integer bias")]
    NonCastroNeuron,
    #[error("neuron {index} of layer {layer} is unrepresentable")]
    Unrepresentable { layer: usize, index: usize },
    #[error("an unrepresentable neuron has no formula")]
    NoFormula,
    #[error(transparent)]
    Literal(#[from] LiteralError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error("network file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
