//! Łukasiewicz logic and saturating-linear neural networks.
//!
//! Formulas compile to networks whose neurons compute
//! `ψ(w·x + b) = min(1, max(0, w·x + b))`; networks with weights in
//! `{-1, 0, 1}` and integer biases read back as formulas, and neurons that
//! match no formula are approximated by rule-R decompositions ranked by their
//! mean absolute error. Networks are learned from truth tables or data with
//! Levenberg-Marquardt plus per-step smooth crystallization.
//!
//! - [`logic`]: formulas, parsing, evaluation, truth subtables.
//! - [`network`]: ψ-networks, compilation, neuron classification, decompilation.
//! - [`rewrite`]: rule R, λ-similarity, approximation of unrepresentable neurons.
//! - [`train`]: crystallization, Jacobians, Levenberg-Marquardt, pruning, reverse engineering.
//! - [`data`]: nominal CSV ingestion, binarization, enrichment, attribute selection.

pub mod data;
pub mod logic;
pub mod network;
pub mod numfmt;
pub mod rewrite;
pub mod train;

pub use logic::{Formula, TruthFunction, TruthTable};
pub use network::{CastroNetwork, Network, Neuron};
