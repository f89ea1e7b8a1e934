//! Datasets: numeric CSV, nominal attributes, binarization, derived-feature
//! recipes, negative-case enrichment and model-driven attribute selection.

mod dataset;
mod nominal;
mod recipe;
mod select;

use thiserror::Error;

use crate::train::TrainError;

pub use dataset::{Dataset, Provenance};
pub use nominal::{binarize, load_nominal_csv, NominalTable, MISSING};
pub use recipe::{apply_recipe, FeatureExpr, Recipe, MUSHROOM_A1_A8};
pub use select::{
    classify_accuracy, enrich_negative, select_attributes, Accuracy, SelectedAttribute, SelectionReport,
    DEFAULT_THRESHOLD,
};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("malformed dataset: {0}")]
    Shape(String),
    #[error("{0}")]
    OutOfRange(String),
    #[error("no column named {0:?}")]
    UnknownColumn(String),
    #[error("value never observed: {0}")]
    UnknownValue(String),
    #[error("recipe line {line}: {msg}")]
    Recipe { line: usize, msg: String },
    #[error("dataset has {expected} features, model expects {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Train(#[from] TrainError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
