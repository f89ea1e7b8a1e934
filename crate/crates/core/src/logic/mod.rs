//! Łukasiewicz propositional formulas: syntax, semantics and truth subtables.

mod formula;
mod parse;
mod table;

use thiserror::Error;

pub use formula::{implies, negate, oplus, otimes, Connective, Formula};
pub use parse::{
    format_formula, format_formula_named, parse_formula, parse_formula_with, ParseError, ParsedFormula,
};
pub use table::{truth_subtable, Grid, Padded, TruthFunction, TruthTable, DEFAULT_TABLE_BUDGET};

#[derive(Debug, Error)]
pub enum LogicError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("assignment has {got} values but the formula needs {needed}")]
    AssignmentTooShort { needed: usize, got: usize },
    #[error("truth value {0} is outside [0,1]")]
    OutOfRange(f64),
    #[error("grid resolution must be at least 1")]
    ZeroResolution,
    #[error("a table of arity {arity} at resolution {resolution} exceeds the budget of {budget} entries")]
    TableTooLarge {
        resolution: u32,
        arity: usize,
        budget: usize,
    },
    #[error("table needs {expected} values, got {got}")]
    TableShape { expected: usize, got: usize },
    #[error("malformed truth-table csv: {0}")]
    BadTableCsv(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
