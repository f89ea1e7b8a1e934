use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::RewriteError;
use crate::logic::{Grid, TruthFunction, DEFAULT_TABLE_BUDGET};

/// Default number of Monte Carlo samples.
pub const DEFAULT_MC_SAMPLES: usize = 4096;

/// How an evaluation set was built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum EvalMode {
    FullGrid { n: u32 },
    Dataset { rows: usize },
    MonteCarlo { samples: usize, seed: u64 },
}

impl std::fmt::Display for EvalMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EvalMode::FullGrid { n } => write!(f, "grid:{n}"),
            EvalMode::Dataset { rows } => write!(f, "data:{rows} rows"),
            EvalMode::MonteCarlo { samples, seed } => write!(f, "mc:{samples} seed {seed}"),
        }
    }
}

/// A finite set of points of `[0,1]^arity` over which truth functions are compared.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalSet {
    mode: EvalMode,
    arity: usize,
    len: usize,
    points: Vec<f64>,
}

impl EvalSet {
    /// Every point of `S_n^arity`, in table order.
    pub fn grid(arity: usize, n: u32) -> Result<Self, RewriteError> {
        let grid = Grid::new(n)?;
        let len = grid.table_len(arity, DEFAULT_TABLE_BUDGET)?;
        let mut points = vec![0.0; len * arity];
        if arity > 0 {
            for (k, chunk) in points.chunks_mut(arity).enumerate() {
                grid.decode(k, chunk);
            }
        }
        Ok(EvalSet {
            mode: EvalMode::FullGrid { n },
            arity,
            len,
            points,
        })
    }

    /// Rows of a dataset; every row must have `arity` entries.
    pub fn rows(arity: usize, rows: &[Vec<f64>]) -> Result<Self, RewriteError> {
        let mut points = Vec::with_capacity(rows.len() * arity);
        for r in rows {
            if r.len() != arity {
                return Err(RewriteError::ArityMismatch {
                    expected: arity,
                    got: r.len(),
                });
            }
            points.extend_from_slice(r);
        }
        Ok(EvalSet {
            mode: EvalMode::Dataset { rows: rows.len() },
            arity,
            len: rows.len(),
            points,
        })
    }

    /// `samples` uniform points drawn from a ChaCha8 stream seeded with `seed`.
    pub fn monte_carlo(arity: usize, samples: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = (0..samples * arity).map(|_| rng.gen::<f64>()).collect();
        EvalSet {
            mode: EvalMode::MonteCarlo { samples, seed },
            arity,
            len: samples,
            points,
        }
    }

    pub(crate) fn with_mode(mut self, mode: EvalMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn mode(&self) -> EvalMode {
        self.mode
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> + '_ {
        let arity = self.arity;
        (0..self.len()).map(move |k| &self.points[k * arity..(k + 1) * arity])
    }

    /// The same points restricted to the given coordinates, in that order.
    pub fn project(&self, cols: &[usize]) -> EvalSet {
        let mut points = Vec::with_capacity(self.len() * cols.len());
        for p in self.points() {
            points.extend(cols.iter().map(|&c| p[c]));
        }
        let mode = match self.mode {
            EvalMode::FullGrid { .. } if cols.len() != self.arity => EvalMode::Dataset { rows: self.len() },
            m => m,
        };
        EvalSet {
            mode,
            arity: cols.len(),
            len: self.len,
            points,
        }
    }

    /// Values of `f` at every point.
    pub fn evaluate<F: TruthFunction + ?Sized>(&self, f: &F) -> Vec<f64> {
        self.points().map(|p| f.eval_point(p)).collect()
    }
}

fn check_arity(set: &EvalSet, got: usize) -> Result<(), RewriteError> {
    if got != set.arity() {
        return Err(RewriteError::ArityMismatch {
            expected: set.arity(),
            got,
        });
    }
    Ok(())
}

/// Mean absolute error between `a` and `b` over `set`.
pub fn lambda_similarity<A, B>(a: &A, b: &B, set: &EvalSet) -> Result<f64, RewriteError>
where
    A: TruthFunction + ?Sized,
    B: TruthFunction + ?Sized,
{
    check_arity(set, a.arity())?;
    check_arity(set, b.arity())?;
    if set.is_empty() {
        return Ok(0.0);
    }
    let total: f64 = set
        .points()
        .map(|p| (a.eval_point(p) - b.eval_point(p)).abs())
        .sum();
    Ok(total / set.len() as f64)
}

/// Mean absolute difference of two value vectors.
pub fn mean_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>() / a.len() as f64
}
