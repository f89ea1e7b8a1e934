use std::io::{Read, Write};

use super::formula::Formula;
use super::LogicError;
use crate::numfmt::format_sig;

/// Largest table [`TruthTable::tabulate`] builds unless told otherwise.
pub const DEFAULT_TABLE_BUDGET: usize = 1 << 24;

/// Anything with a truth function on `[0,1]^arity`.
pub trait TruthFunction {
    fn arity(&self) -> usize;

    /// Evaluates at `x`, which has exactly `arity()` entries in `[0,1]`.
    fn eval_point(&self, x: &[f64]) -> f64;
}

impl TruthFunction for Formula {
    fn arity(&self) -> usize {
        Formula::arity(self)
    }

    fn eval_point(&self, x: &[f64]) -> f64 {
        self.eval_unchecked(x)
    }
}

impl<T: TruthFunction + ?Sized> TruthFunction for &T {
    fn arity(&self) -> usize {
        (**self).arity()
    }

    fn eval_point(&self, x: &[f64]) -> f64 {
        (**self).eval_point(x)
    }
}

/// A formula viewed at a fixed arity, larger than the one it mentions.
pub struct Padded<'a> {
    pub formula: &'a Formula,
    pub arity: usize,
}

impl TruthFunction for Padded<'_> {
    fn arity(&self) -> usize {
        self.arity
    }

    fn eval_point(&self, x: &[f64]) -> f64 {
        self.formula.eval_unchecked(x)
    }
}

/// The grid `S_n = {0, 1/n, ..., 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grid {
    n: u32,
}

impl Grid {
    pub fn new(n: u32) -> Result<Self, LogicError> {
        if n == 0 {
            return Err(LogicError::ZeroResolution);
        }
        Ok(Grid { n })
    }

    pub fn resolution(self) -> u32 {
        self.n
    }

    /// Number of points, `n + 1`.
    pub fn len(self) -> usize {
        self.n as usize + 1
    }

    pub fn is_empty(self) -> bool {
        false
    }

    /// The `k`-th point, computed as `k / n` rather than accumulated.
    pub fn point(self, k: usize) -> f64 {
        k as f64 / self.n as f64
    }

    pub fn points(self) -> impl Iterator<Item = f64> {
        (0..self.len()).map(move |k| self.point(k))
    }

    /// Number of points of `S_n^arity`, or an error past `budget`.
    pub fn table_len(self, arity: usize, budget: usize) -> Result<usize, LogicError> {
        let mut len: usize = 1;
        for _ in 0..arity {
            len = len
                .checked_mul(self.len())
                .filter(|&l| l <= budget)
                .ok_or(LogicError::TableTooLarge {
                    resolution: self.n,
                    arity,
                    budget,
                })?;
        }
        if len > budget {
            return Err(LogicError::TableTooLarge {
                resolution: self.n,
                arity,
                budget,
            });
        }
        Ok(len)
    }

    /// Writes the grid point with mixed-radix index `index` into `out`.
    /// Variable 0 is the least-significant digit.
    pub fn decode(self, mut index: usize, out: &mut [f64]) {
        let base = self.len();
        for slot in out.iter_mut() {
            *slot = self.point(index % base);
            index /= base;
        }
    }
}

/// The restriction of a truth function to `S_n^arity`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruthTable {
    arity: usize,
    resolution: u32,
    values: Vec<f64>,
}

impl TruthTable {
    /// Tabulates `f` on `S_n^arity` with the default size budget.
    pub fn tabulate<F: TruthFunction + ?Sized>(f: &F, n: u32) -> Result<Self, LogicError> {
        Self::tabulate_with_budget(f, n, DEFAULT_TABLE_BUDGET)
    }

    pub fn tabulate_with_budget<F: TruthFunction + ?Sized>(
        f: &F,
        n: u32,
        budget: usize,
    ) -> Result<Self, LogicError> {
        let grid = Grid::new(n)?;
        let arity = f.arity();
        let len = grid.table_len(arity, budget)?;
        let mut point = vec![0.0; arity];
        let values = (0..len)
            .map(|idx| {
                grid.decode(idx, &mut point);
                f.eval_point(&point)
            })
            .collect();
        Ok(TruthTable {
            arity,
            resolution: n,
            values,
        })
    }

    pub fn from_values(arity: usize, resolution: u32, values: Vec<f64>) -> Result<Self, LogicError> {
        let grid = Grid::new(resolution)?;
        let len = grid.table_len(arity, usize::MAX)?;
        if values.len() != len {
            return Err(LogicError::TableShape {
                expected: len,
                got: values.len(),
            });
        }
        if let Some(&v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(LogicError::OutOfRange(v));
        }
        Ok(TruthTable {
            arity,
            resolution,
            values,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn grid(&self) -> Grid {
        Grid { n: self.resolution }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The grid point of row `index`.
    pub fn point(&self, index: usize) -> Vec<f64> {
        let mut p = vec![0.0; self.arity];
        self.grid().decode(index, &mut p);
        p
    }

    /// Iterates `(point, value)` pairs in table order.
    pub fn rows(&self) -> impl Iterator<Item = (Vec<f64>, f64)> + '_ {
        self.values.iter().enumerate().map(|(i, &v)| (self.point(i), v))
    }

    /// Largest absolute difference to another table of the same shape.
    pub fn max_abs_diff(&self, other: &TruthTable) -> Option<f64> {
        if self.arity != other.arity || self.resolution != other.resolution {
            return None;
        }
        Some(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        )
    }

    /// CSV with header `x0,...,x{m-1},y`, one row per grid point in table
    /// order, values printed with 12 significant digits.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), LogicError> {
        let mut wr = csv::Writer::from_writer(w);
        let mut header: Vec<String> = (0..self.arity).map(|i| format!("x{i}")).collect();
        header.push("y".into());
        wr.write_record(&header)?;
        for (point, v) in self.rows() {
            let rec: Vec<String> = point
                .iter()
                .chain(std::iter::once(&v))
                .map(|&x| format_sig(x, 12))
                .collect();
            wr.write_record(&rec)?;
        }
        wr.flush().map_err(|e| LogicError::Csv(e.into()))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    /// Reads a table written by [`TruthTable::write_csv`]. The resolution is
    /// recovered from the row count and the rows must be in table order.
    pub fn read_csv<R: Read>(r: R) -> Result<Self, LogicError> {
        let mut rd = csv::Reader::from_reader(r);
        let width = rd.headers()?.len();
        if width == 0 {
            return Err(LogicError::BadTableCsv("empty header".into()));
        }
        let arity = width - 1;
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for rec in rd.records() {
            let rec = rec?;
            let row = rec
                .iter()
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| LogicError::BadTableCsv(format!("not a number: {s:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        let resolution = infer_resolution(arity, rows.len())
            .ok_or_else(|| LogicError::BadTableCsv(format!("{} rows is not a full grid", rows.len())))?;
        let grid = Grid::new(resolution)?;
        let mut point = vec![0.0; arity];
        for (i, row) in rows.iter().enumerate() {
            grid.decode(i, &mut point);
            if row[..arity].iter().zip(&point).any(|(a, b)| (a - b).abs() > 1e-9) {
                return Err(LogicError::BadTableCsv(format!("row {i} is out of grid order")));
            }
        }
        let values = rows.iter().map(|r| r[arity]).collect();
        Self::from_values(arity, resolution, values)
    }
}

fn infer_resolution(arity: usize, rows: usize) -> Option<u32> {
    if arity == 0 {
        return (rows == 1).then_some(1);
    }
    let guess = (rows as f64).powf(1.0 / arity as f64).round() as usize;
    (guess.saturating_sub(1)..=guess + 1)
        .find(|&b| b >= 2 && b.checked_pow(arity as u32) == Some(rows))
        .map(|b| (b - 1) as u32)
}

/// The `(n+1)`-valued truth subtable of `f` over its own arity.
pub fn truth_subtable(f: &Formula, n: u32) -> Result<TruthTable, LogicError> {
    TruthTable::tabulate(f, n)
}
