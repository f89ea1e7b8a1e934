use std::io::{Read, Write};

use serde::Serialize;

use super::DataError;
use crate::logic::TruthTable;
use crate::numfmt::format_sig;

/// Where a dataset came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Raw,
    Table,
    Binarized,
    Enriched,
}

/// Feature rows in `[0,1]^m` with a target in `[0,1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    names: Vec<String>,
    rows: Vec<Vec<f64>>,
    targets: Vec<f64>,
    provenance: Provenance,
    resolution: Option<u32>,
}

fn check_unit(v: f64, what: &str) -> Result<(), DataError> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(DataError::OutOfRange(format!(
            "{what} value {v} is outside [0,1]"
        )))
    }
}

impl Dataset {
    pub fn new(
        names: Vec<String>,
        rows: Vec<Vec<f64>>,
        targets: Vec<f64>,
        provenance: Provenance,
    ) -> Result<Self, DataError> {
        if rows.len() != targets.len() {
            return Err(DataError::Shape(format!(
                "{} rows but {} targets",
                rows.len(),
                targets.len()
            )));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != names.len() {
                return Err(DataError::Shape(format!(
                    "row {i} has {} values, expected {}",
                    r.len(),
                    names.len()
                )));
            }
            for &v in r {
                check_unit(v, "feature")?;
            }
        }
        for &t in &targets {
            check_unit(t, "target")?;
        }
        Ok(Dataset {
            names,
            rows,
            targets,
            provenance,
            resolution: None,
        })
    }

    /// One row per grid point, named `x0..x{m-1}`; remembers the resolution.
    pub fn from_table(t: &TruthTable) -> Self {
        let names = (0..t.arity()).map(|i| format!("x{i}")).collect();
        let (rows, targets) = t.rows().unzip();
        Dataset {
            names,
            rows,
            targets,
            provenance: Provenance::Table,
            resolution: Some(t.resolution()),
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn arity(&self) -> usize {
        self.names.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Grid resolution when the rows are a complete truth table.
    pub fn resolution(&self) -> Option<u32> {
        self.resolution
    }

    pub fn with_provenance(mut self, p: Provenance) -> Self {
        self.provenance = p;
        self
    }

    /// Keeps the given feature columns, in that order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<Dataset, DataError> {
        if let Some(&c) = cols.iter().find(|&&c| c >= self.arity()) {
            return Err(DataError::Shape(format!("no feature column {c}")));
        }
        Ok(Dataset {
            names: cols.iter().map(|&c| self.names[c].clone()).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| cols.iter().map(|&c| r[c]).collect())
                .collect(),
            targets: self.targets.clone(),
            provenance: self.provenance,
            resolution: None,
        })
    }

    /// Index of the feature called `name`.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// CSV with the feature names and a final target column, 12 significant digits.
    pub fn write_csv<W: Write>(&self, w: W, target_name: &str) -> Result<(), DataError> {
        let mut wr = csv::Writer::from_writer(w);
        let header = self.names.iter().map(String::as_str).chain([target_name]);
        wr.write_record(header)?;
        for (r, &t) in self.rows.iter().zip(&self.targets) {
            wr.write_record(r.iter().chain([&t]).map(|&v| format_sig(v, 12)))?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf, "y").expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    /// Reads a numeric CSV whose last column is the target.
    pub fn read_csv<R: Read>(r: R) -> Result<Dataset, DataError> {
        let mut rd = csv::Reader::from_reader(r);
        let header = rd.headers()?.clone();
        if header.is_empty() {
            return Err(DataError::Shape("empty header".into()));
        }
        let m = header.len() - 1;
        let names = header.iter().take(m).map(str::to_string).collect();
        let mut rows = Vec::new();
        let mut targets = Vec::new();
        for (i, rec) in rd.records().enumerate() {
            let rec = rec?;
            let vals = rec
                .iter()
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| DataError::Shape(format!("row {}: not a number: {s:?}", i + 1)))
                })
                .collect::<Result<Vec<f64>, _>>()?;
            targets.push(vals[m]);
            rows.push(vals[..m].to_vec());
        }
        Dataset::new(names, rows, targets, Provenance::Raw)
    }

    /// Like [`Dataset::read_csv`], but a file that is a complete truth table
    /// in grid order keeps its resolution.
    pub fn read_csv_detect_table(text: &str) -> Result<Dataset, DataError> {
        if let Ok(t) = TruthTable::read_csv(text.as_bytes()) {
            let mut d = Dataset::read_csv(text.as_bytes())?;
            d.provenance = Provenance::Table;
            d.resolution = Some(t.resolution());
            return Ok(d);
        }
        Dataset::read_csv(text.as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    #[test]
    fn from_table_keeps_order_and_resolution() {
        let t = TruthTable::tabulate(&parse_formula("x0 * x1").unwrap(), 2).unwrap();
        let d = Dataset::from_table(&t);
        assert_eq!(d.len(), 9);
        assert_eq!(d.rows()[5], vec![1.0, 0.5]);
        assert_eq!(d.targets()[5], 0.5);
        assert_eq!(d.resolution(), Some(2));
    }

    #[test]
    fn csv_round_trip() {
        let d = Dataset::new(
            vec!["a".into(), "b".into()],
            vec![vec![0.0, 1.0], vec![0.5, 0.25]],
            vec![1.0, 0.0],
            Provenance::Raw,
        )
        .unwrap();
        let text = d.to_csv_string();
        assert_eq!(text, "a,b,y\n0,1,1\n0.5,0.25,0\n");
        assert_eq!(Dataset::read_csv(text.as_bytes()).unwrap(), d);
    }

    #[test]
    fn table_csv_is_detected() {
        let t = TruthTable::tabulate(&parse_formula("x0 + !x1").unwrap(), 1).unwrap();
        let d = Dataset::read_csv_detect_table(&t.to_csv_string()).unwrap();
        assert_eq!(d.resolution(), Some(1));
        let d = Dataset::read_csv_detect_table("a,y\n1,0\n").unwrap();
        assert_eq!(d.resolution(), None);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Dataset::read_csv("a,y\n2,0\n".as_bytes()).is_err());
        assert!(Dataset::read_csv("a,y\nx,0\n".as_bytes()).is_err());
        assert!(Dataset::read_csv("a,y\n1\n".as_bytes()).is_err());
        assert!(Dataset::new(vec!["a".into()], vec![vec![0.0]], vec![], Provenance::Raw).is_err());
    }

    #[test]
    fn column_selection() {
        let d = Dataset::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec![0.0, 0.5, 1.0]],
            vec![1.0],
            Provenance::Raw,
        )
        .unwrap();
        let s = d.select_columns(&[2, 0]).unwrap();
        assert_eq!(s.names(), &["c".to_string(), "a".to_string()]);
        assert_eq!(s.rows()[0], vec![1.0, 0.0]);
        assert!(d.select_columns(&[3]).is_err());
    }
}
