use std::io::Read;

use super::{DataError, Dataset, Provenance};

/// Marker for a missing cell.
pub const MISSING: &str = "?";

/// A table of nominal attributes with a two-way class.
#[derive(Clone, Debug, PartialEq)]
pub struct NominalTable {
    attributes: Vec<String>,
    vocab: Vec<Vec<String>>,
    /// `cells[r][a]` indexes `vocab[a]`; `None` is missing.
    cells: Vec<Vec<Option<usize>>>,
    class_column: String,
    positive: String,
    class_values: Vec<String>,
}

fn intern(vocab: &mut Vec<String>, sym: &str) -> usize {
    match vocab.iter().position(|v| v == sym) {
        Some(i) => i,
        None => {
            vocab.push(sym.to_string());
            vocab.len() - 1
        }
    }
}

impl NominalTable {
    /// Reads a CSV with a header row. Vocabularies are in first-occurrence
    /// order and `?` marks a missing cell.
    pub fn read_csv<R: Read>(r: R, class_column: &str, positive: &str) -> Result<Self, DataError> {
        let mut rd = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
        let header = rd.headers()?.clone();
        if header.is_empty() {
            return Err(DataError::Shape("empty header".into()));
        }
        let class_idx = header
            .iter()
            .position(|h| h == class_column)
            .ok_or_else(|| DataError::UnknownColumn(class_column.to_string()))?;
        let attributes: Vec<String> = header
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != class_idx)
            .map(|(_, h)| h.to_string())
            .collect();
        let mut vocab = vec![Vec::new(); attributes.len()];
        let mut cells = Vec::new();
        let mut class_values = Vec::new();
        for rec in rd.records() {
            let rec = rec?;
            let mut row = Vec::with_capacity(attributes.len());
            for (i, sym) in rec.iter().enumerate() {
                if i == class_idx {
                    class_values.push(sym.to_string());
                    continue;
                }
                let a = row.len();
                row.push((sym != MISSING).then(|| intern(&mut vocab[a], sym)));
            }
            cells.push(row);
        }
        if cells.is_empty() {
            return Err(DataError::Shape("no data rows".into()));
        }
        Ok(NominalTable {
            attributes,
            vocab,
            cells,
            class_column: class_column.to_string(),
            positive: positive.to_string(),
            class_values,
        })
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn vocabulary(&self, attribute: usize) -> &[String] {
        &self.vocab[attribute]
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn class_column(&self) -> &str {
        &self.class_column
    }

    pub fn positive_value(&self) -> &str {
        &self.positive
    }

    /// Symbol of attribute `a` in row `r`, `None` when missing.
    pub fn cell(&self, r: usize, a: usize) -> Option<&str> {
        self.cells[r][a].map(|i| self.vocab[a][i].as_str())
    }

    pub fn is_positive(&self, r: usize) -> bool {
        self.class_values[r] == self.positive
    }

    pub fn positive_count(&self) -> usize {
        (0..self.len()).filter(|&r| self.is_positive(r)).count()
    }

    pub fn missing_count(&self, attribute: usize) -> usize {
        self.cells.iter().filter(|r| r[attribute].is_none()).count()
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a == name)
    }

    fn targets(&self) -> Vec<f64> {
        (0..self.len())
            .map(|r| if self.is_positive(r) { 1.0 } else { 0.0 })
            .collect()
    }
}

/// Reads a nominal CSV file.
pub fn load_nominal_csv(
    path: &std::path::Path,
    class_column: &str,
    positive: &str,
) -> Result<NominalTable, DataError> {
    let f = std::fs::File::open(path)?;
    NominalTable::read_csv(std::io::BufReader::new(f), class_column, positive)
}

/// One 0/1 feature `attr=value` per observed value of each attribute; a
/// missing cell sets all of its attribute's features to 0.
///
/// With `collapse_binary`, an attribute with exactly two observed values and
/// no missing cells yields only the feature of its first value.
pub fn binarize(t: &NominalTable, collapse_binary: bool) -> Dataset {
    let mut names = Vec::new();
    let mut slots: Vec<Vec<Option<usize>>> = Vec::new();
    for (a, attr) in t.attributes.iter().enumerate() {
        let collapse = collapse_binary && t.vocab[a].len() == 2 && t.missing_count(a) == 0;
        let mut slot = Vec::with_capacity(t.vocab[a].len());
        for (v, value) in t.vocab[a].iter().enumerate() {
            if collapse && v == 1 {
                slot.push(None);
            } else {
                slot.push(Some(names.len()));
                names.push(format!("{attr}={value}"));
            }
        }
        slots.push(slot);
    }
    let rows = t
        .cells
        .iter()
        .map(|cells| {
            let mut row = vec![0.0; names.len()];
            for (a, c) in cells.iter().enumerate() {
                if let Some(col) = c.and_then(|v| slots[a][v]) {
                    row[col] = 1.0;
                }
            }
            row
        })
        .collect();
    Dataset::new(names, rows, t.targets(), Provenance::Binarized).expect("binary features")
}
