use serde::Serialize;

use super::{DataError, Dataset, Provenance};
use crate::logic::TruthFunction;
use crate::network::CastroNetwork;
use crate::train::{reverse_engineer, TrainConfig};

/// Default decision threshold for binary targets.
pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// Appends, for every row, a copy with all features multiplied by `factor`
/// and the target set to `negative_target`.
pub fn enrich_negative(d: &Dataset, factor: f64, negative_target: f64) -> Result<Dataset, DataError> {
    if !(factor > 0.0 && factor < 1.0) {
        return Err(DataError::OutOfRange(format!("factor {factor} is outside (0,1)")));
    }
    let mut rows = d.rows().to_vec();
    let mut targets = d.targets().to_vec();
    for r in d.rows() {
        rows.push(r.iter().map(|v| v * factor).collect());
        targets.push(negative_target);
    }
    Ok(Dataset::new(
        d.names().to_vec(),
        rows,
        targets,
        Provenance::Enriched,
    )?)
}

/// Classification quality at a threshold.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Accuracy {
    pub correct: usize,
    pub total: usize,
    pub misses: usize,
    pub accuracy: f64,
}

/// Predicts `output ≥ threshold` and compares with `target ≥ threshold`.
pub fn classify_accuracy<F: TruthFunction + ?Sized>(
    model: &F,
    d: &Dataset,
    threshold: f64,
) -> Result<Accuracy, DataError> {
    if model.arity() != d.arity() {
        return Err(DataError::ArityMismatch {
            expected: d.arity(),
            got: model.arity(),
        });
    }
    let correct = d
        .rows()
        .iter()
        .zip(d.targets())
        .filter(|(x, &t)| (model.eval_point(x) >= threshold) == (t >= threshold))
        .count();
    let total = d.len();
    Ok(Accuracy {
        correct,
        total,
        misses: total - correct,
        accuracy: if total == 0 {
            1.0
        } else {
            correct as f64 / total as f64
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelectedAttribute {
    pub index: usize,
    pub name: String,
}

/// Features a trained Castro network depends on.
#[derive(Clone, Debug, Serialize)]
pub struct SelectionReport {
    #[serde(skip)]
    pub network: CastroNetwork,
    pub widths: Vec<usize>,
    pub mse: f64,
    pub converged: bool,
    pub formula: String,
    pub selected: Vec<SelectedAttribute>,
    pub accuracy: Accuracy,
}

impl SelectionReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Reverse-engineers `d` and keeps the inputs that reach the output through
/// nonzero crystallized weights.
pub fn select_attributes(d: &Dataset, cfg: &TrainConfig) -> Result<SelectionReport, DataError> {
    let out = reverse_engineer(d, cfg)?;
    let selected = out
        .network
        .relevant_inputs()
        .into_iter()
        .map(|index| SelectedAttribute {
            index,
            name: d.names()[index].clone(),
        })
        .collect();
    let accuracy = classify_accuracy(out.network.as_network(), d, DEFAULT_THRESHOLD)?;
    Ok(SelectionReport {
        widths: out.network.widths(),
        mse: out.mse,
        converged: out.converged,
        formula: out.report.formula.clone(),
        selected,
        accuracy,
        network: out.network,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula, Padded};
    use crate::network::{Layer, Network, Neuron};

    fn data(rows: Vec<Vec<f64>>, targets: Vec<f64>) -> Dataset {
        let names = (0..rows[0].len()).map(|i| format!("f{i}")).collect();
        Dataset::new(names, rows, targets, Provenance::Raw).unwrap()
    }

    #[test]
    fn enrichment_appends_scaled_negatives() {
        let d = data(vec![vec![0.0, 1.0, 0.0, 1.0]], vec![1.0]);
        let e = enrich_negative(&d, 0.5, 0.0).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e.rows()[0], d.rows()[0]);
        assert_eq!(e.rows()[1], vec![0.0, 0.5, 0.0, 0.5]);
        assert_eq!(e.targets(), &[1.0, 0.0]);
        assert_eq!(e.provenance(), Provenance::Enriched);
        assert!(enrich_negative(&d, 1.0, 0.0).is_err());
        assert!(enrich_negative(&d, 0.0, 0.0).is_err());
        let empty = Dataset::new(vec!["a".into()], vec![], vec![], Provenance::Raw).unwrap();
        assert!(enrich_negative(&empty, 0.5, 0.0).unwrap().is_empty());
    }

    #[test]
    fn accuracy_counts_misses() {
        let d = data(
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]],
            vec![0.0, 1.0, 1.0, 0.0],
        );
        let f = parse_formula("x0 + x1").unwrap();
        let a = classify_accuracy(&f, &d, 0.5).unwrap();
        assert_eq!((a.correct, a.misses, a.accuracy), (3, 1, 0.75));
        let g = parse_formula("x0").unwrap();
        assert!(classify_accuracy(&g, &d, 0.5).is_err());
        let padded = Padded {
            formula: &g,
            arity: 2,
        };
        assert_eq!(classify_accuracy(&padded, &d, 0.5).unwrap().misses, 2);
    }

    #[test]
    fn accuracy_is_permutation_invariant() {
        let d = data(
            vec![vec![0.0, 1.0, 0.5], vec![1.0, 0.0, 1.0], vec![1.0, 1.0, 0.0]],
            vec![1.0, 0.0, 1.0],
        );
        let net = Network::new(3, vec![Layer::new(vec![Neuron::new(vec![1.0, -1.0, 1.0], 0.0)])]).unwrap();
        let base = classify_accuracy(&net, &d, 0.5).unwrap();
        let perm = [2, 0, 1];
        let pd = d.select_columns(&perm).unwrap();
        let pw: Vec<f64> = perm.iter().map(|&p| net.neuron(0, 0).weights[p]).collect();
        let pnet = Network::new(3, vec![Layer::new(vec![Neuron::new(pw, 0.0)])]).unwrap();
        assert_eq!(classify_accuracy(&pnet, &pd, 0.5).unwrap(), base);
    }

    #[test]
    fn selects_the_copied_feature() {
        let rows: Vec<Vec<f64>> = (0..8)
            .map(|k| (0..3).map(|i| ((k >> i) & 1) as f64).collect())
            .collect();
        let targets = rows.iter().map(|r| r[0]).collect();
        let d = data(rows, targets);
        let rep = select_attributes(
            &d,
            &TrainConfig {
                rng_seed: 1,
                ..TrainConfig::default()
            },
        )
        .unwrap();
        assert!(rep.converged);
        assert_eq!(
            rep.selected,
            vec![SelectedAttribute {
                index: 0,
                name: "f0".into()
            }]
        );
        assert_eq!(rep.accuracy.accuracy, 1.0);
    }

    #[test]
    fn constant_target_selects_nothing() {
        let rows: Vec<Vec<f64>> = (0..4)
            .map(|k| (0..2).map(|i| ((k >> i) & 1) as f64).collect())
            .collect();
        let d = data(rows, vec![1.0; 4]);
        let rep = select_attributes(
            &d,
            &TrainConfig {
                rng_seed: 2,
                ..TrainConfig::default()
            },
        )
        .unwrap();
        assert!(rep.converged);
        assert!(rep.selected.is_empty(), "{:?}", rep.selected);
    }
}
