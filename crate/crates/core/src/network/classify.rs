use serde::Serialize;

use super::net::Neuron;
use super::NetworkError;
use crate::logic::Formula;

/// An input of a neuron, possibly negated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Literal {
    pub input: usize,
    pub negated: bool,
}

/// What a Castro neuron computes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "literals")]
pub enum NeuronKind {
    Conjunction(Vec<Literal>),
    Disjunction(Vec<Literal>),
    ConstantZero,
    ConstantOne,
    Unrepresentable,
}

impl NeuronKind {
    pub fn name(&self) -> &'static str {
        match self {
            NeuronKind::Conjunction(_) => "conjunction",
            NeuronKind::Disjunction(_) => "disjunction",
            NeuronKind::ConstantZero => "constant-zero",
            NeuronKind::ConstantOne => "constant-one",
            NeuronKind::Unrepresentable => "unrepresentable",
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, NeuronKind::ConstantZero | NeuronKind::ConstantOne)
    }

    pub fn is_representable(&self) -> bool {
        !matches!(self, NeuronKind::Unrepresentable)
    }
}

/// Classifies a neuron with weights in `{-1, 0, 1}` and an integer bias.
///
/// With `p` positive and `n` negative nonzero weights: `b = 1 - p` is a
/// conjunction, `b = n` a disjunction, `p + b <= 0` constant 0 and
/// `b - n >= 1` constant 1. A single literal is reported as a conjunction.
pub fn classify_neuron(nr: &Neuron) -> Result<NeuronKind, NetworkError> {
    if !nr.is_castro() {
        return Err(NetworkError::NonCastroNeuron);
    }
    let literals: Vec<Literal> = nr
        .weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w != 0.0)
        .map(|(input, &w)| Literal {
            input,
            negated: w < 0.0,
        })
        .collect();
    let n = literals.iter().filter(|l| l.negated).count() as i64;
    let p = literals.len() as i64 - n;
    let b = nr.bias as i64;
    Ok(if p + b <= 0 {
        NeuronKind::ConstantZero
    } else if b - n >= 1 {
        NeuronKind::ConstantOne
    } else if b == 1 - p {
        NeuronKind::Conjunction(literals)
    } else if b == n {
        NeuronKind::Disjunction(literals)
    } else {
        NeuronKind::Unrepresentable
    })
}

/// Negation that cancels an existing negation.
pub(crate) fn negate_simplified(f: Formula) -> Formula {
    match f {
        Formula::Not(inner) => *inner,
        other => Formula::not(other),
    }
}

fn chain(literals: &[Literal], inputs: &[Formula], join: fn(Formula, Formula) -> Formula) -> Formula {
    literals
        .iter()
        .map(|l| {
            let f = inputs[l.input].clone();
            if l.negated {
                negate_simplified(f)
            } else {
                f
            }
        })
        .reduce(join)
        .expect("chains have at least one literal")
}

/// The formula of a classified neuron, with `inputs[i]` standing for input `i`.
pub fn neuron_to_formula(kind: &NeuronKind, inputs: &[Formula]) -> Result<Formula, NetworkError> {
    Ok(match kind {
        NeuronKind::Conjunction(ls) => chain(ls, inputs, Formula::otimes),
        NeuronKind::Disjunction(ls) => chain(ls, inputs, Formula::oplus),
        NeuronKind::ConstantZero => Formula::Const0,
        NeuronKind::ConstantOne => Formula::Const1,
        NeuronKind::Unrepresentable => return Err(NetworkError::NoFormula),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{Formula, Grid};

    fn lit(input: usize, negated: bool) -> Literal {
        Literal { input, negated }
    }

    fn vars(m: usize) -> Vec<Formula> {
        (0..m).map(Formula::Var).collect()
    }

    #[test]
    fn table_examples() {
        let k = classify_neuron(&Neuron::new(vec![1.0, 1.0], -1.0)).unwrap();
        assert_eq!(k, NeuronKind::Conjunction(vec![lit(0, false), lit(1, false)]));
        let k = classify_neuron(&Neuron::new(vec![-1.0, -1.0, -1.0], 3.0)).unwrap();
        assert_eq!(
            k,
            NeuronKind::Disjunction(vec![lit(0, true), lit(1, true), lit(2, true)])
        );
        let k = classify_neuron(&Neuron::new(vec![-1.0, 1.0, 1.0], 0.0)).unwrap();
        assert_eq!(k, NeuronKind::Unrepresentable);
        let k = classify_neuron(&Neuron::new(vec![1.0, 1.0], -3.0)).unwrap();
        assert_eq!(k, NeuronKind::ConstantZero);
        let k = classify_neuron(&Neuron::new(vec![-1.0, -1.0, -1.0], 4.0)).unwrap();
        assert_eq!(k, NeuronKind::ConstantOne);
    }

    #[test]
    fn zero_weights_are_ignored() {
        let k = classify_neuron(&Neuron::new(vec![0.0, 1.0, 0.0], 0.0)).unwrap();
        assert_eq!(k, NeuronKind::Conjunction(vec![lit(1, false)]));
        assert_eq!(
            classify_neuron(&Neuron::new(vec![0.0, 0.0], 1.0)).unwrap(),
            NeuronKind::ConstantOne
        );
        assert_eq!(
            classify_neuron(&Neuron::new(vec![0.0, 0.0], 0.0)).unwrap(),
            NeuronKind::ConstantZero
        );
    }

    #[test]
    fn rejects_non_castro() {
        assert!(classify_neuron(&Neuron::new(vec![0.5], 0.0)).is_err());
        assert!(classify_neuron(&Neuron::new(vec![2.0], 0.0)).is_err());
        assert!(classify_neuron(&Neuron::new(vec![1.0], 0.5)).is_err());
    }

    #[test]
    fn formulas() {
        let f = neuron_to_formula(
            &NeuronKind::Conjunction(vec![lit(0, false), lit(1, true)]),
            &vars(2),
        )
        .unwrap();
        assert_eq!(f.to_string(), "x0 * !x1");
        let f = neuron_to_formula(
            &NeuronKind::Disjunction(vec![lit(0, false), lit(1, false)]),
            &vars(2),
        )
        .unwrap();
        assert_eq!(f.to_string(), "x0 + x1");
        assert_eq!(
            neuron_to_formula(&NeuronKind::ConstantOne, &[]).unwrap(),
            Formula::Const1
        );
        assert!(neuron_to_formula(&NeuronKind::Unrepresentable, &[]).is_err());
    }

    #[test]
    fn double_negation_cancels() {
        let inputs = vec![Formula::not(Formula::var(0))];
        let f = neuron_to_formula(&NeuronKind::Conjunction(vec![lit(0, true)]), &inputs).unwrap();
        assert_eq!(f, Formula::var(0));
    }

    #[test]
    fn brute_force_agreement() {
        let grid = Grid::new(4).unwrap();
        for m in 1..=3usize {
            for signs in 0..(1u32 << m) {
                let weights: Vec<f64> = (0..m)
                    .map(|i| if signs >> i & 1 == 1 { -1.0 } else { 1.0 })
                    .collect();
                for b in -3..=4 {
                    let nr = Neuron::new(weights.clone(), b as f64);
                    let kind = classify_neuron(&nr).unwrap();
                    let len = grid.table_len(m, usize::MAX).unwrap();
                    let mut x = vec![0.0; m];
                    let neuron_vals: Vec<f64> = (0..len)
                        .map(|k| {
                            grid.decode(k, &mut x);
                            nr.fire(&x)
                        })
                        .collect();
                    let mut eval_all = |f: &Formula| -> Vec<f64> {
                        (0..len)
                            .map(|k| {
                                grid.decode(k, &mut x);
                                f.eval(&x).unwrap()
                            })
                            .collect()
                    };
                    match neuron_to_formula(&kind, &vars(m)) {
                        Ok(f) => assert_eq!(eval_all(&f), neuron_vals, "{nr:?}"),
                        Err(_) => {
                            let ls: Vec<Literal> = (0..m).map(|i| lit(i, weights[i] < 0.0)).collect();
                            for k in [NeuronKind::Conjunction(ls.clone()), NeuronKind::Disjunction(ls)] {
                                let f = neuron_to_formula(&k, &vars(m)).unwrap();
                                assert_ne!(eval_all(&f), neuron_vals, "{nr:?}");
                            }
                            for c in [0.0, 1.0] {
                                assert!(neuron_vals.iter().any(|&v| v != c));
                            }
                        }
                    }
                }
            }
        }
    }
}
