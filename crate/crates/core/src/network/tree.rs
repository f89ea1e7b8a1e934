use std::fmt;

use super::net::{activate, Layer, Network, Neuron};
use crate::logic::TruthFunction;

/// A tree of neurons over input variables.
///
/// Trees are the natural shape of compiled formulas, neuron literals and
/// rule-R decompositions; [`NeuronTree::to_network`] lays them out as a
/// rectangular layered network.
#[derive(Clone, Debug, PartialEq)]
pub enum NeuronTree {
    Input(usize),
    Node {
        bias: f64,
        inputs: Vec<(f64, NeuronTree)>,
    },
}

impl NeuronTree {
    pub fn node(bias: f64, inputs: Vec<(f64, NeuronTree)>) -> Self {
        NeuronTree::Node { bias, inputs }
    }

    /// The single-weight, zero-bias pass-through neuron.
    pub fn identity(of: NeuronTree) -> Self {
        NeuronTree::node(0.0, vec![(1.0, of)])
    }

    /// Builds a one-neuron tree from a neuron over `inputs.len()` variables,
    /// dropping zero-weight inputs.
    pub fn from_neuron(n: &Neuron) -> Self {
        NeuronTree::node(
            n.bias,
            n.weights
                .iter()
                .enumerate()
                .filter(|(_, &w)| w != 0.0)
                .map(|(i, &w)| (w, NeuronTree::Input(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            NeuronTree::Input(i) => x[*i],
            NeuronTree::Node { bias, inputs } => {
                activate(bias + inputs.iter().map(|(w, c)| w * c.eval(x)).sum::<f64>())
            }
        }
    }

    /// Inputs have depth 0; a neuron sits one above its deepest input.
    pub fn depth(&self) -> usize {
        match self {
            NeuronTree::Input(_) => 0,
            NeuronTree::Node { inputs, .. } => 1 + inputs.iter().map(|(_, c)| c.depth()).max().unwrap_or(0),
        }
    }

    pub fn neuron_count(&self) -> usize {
        match self {
            NeuronTree::Input(_) => 0,
            NeuronTree::Node { inputs, .. } => {
                1 + inputs.iter().map(|(_, c)| c.neuron_count()).sum::<usize>()
            }
        }
    }

    /// One more than the largest input index.
    pub fn arity(&self) -> usize {
        match self {
            NeuronTree::Input(i) => i + 1,
            NeuronTree::Node { inputs, .. } => inputs.iter().map(|(_, c)| c.arity()).max().unwrap_or(0),
        }
    }

    /// Largest number of nonzero weights on any neuron.
    pub fn max_fan_in(&self) -> usize {
        match self {
            NeuronTree::Input(_) => 0,
            NeuronTree::Node { inputs, .. } => inputs
                .iter()
                .map(|(_, c)| c.max_fan_in())
                .max()
                .unwrap_or(0)
                .max(inputs.iter().filter(|(w, _)| *w != 0.0).count()),
        }
    }

    /// Visits every neuron, outermost first.
    pub fn for_each_neuron(&self, f: &mut impl FnMut(f64, &[(f64, NeuronTree)])) {
        if let NeuronTree::Node { bias, inputs } = self {
            f(*bias, inputs);
            for (_, c) in inputs {
                c.for_each_neuron(f);
            }
        }
    }

    /// Renames inputs through `map`.
    pub fn remap_inputs(&self, map: &dyn Fn(usize) -> usize) -> NeuronTree {
        match self {
            NeuronTree::Input(i) => NeuronTree::Input(map(*i)),
            NeuronTree::Node { bias, inputs } => NeuronTree::node(
                *bias,
                inputs.iter().map(|(w, c)| (*w, c.remap_inputs(map))).collect(),
            ),
        }
    }

    /// Lays the tree out as a layered network over `arity` inputs.
    ///
    /// Every neuron sits at its depth; values consumed more than one layer
    /// later are carried by identity neurons, and neurons are numbered within
    /// a layer in left-to-right order of first use.
    pub fn to_network(&self, arity: usize) -> Network {
        let root = match self {
            NeuronTree::Input(_) => NeuronTree::identity(self.clone()),
            NeuronTree::Node { .. } => split_repeated_inputs(self),
        };
        let depth = root.depth();
        let mut rows: Vec<Vec<(Vec<(usize, f64)>, f64)>> = vec![Vec::new(); depth];
        place(&root, depth, &mut rows);
        let mut width = arity;
        let mut layers = Vec::with_capacity(depth);
        for row in rows {
            let next_width = row.len();
            let neurons = row
                .into_iter()
                .map(|(sparse, bias)| {
                    let mut w = vec![0.0; width];
                    for (i, v) in sparse {
                        w[i] += v;
                    }
                    Neuron::new(w, bias)
                })
                .collect();
            layers.push(Layer::new(neurons));
            width = next_width;
        }
        Network::new(arity, layers).expect("tree layout is rectangular")
    }
}

/// Routes every repeated direct input of a neuron through its own identity
/// neuron, so no weight is the sum of two tree edges.
fn split_repeated_inputs(t: &NeuronTree) -> NeuronTree {
    match t {
        NeuronTree::Input(_) => t.clone(),
        NeuronTree::Node { bias, inputs } => {
            let mut seen = Vec::new();
            let inputs = inputs
                .iter()
                .map(|(w, c)| match c {
                    NeuronTree::Input(i) if seen.contains(i) => (*w, NeuronTree::identity(c.clone())),
                    NeuronTree::Input(i) => {
                        seen.push(*i);
                        (*w, c.clone())
                    }
                    _ => (*w, split_repeated_inputs(c)),
                })
                .collect();
            NeuronTree::node(*bias, inputs)
        }
    }
}

/// Makes `unit` available at `level` (0 = inputs) and returns its slot there.
fn place(unit: &NeuronTree, level: usize, rows: &mut [Vec<(Vec<(usize, f64)>, f64)>]) -> usize {
    match unit {
        NeuronTree::Input(i) if level == 0 => *i,
        NeuronTree::Node { bias, inputs } if inputs.is_empty() || unit.depth() == level => {
            let sparse = inputs
                .iter()
                .map(|(w, c)| (place(c, level - 1, rows), *w))
                .collect();
            rows[level - 1].push((sparse, *bias));
            rows[level - 1].len() - 1
        }
        _ => {
            let src = place(unit, level - 1, rows);
            rows[level - 1].push((vec![(src, 1.0)], 0.0));
            rows[level - 1].len() - 1
        }
    }
}

impl TruthFunction for NeuronTree {
    fn arity(&self) -> usize {
        NeuronTree::arity(self)
    }

    fn eval_point(&self, x: &[f64]) -> f64 {
        self.eval(x)
    }
}

fn write_weight(f: &mut fmt::Formatter<'_>, w: f64) -> fmt::Result {
    if w == 1.0 {
        Ok(())
    } else if w == -1.0 {
        f.write_str("-")
    } else {
        write!(f, "{}*", crate::numfmt::format_sig(w, 17))
    }
}

/// Neuron-literal syntax: `psi(b; -x0, x1, psi(...))`.
impl fmt::Display for NeuronTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NeuronTree::Input(i) => write!(f, "x{i}"),
            NeuronTree::Node { bias, inputs } => {
                write!(f, "psi({}; ", crate::numfmt::format_sig(*bias, 17))?;
                for (k, (w, c)) in inputs.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write_weight(f, *w)?;
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use NeuronTree::Input;

    fn n(b: f64, inputs: Vec<(f64, NeuronTree)>) -> NeuronTree {
        NeuronTree::node(b, inputs)
    }

    #[test]
    fn repeated_inputs_keep_unit_weights() {
        // x ⊗ x
        let t = n(-1.0, vec![(1.0, Input(0)), (1.0, Input(0))]);
        let net = t.to_network(1);
        assert!(net.is_castro());
        assert_eq!(net.widths(), vec![2, 1]);
        for x in [0.0, 0.25, 0.5, 1.0] {
            assert_eq!(net.forward(&[x]).unwrap(), t.eval(&[x]));
        }
    }

    #[test]
    fn layout_inserts_identities() {
        // ((x ⊗ y) ⇒ z) ⊕ (z ⇒ w)
        let t = n(
            0.0,
            vec![
                (
                    1.0,
                    n(
                        1.0,
                        vec![
                            (-1.0, n(-1.0, vec![(1.0, Input(0)), (1.0, Input(1))])),
                            (1.0, Input(2)),
                        ],
                    ),
                ),
                (1.0, n(1.0, vec![(-1.0, Input(2)), (1.0, Input(3))])),
            ],
        );
        let net = t.to_network(4);
        assert_eq!(net.widths(), vec![3, 2, 1]);
        let l0 = &net.layers()[0];
        assert_eq!(l0.neurons[0], Neuron::new(vec![1.0, 1.0, 0.0, 0.0], -1.0));
        assert_eq!(l0.neurons[1], Neuron::new(vec![0.0, 0.0, 1.0, 0.0], 0.0));
        assert_eq!(l0.neurons[2], Neuron::new(vec![0.0, 0.0, -1.0, 1.0], 1.0));
        let l1 = &net.layers()[1];
        assert_eq!(l1.neurons[0], Neuron::new(vec![-1.0, 1.0, 0.0], 1.0));
        assert_eq!(l1.neurons[1], Neuron::new(vec![0.0, 0.0, 1.0], 0.0));
        assert_eq!(net.layers()[2].neurons[0], Neuron::new(vec![1.0, 1.0], 0.0));
    }

    #[test]
    fn layout_preserves_function() {
        let t = n(
            -1.0,
            vec![
                (1.0, Input(2)),
                (1.0, n(1.0, vec![(-1.0, Input(0)), (1.0, Input(1))])),
            ],
        );
        let net = t.to_network(3);
        for i in 0..=3 {
            for j in 0..=3 {
                for k in 0..=3 {
                    let x = [i as f64 / 3.0, j as f64 / 3.0, k as f64 / 3.0];
                    assert_eq!(net.forward(&x).unwrap(), t.eval(&x));
                }
            }
        }
    }

    #[test]
    fn bare_input_gets_identity_neuron() {
        let net = Input(1).to_network(2);
        assert_eq!(net.widths(), vec![1]);
        assert_eq!(net.forward(&[0.2, 0.7]).unwrap(), 0.7);
    }

    #[test]
    fn constants_sit_at_any_level() {
        let t = n(
            0.0,
            vec![(1.0, n(0.0, vec![(1.0, Input(0))])), (1.0, n(1.0, vec![]))],
        );
        let net = t.to_network(1);
        assert_eq!(net.widths(), vec![2, 1]);
        assert_eq!(net.forward(&[0.3]).unwrap(), 1.0);
    }

    #[test]
    fn display_literal() {
        let t = n(
            0.0,
            vec![
                (1.0, Input(2)),
                (1.0, n(0.0, vec![(-1.0, Input(0)), (1.0, Input(1))])),
            ],
        );
        assert_eq!(t.to_string(), "psi(0; x2, psi(0; -x0, x1))");
    }
}
