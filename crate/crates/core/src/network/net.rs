use std::ops::Deref;

use serde::Serialize;

use super::NetworkError;
use crate::logic::LogicError;
use crate::logic::{TruthFunction, TruthTable};

/// The saturating linear activation `ψ(z) = min(1, max(0, z))`.
#[inline]
pub fn activate(z: f64) -> f64 {
    z.max(0.0).min(1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Neuron {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl Neuron {
    pub fn new(weights: Vec<f64>, bias: f64) -> Self {
        Neuron { weights, bias }
    }

    pub fn fan_in(&self) -> usize {
        self.weights.len()
    }

    /// Indices of the inputs with a nonzero weight.
    pub fn support(&self) -> Vec<usize> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w != 0.0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn pre_activation(&self, input: &[f64]) -> f64 {
        self.bias + self.weights.iter().zip(input).map(|(w, x)| w * x).sum::<f64>()
    }

    pub fn fire(&self, input: &[f64]) -> f64 {
        activate(self.pre_activation(input))
    }

    /// True when every weight is -1, 0 or 1 and the bias is an integer.
    pub fn is_castro(&self) -> bool {
        self.bias.fract() == 0.0
            && self.bias.is_finite()
            && self.weights.iter().all(|&w| w == 0.0 || w == 1.0 || w == -1.0)
    }
}

/// One neuron viewed as a truth function of all its inputs.
impl TruthFunction for Neuron {
    fn arity(&self) -> usize {
        self.weights.len()
    }

    fn eval_point(&self, x: &[f64]) -> f64 {
        self.fire(x)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Layer {
    pub neurons: Vec<Neuron>,
}

impl Layer {
    pub fn new(neurons: Vec<Neuron>) -> Self {
        Layer { neurons }
    }

    /// Builds a layer from a row-major weight matrix and a bias vector.
    pub fn from_matrix(weights: Vec<Vec<f64>>, bias: Vec<f64>) -> Self {
        Layer {
            neurons: weights
                .into_iter()
                .zip(bias)
                .map(|(w, b)| Neuron::new(w, b))
                .collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.neurons.len()
    }

    pub fn fan_in(&self) -> usize {
        self.neurons.first().map_or(0, Neuron::fan_in)
    }

    fn apply(&self, input: &[f64], out: &mut Vec<f64>) {
        out.clear();
        out.extend(self.neurons.iter().map(|n| n.fire(input)));
    }
}

/// Activations recorded during a forward pass.
#[derive(Clone, Debug)]
pub struct Trace {
    /// `pre[l][j]`: pre-activation of neuron `j` in layer `l`.
    pub pre: Vec<Vec<f64>>,
    /// `act[0]` is the input; `act[l + 1]` the output of layer `l`.
    pub act: Vec<Vec<f64>>,
}

impl Trace {
    pub fn output(&self) -> f64 {
        self.act.last().expect("trace has an output")[0]
    }
}

/// A layered feed-forward ψ-network with a single output.
#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    arity: usize,
    layers: Vec<Layer>,
}

impl Network {
    pub fn new(arity: usize, layers: Vec<Layer>) -> Result<Self, NetworkError> {
        if layers.is_empty() {
            return Err(NetworkError::Shape("a network needs at least one layer".into()));
        }
        let mut width = arity;
        for (l, layer) in layers.iter().enumerate() {
            if layer.neurons.is_empty() {
                return Err(NetworkError::Shape(format!("layer {l} has no neurons")));
            }
            for (j, n) in layer.neurons.iter().enumerate() {
                if n.fan_in() != width {
                    return Err(NetworkError::Shape(format!(
                        "neuron {j} of layer {l} has fan-in {} but the previous layer has width {width}",
                        n.fan_in()
                    )));
                }
                if !n.bias.is_finite() || n.weights.iter().any(|w| !w.is_finite()) {
                    return Err(NetworkError::Shape(format!(
                        "neuron {j} of layer {l} has a non-finite parameter"
                    )));
                }
            }
            width = layer.width();
        }
        if width != 1 {
            return Err(NetworkError::Shape(format!(
                "the final layer must have width 1, found {width}"
            )));
        }
        Ok(Network { arity, layers })
    }

    /// Builds a network from `(weights, bias)` layer matrices.
    pub fn from_matrices(arity: usize, layers: Vec<(Vec<Vec<f64>>, Vec<f64>)>) -> Result<Self, NetworkError> {
        Network::new(
            arity,
            layers
                .into_iter()
                .map(|(w, b)| {
                    if w.len() != b.len() {
                        return Err(NetworkError::Shape(format!(
                            "{} weight rows but {} biases",
                            w.len(),
                            b.len()
                        )));
                    }
                    Ok(Layer::from_matrix(w, b))
                })
                .collect::<Result<_, _>>()?,
        )
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn widths(&self) -> Vec<usize> {
        self.layers.iter().map(Layer::width).collect()
    }

    pub fn neuron(&self, layer: usize, index: usize) -> &Neuron {
        &self.layers[layer].neurons[index]
    }

    pub fn neuron_count(&self) -> usize {
        self.layers.iter().map(Layer::width).sum()
    }

    pub fn forward(&self, input: &[f64]) -> Result<f64, NetworkError> {
        if input.len() != self.arity {
            return Err(NetworkError::ArityMismatch {
                expected: self.arity,
                got: input.len(),
            });
        }
        if let Some(&v) = input.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(NetworkError::Logic(LogicError::OutOfRange(v)));
        }
        Ok(self.forward_unchecked(input))
    }

    /// Forward pass without arity and range checks.
    pub fn forward_unchecked(&self, input: &[f64]) -> f64 {
        let mut cur = input.to_vec();
        let mut next = Vec::new();
        for layer in &self.layers {
            layer.apply(&cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
        }
        cur[0]
    }

    pub fn forward_trace(&self, input: &[f64]) -> Trace {
        let mut pre = Vec::with_capacity(self.layers.len());
        let mut act = Vec::with_capacity(self.layers.len() + 1);
        act.push(input.to_vec());
        for layer in &self.layers {
            let prev = act.last().expect("input recorded");
            let z: Vec<f64> = layer.neurons.iter().map(|n| n.pre_activation(prev)).collect();
            act.push(z.iter().map(|&z| activate(z)).collect());
            pre.push(z);
        }
        Trace { pre, act }
    }

    /// Outputs of every layer on `input`; entry 0 is the input itself.
    pub fn activations(&self, input: &[f64]) -> Vec<Vec<f64>> {
        self.forward_trace(input).act
    }

    pub fn num_params(&self) -> usize {
        self.layers.iter().map(|l| l.width() * (l.fan_in() + 1)).sum()
    }

    /// All parameters, layer by layer and neuron by neuron, each neuron's
    /// weights followed by its bias.
    pub fn params(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.num_params());
        for n in self.layers.iter().flat_map(|l| &l.neurons) {
            out.extend_from_slice(&n.weights);
            out.push(n.bias);
        }
        out
    }

    pub fn set_params(&mut self, params: &[f64]) {
        assert_eq!(params.len(), self.num_params(), "parameter vector length");
        let mut it = params.iter();
        for n in self.layers.iter_mut().flat_map(|l| &mut l.neurons) {
            for w in &mut n.weights {
                *w = *it.next().expect("length checked");
            }
            n.bias = *it.next().expect("length checked");
        }
    }

    pub fn with_params(&self, params: &[f64]) -> Network {
        let mut net = self.clone();
        net.set_params(params);
        net
    }

    /// `true` at positions of [`Network::params`] that hold weights.
    pub fn weight_mask(&self) -> Vec<bool> {
        let mut out = Vec::with_capacity(self.num_params());
        for n in self.layers.iter().flat_map(|l| &l.neurons) {
            out.extend(std::iter::repeat(true).take(n.fan_in()));
            out.push(false);
        }
        out
    }

    /// Applies `f(value, is_weight)` to every parameter.
    pub fn map_params(&self, mut f: impl FnMut(f64, bool) -> f64) -> Network {
        let mut net = self.clone();
        for n in net.layers.iter_mut().flat_map(|l| &mut l.neurons) {
            for w in &mut n.weights {
                *w = f(*w, true);
            }
            n.bias = f(n.bias, false);
        }
        net
    }

    pub fn nonzero_weight_count(&self) -> usize {
        self.layers
            .iter()
            .flat_map(|l| &l.neurons)
            .map(|n| n.weights.iter().filter(|&&w| w != 0.0).count())
            .sum()
    }

    pub fn is_castro(&self) -> bool {
        self.layers.iter().flat_map(|l| &l.neurons).all(Neuron::is_castro)
    }

    /// `reachable[l][j]` is true when neuron `j` of layer `l` feeds the output
    /// through a path of nonzero weights.
    pub fn reachable(&self) -> Vec<Vec<bool>> {
        let mut out: Vec<Vec<bool>> = self.layers.iter().map(|l| vec![false; l.width()]).collect();
        let last = out.len() - 1;
        out[last][0] = true;
        for l in (1..self.layers.len()).rev() {
            for (j, n) in self.layers[l].neurons.iter().enumerate() {
                if !out[l][j] {
                    continue;
                }
                for i in n.support() {
                    out[l - 1][i] = true;
                }
            }
        }
        out
    }

    /// Input variables that reach the output through nonzero weights.
    pub fn relevant_inputs(&self) -> Vec<usize> {
        let reach = self.reachable();
        let mut used = vec![false; self.arity];
        for (j, n) in self.layers[0].neurons.iter().enumerate() {
            if reach[0][j] {
                for i in n.support() {
                    used[i] = true;
                }
            }
        }
        (0..self.arity).filter(|&i| used[i]).collect()
    }

    pub fn truth_subtable(&self, n: u32) -> Result<TruthTable, LogicError> {
        TruthTable::tabulate(self, n)
    }
}

impl TruthFunction for Network {
    fn arity(&self) -> usize {
        self.arity
    }

    fn eval_point(&self, x: &[f64]) -> f64 {
        self.forward_unchecked(x)
    }
}

/// A network whose weights are all -1, 0 or 1 and whose biases are integers.
#[derive(Clone, Debug, PartialEq)]
pub struct CastroNetwork(Network);

impl CastroNetwork {
    pub fn as_network(&self) -> &Network {
        &self.0
    }

    pub fn into_network(self) -> Network {
        self.0
    }

    /// True when no neuron has more than two nonzero weights.
    pub fn is_binary(&self) -> bool {
        self.0
            .layers()
            .iter()
            .flat_map(|l| &l.neurons)
            .all(|n| n.support().len() <= 2)
    }
}

impl TryFrom<Network> for CastroNetwork {
    type Error = NetworkError;

    fn try_from(net: Network) -> Result<Self, Self::Error> {
        for (l, layer) in net.layers().iter().enumerate() {
            for (j, n) in layer.neurons.iter().enumerate() {
                if !n.is_castro() {
                    return Err(NetworkError::NotCastro { layer: l, index: j });
                }
            }
        }
        Ok(CastroNetwork(net))
    }
}

impl Deref for CastroNetwork {
    type Target = Network;

    fn deref(&self) -> &Network {
        &self.0
    }
}

impl TruthFunction for CastroNetwork {
    fn arity(&self) -> usize {
        self.0.arity()
    }

    fn eval_point(&self, x: &[f64]) -> f64 {
        self.0.forward_unchecked(x)
    }
}
