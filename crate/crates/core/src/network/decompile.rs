use super::classify::{classify_neuron, neuron_to_formula, NeuronKind};
use super::net::CastroNetwork;
use super::NetworkError;
use crate::logic::Formula;

/// Reads a Castro network back as a formula, layer by layer.
///
/// Only neurons that reach the output are translated. Fails with
/// [`NetworkError::Unrepresentable`] at the first such neuron, in layer order.
pub fn network_to_formula(net: &CastroNetwork) -> Result<Formula, NetworkError> {
    let reach = net.reachable();
    let mut prev: Vec<Formula> = (0..net.arity()).map(Formula::Var).collect();
    for (l, layer) in net.layers().iter().enumerate() {
        let mut cur = Vec::with_capacity(layer.width());
        for (j, nr) in layer.neurons.iter().enumerate() {
            if !reach[l][j] {
                cur.push(Formula::Const0);
                continue;
            }
            let kind = classify_neuron(nr)?;
            if kind == NeuronKind::Unrepresentable {
                return Err(NetworkError::Unrepresentable { layer: l, index: j });
            }
            cur.push(neuron_to_formula(&kind, &prev)?);
        }
        prev = cur;
    }
    Ok(prev.pop().expect("final layer has one neuron"))
}
