use std::fmt::Write as _;
use std::io::{Read, Write};

use serde::Deserialize;

use super::net::{Layer, Network};
use super::NetworkError;
use crate::numfmt::format_sig;

/// A network together with the metadata stored alongside it on disk.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkFile {
    pub network: Network,
    pub resolution_hint: Option<u32>,
    pub input_names: Option<Vec<String>>,
}

impl NetworkFile {
    pub fn new(network: Network) -> Self {
        NetworkFile {
            network,
            resolution_hint: None,
            input_names: None,
        }
    }

    /// Input names, falling back to `x0, x1, ...`.
    pub fn names(&self) -> Vec<String> {
        self.input_names
            .clone()
            .unwrap_or_else(|| (0..self.network.arity()).map(|i| format!("x{i}")).collect())
    }

    /// JSON text with every real printed to 17 significant digits.
    pub fn to_json(&self) -> String {
        let mut s = String::new();
        let net = &self.network;
        let _ = writeln!(s, "{{");
        let _ = writeln!(s, "  \"arity\": {},", net.arity());
        match self.resolution_hint {
            Some(n) => {
                let _ = writeln!(s, "  \"resolution_hint\": {n},");
            }
            None => s.push_str("  \"resolution_hint\": null,\n"),
        }
        if let Some(names) = &self.input_names {
            let quoted: Vec<String> = names
                .iter()
                .map(|n| serde_json::to_string(n).expect("strings serialize"))
                .collect();
            let _ = writeln!(s, "  \"input_names\": [{}],", quoted.join(", "));
        }
        s.push_str("  \"layers\": [\n");
        for (l, layer) in net.layers().iter().enumerate() {
            s.push_str("    {\n      \"weights\": [\n");
            for (j, n) in layer.neurons.iter().enumerate() {
                let row: Vec<String> = n.weights.iter().map(|&w| format_sig(w, 17)).collect();
                let sep = if j + 1 < layer.width() { "," } else { "" };
                let _ = writeln!(s, "        [{}]{sep}", row.join(", "));
            }
            let bias: Vec<String> = layer.neurons.iter().map(|n| format_sig(n.bias, 17)).collect();
            let _ = writeln!(s, "      ],\n      \"bias\": [{}]", bias.join(", "));
            let sep = if l + 1 < net.depth() { "," } else { "" };
            let _ = writeln!(s, "    }}{sep}");
        }
        s.push_str("  ]\n}\n");
        s
    }

    pub fn from_json(text: &str) -> Result<Self, NetworkError> {
        let raw: RawFile = serde_json::from_str(text)?;
        let layers = raw
            .layers
            .into_iter()
            .enumerate()
            .map(|(l, r)| {
                if r.weights.len() != r.bias.len() {
                    return Err(NetworkError::Shape(format!(
                        "layer {l} has {} weight rows but {} biases",
                        r.weights.len(),
                        r.bias.len()
                    )));
                }
                Ok(Layer::from_matrix(r.weights, r.bias))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let network = Network::new(raw.arity, layers)?;
        if let Some(names) = &raw.input_names {
            if names.len() != raw.arity {
                return Err(NetworkError::Shape(format!(
                    "{} input names for arity {}",
                    names.len(),
                    raw.arity
                )));
            }
        }
        Ok(NetworkFile {
            network,
            resolution_hint: raw.resolution_hint,
            input_names: raw.input_names,
        })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    arity: usize,
    #[serde(default)]
    resolution_hint: Option<u32>,
    #[serde(default)]
    input_names: Option<Vec<String>>,
    layers: Vec<RawLayer>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLayer {
    weights: Vec<Vec<f64>>,
    bias: Vec<f64>,
}

pub fn write_network<W: Write>(mut w: W, file: &NetworkFile) -> Result<(), NetworkError> {
    w.write_all(file.to_json().as_bytes())?;
    Ok(())
}

pub fn read_network<R: Read>(mut r: R) -> Result<NetworkFile, NetworkError> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    NetworkFile::from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Network {
        Network::from_matrices(
            2,
            vec![
                (vec![vec![0.1, -1.0], vec![1.0 / 3.0, 1.0]], vec![0.0, -2.5]),
                (vec![vec![1.0, 1.0]], vec![0.0]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn round_trip_is_exact() {
        let file = NetworkFile {
            network: sample(),
            resolution_hint: Some(4),
            input_names: Some(vec!["a\"b".into(), "odor=n".into()]),
        };
        let text = file.to_json();
        assert!(text.contains("0.33333333333333331"));
        assert!(text.contains("0.10000000000000001"));
        let back = NetworkFile::from_json(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn minimal_file() {
        let text = r#"{"arity": 1, "layers": [{"weights": [[-1]], "bias": [1]}]}"#;
        let f = NetworkFile::from_json(text).unwrap();
        assert_eq!(f.network.forward(&[0.25]).unwrap(), 0.75);
        assert_eq!(f.names(), vec!["x0".to_string()]);
    }

    #[test]
    fn rejects_bad_shapes() {
        let text = r#"{"arity": 2, "layers": [{"weights": [[1]], "bias": [0]}]}"#;
        assert!(NetworkFile::from_json(text).is_err());
        let text = r#"{"arity": 1, "input_names": ["a", "b"], "layers": [{"weights": [[1]], "bias": [0]}]}"#;
        assert!(NetworkFile::from_json(text).is_err());
    }
}
