use std::path::Path;

use anyhow::{bail, Context, Result};
use luknet::logic::{parse_formula_with, Padded, ParsedFormula};
use luknet::network::{compile_formula_with_arity, parse_neuron_literal, NetworkFile};
use luknet::{CastroNetwork, Network, TruthFunction};

/// A truth function given on the command line.
pub enum Operand {
    Formula(ParsedFormula),
    Network(NetworkFile),
}

/// Resolves an operand: a `compile:` prefix forces a network, `psi(` starts a
/// neuron literal, an existing path is a network file, anything else is a
/// formula. Identifiers in `known` bind to their position.
pub fn resolve(text: &str, known: &[String]) -> Result<Operand> {
    if let Some(rest) = text.strip_prefix("compile:") {
        return Ok(Operand::Network(NetworkFile::new(compile_text(rest, known)?)));
    }
    if text.trim_start().starts_with("psi(") {
        return Ok(Operand::Network(NetworkFile::new(literal(text)?)));
    }
    let path = Path::new(text);
    if path.is_file() {
        let body = std::fs::read_to_string(path).with_context(|| format!("reading {text}"))?;
        let file = NetworkFile::from_json(&body).with_context(|| format!("loading network {text}"))?;
        return Ok(Operand::Network(file));
    }
    let parsed = parse_formula_with(text, known).with_context(|| format!("parsing formula {text:?}"))?;
    Ok(Operand::Formula(parsed))
}

fn literal(text: &str) -> Result<Network> {
    let tree = parse_neuron_literal(text.trim())?;
    Ok(tree.to_network(tree.arity()))
}

fn compile_text(text: &str, known: &[String]) -> Result<Network> {
    if text.trim_start().starts_with("psi(") {
        return literal(text);
    }
    let p = parse_formula_with(text, known)?;
    Ok(compile_formula_with_arity(&p.formula, p.names.len()).into_network())
}

impl Operand {
    pub fn arity(&self) -> usize {
        match self {
            Operand::Formula(p) => p.names.len(),
            Operand::Network(f) => f.network.arity(),
        }
    }

    pub fn names(&self) -> Vec<String> {
        match self {
            Operand::Formula(p) => p.names.clone(),
            Operand::Network(f) => f.names(),
        }
    }

    pub fn resolution_hint(&self) -> Option<u32> {
        match self {
            Operand::Formula(_) => None,
            Operand::Network(f) => f.resolution_hint,
        }
    }

    /// The operand as a Castro network; formulas are compiled.
    pub fn castro(&self) -> Result<CastroNetwork> {
        match self {
            Operand::Formula(p) => Ok(compile_formula_with_arity(&p.formula, p.names.len())),
            Operand::Network(f) => CastroNetwork::try_from(f.network.clone())
                .context("the network has weights outside {-1, 0, 1} or non-integer biases"),
        }
    }

    /// The operand viewed with `arity` inputs; extra inputs are ignored.
    pub fn widened(&self, arity: usize) -> Result<Widened<'_>> {
        if arity < self.arity() {
            bail!(
                "operand has {} inputs, more than the {arity} available",
                self.arity()
            );
        }
        Ok(Widened { op: self, arity })
    }
}

pub struct Widened<'a> {
    op: &'a Operand,
    arity: usize,
}

impl TruthFunction for Widened<'_> {
    fn arity(&self) -> usize {
        self.arity
    }

    fn eval_point(&self, x: &[f64]) -> f64 {
        match self.op {
            Operand::Formula(p) => Padded {
                formula: &p.formula,
                arity: self.arity,
            }
            .eval_point(x),
            Operand::Network(f) => f.network.forward_unchecked(&x[..f.network.arity()]),
        }
    }
}
