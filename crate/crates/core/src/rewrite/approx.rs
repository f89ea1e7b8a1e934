use rayon::prelude::*;
use serde::Serialize;

use super::rule_r::{decompose, quantize, SearchOptions, TreeAt};
use super::similarity::{lambda_similarity, mean_abs_diff, EvalMode, EvalSet};
use super::RewriteError;
use crate::logic::{format_formula_named, Formula, Padded};
use crate::network::{classify_neuron, neuron_to_formula, CastroNetwork, Neuron, NeuronKind, NeuronTree};

/// Largest table used to deduplicate candidates when the evaluation set is
/// not a full grid.
const HASH_BUDGET: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq)]
pub struct CandidateScore {
    pub tree: NeuronTree,
    pub lambda: f64,
}

/// The outcome of [`best_approximation`].
#[derive(Clone, Debug)]
pub struct ApproximationResult {
    /// Binary trees generated by rule R before deduplication.
    pub explored: usize,
    pub best: NeuronTree,
    pub lambda: f64,
    /// Every distinct candidate with its λ, in generation order.
    pub scores: Vec<CandidateScore>,
}

fn hash_resolution(set: &EvalSet, k: usize) -> Option<u32> {
    if let EvalMode::FullGrid { n } = set.mode() {
        return Some(n);
    }
    [4u32, 2, 1].into_iter().find(|&n| {
        (n as usize + 1)
            .checked_pow(k as u32)
            .is_some_and(|l| l <= HASH_BUDGET)
    })
}

/// The rule-R decomposition of `nr` closest to it on `set`.
///
/// `set` ranges over all `nr.fan_in()` inputs. Ties in λ (at 1e-12) go to
/// fewer neurons, then to the smaller literal text. A representable neuron is
/// its own approximation.
pub fn best_approximation(
    nr: &Neuron,
    set: &EvalSet,
    beam_width: usize,
) -> Result<ApproximationResult, RewriteError> {
    if set.arity() != nr.fan_in() {
        return Err(RewriteError::ArityMismatch {
            expected: nr.fan_in(),
            got: set.arity(),
        });
    }
    if classify_neuron(nr)?.is_representable() {
        let tree = NeuronTree::from_neuron(nr);
        return Ok(ApproximationResult {
            explored: 1,
            best: tree.clone(),
            lambda: 0.0,
            scores: vec![CandidateScore { tree, lambda: 0.0 }],
        });
    }
    let support = nr.support();
    let compact = Neuron::new(support.iter().map(|&i| nr.weights[i]).collect(), nr.bias);
    let local = set.project(&support);
    let k = support.len();
    let found = decompose(
        &compact,
        &SearchOptions {
            beam_width,
            hash_resolution: hash_resolution(&local, k),
            ranking: &local,
        },
    );
    let target = local.evaluate(&compact);
    let scores: Vec<CandidateScore> = found
        .candidates
        .par_iter()
        .map(|t| CandidateScore {
            lambda: mean_abs_diff(&local.evaluate(&TreeAt { tree: t, arity: k }), &target),
            tree: t.remap_inputs(&|i| support[i]),
        })
        .collect();
    let best = scores
        .iter()
        .map(|s| (quantize(s.lambda), s.tree.neuron_count(), s.tree.to_string(), s))
        .min_by(|a, b| (a.0, a.1, &a.2).cmp(&(b.0, b.1, &b.2)))
        .map(|t| t.3.clone())
        .ok_or(RewriteError::NoCandidates)?;
    Ok(ApproximationResult {
        explored: found.explored,
        best: best.tree,
        lambda: best.lambda,
        scores,
    })
}

/// The formula of a binary Castro tree whose inputs stand for `leaves`.
pub fn tree_to_formula(t: &NeuronTree, leaves: &[Formula]) -> Result<Formula, RewriteError> {
    match t {
        NeuronTree::Input(i) => Ok(leaves[*i].clone()),
        NeuronTree::Node { bias, inputs } => {
            let children = inputs
                .iter()
                .map(|(_, c)| tree_to_formula(c, leaves))
                .collect::<Result<Vec<_>, _>>()?;
            let nr = Neuron::new(inputs.iter().map(|(w, _)| *w).collect(), *bias);
            let kind = classify_neuron(&nr)?;
            Ok(neuron_to_formula(&kind, &children)?)
        }
    }
}

/// Per-neuron entry of an [`ExtractionReport`].
#[derive(Clone, Debug, Serialize)]
pub struct NeuronReport {
    pub layer: usize,
    pub index: usize,
    pub kind: &'static str,
    /// The neuron's formula over its own inputs: network inputs for the
    /// first layer, `n<l>_<j>` for neuron `j` of layer `l` otherwise.
    pub formula: String,
    pub lambda: f64,
    pub candidates_explored: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtractionReport {
    #[serde(skip)]
    pub formula_ast: Formula,
    pub formula: String,
    /// λ between the network and the extracted formula.
    pub lambda: f64,
    pub eval_mode: EvalMode,
    pub approximated: usize,
    pub neurons: Vec<NeuronReport>,
}

impl ExtractionReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn local_names(layer: usize, width: usize, names: &[String]) -> Vec<String> {
    if layer == 0 {
        names.to_vec()
    } else {
        (0..width).map(|j| format!("n{}_{j}", layer - 1)).collect()
    }
}

/// Reads `net` as a formula, replacing each unrepresentable neuron by its
/// best rule-R approximation.
///
/// With a full-grid `set` each neuron is scored on the grid over its own
/// inputs; otherwise on the activations that `set` induces at its inputs.
/// `names` label the network inputs in the printed formulas.
pub fn extract_with_approximation(
    net: &CastroNetwork,
    set: &EvalSet,
    names: &[String],
    beam_width: usize,
) -> Result<ExtractionReport, RewriteError> {
    if set.arity() != net.arity() {
        return Err(RewriteError::ArityMismatch {
            expected: net.arity(),
            got: set.arity(),
        });
    }
    if names.len() != net.arity() {
        return Err(RewriteError::ArityMismatch {
            expected: net.arity(),
            got: names.len(),
        });
    }
    let reach = net.reachable();
    let propagated: Option<Vec<Vec<Vec<f64>>>> = match set.mode() {
        EvalMode::FullGrid { .. } => None,
        _ => Some(set.points().map(|p| net.activations(p)).collect()),
    };
    let mut prev: Vec<Formula> = (0..net.arity()).map(Formula::Var).collect();
    let mut reports = Vec::new();
    let mut approximated = 0;
    for (l, layer) in net.layers().iter().enumerate() {
        let inputs_named = local_names(l, layer.fan_in(), names);
        let local_vars: Vec<Formula> = (0..layer.fan_in()).map(Formula::Var).collect();
        let mut cur = Vec::with_capacity(layer.width());
        for (j, nr) in layer.neurons.iter().enumerate() {
            if !reach[l][j] {
                cur.push(Formula::Const0);
                continue;
            }
            let kind = classify_neuron(nr)?;
            let (local, lambda, explored) = if kind == NeuronKind::Unrepresentable {
                let support = nr.support();
                let local_set = match (&propagated, set.mode()) {
                    (None, EvalMode::FullGrid { n }) => {
                        let g = EvalSet::grid(support.len(), n)?;
                        let mut pts = Vec::with_capacity(g.len());
                        for p in g.points() {
                            let mut full = vec![0.0; nr.fan_in()];
                            for (s, v) in support.iter().zip(p) {
                                full[*s] = *v;
                            }
                            pts.push(full);
                        }
                        EvalSet::rows(nr.fan_in(), &pts)?.with_mode(set.mode())
                    }
                    (Some(acts), _) => {
                        let rows: Vec<Vec<f64>> = acts.iter().map(|a| a[l].clone()).collect();
                        EvalSet::rows(nr.fan_in(), &rows)?
                    }
                    (None, _) => unreachable!("only grids skip propagation"),
                };
                let approx = best_approximation(nr, &local_set, beam_width)?;
                approximated += 1;
                (
                    tree_to_formula(&approx.best, &local_vars)?,
                    approx.lambda,
                    approx.explored,
                )
            } else {
                (neuron_to_formula(&kind, &local_vars)?, 0.0, 1)
            };
            reports.push(NeuronReport {
                layer: l,
                index: j,
                kind: kind.name(),
                formula: format_formula_named(&local, &inputs_named),
                lambda,
                candidates_explored: explored,
            });
            cur.push(local.substitute(&prev));
        }
        prev = cur;
    }
    let formula = prev.pop().expect("final layer has one neuron");
    let lambda = lambda_similarity(
        net.as_network(),
        &Padded {
            formula: &formula,
            arity: net.arity(),
        },
        set,
    )?;
    Ok(ExtractionReport {
        formula: format_formula_named(&formula, names),
        formula_ast: formula,
        lambda,
        eval_mode: set.mode(),
        approximated,
        neurons: reports,
    })
}
