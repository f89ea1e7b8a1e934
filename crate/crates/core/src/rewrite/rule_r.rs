use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Serialize;

use super::similarity::{mean_abs_diff, EvalSet};
use super::RewriteError;
use crate::logic::{Grid, TruthFunction};
use crate::network::{classify_neuron, Neuron, NeuronKind, NeuronTree};

/// Default number of partial decompositions kept per expansion round.
pub const DEFAULT_BEAM_WIDTH: usize = 64;

/// One application of rule R: `ψ_b(.., w x_s, ..)` becomes
/// `ψ_{b1}(w x_s, ψ_{b0}(rest))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Decomposition {
    /// Index of the separated input.
    pub separated: usize,
    pub weight: f64,
    pub b0: f64,
    pub b1: f64,
    /// The inner neuron over the original inputs, with the separated weight zeroed.
    pub inner: Neuron,
}

impl Decomposition {
    /// The outer neuron over `(x_s, inner)`.
    pub fn outer(&self) -> Neuron {
        Neuron::new(vec![self.weight, 1.0], self.b1)
    }

    pub fn tree(&self) -> NeuronTree {
        NeuronTree::node(
            self.b1,
            vec![
                (self.weight, NeuronTree::Input(self.separated)),
                (1.0, NeuronTree::from_neuron(&self.inner)),
            ],
        )
    }
}

fn signs(weights: impl Iterator<Item = f64>) -> (i64, i64) {
    let (mut p, mut n) = (0, 0);
    for w in weights {
        if w > 0.0 {
            p += 1;
        } else if w < 0.0 {
            n += 1;
        }
    }
    (p, n)
}

/// Biases for which a neuron with `p` positive and `n` negative unit weights
/// is not constant: `-p < b <= n`.
fn non_constant(b: i64, p: i64, n: i64) -> bool {
    -p < b && b <= n
}

/// All rule-R splits of `nr` separating input `separated`, ordered by `b1`.
pub fn rule_r_splits(nr: &Neuron, separated: usize) -> Result<Vec<Decomposition>, RewriteError> {
    if !nr.is_castro() {
        return Err(RewriteError::NotCastro);
    }
    let support = nr.support();
    if support.len() < 3 {
        return Err(RewriteError::FanInTooSmall(support.len()));
    }
    if !support.contains(&separated) {
        return Err(RewriteError::NotAnInput(separated));
    }
    let weight = nr.weights[separated];
    let mut inner_w = nr.weights.clone();
    inner_w[separated] = 0.0;
    let (pi, ni) = signs(inner_w.iter().copied());
    let (po, no) = signs([weight, 1.0].into_iter());
    let b = nr.bias as i64;
    let mut out = Vec::new();
    for b1 in -po + 1..=no {
        let b0 = b - b1;
        if b1 <= b0 && non_constant(b0, pi, ni) {
            out.push(Decomposition {
                separated,
                weight,
                b0: b0 as f64,
                b1: b1 as f64,
                inner: Neuron::new(inner_w.clone(), b0 as f64),
            });
        }
    }
    Ok(out)
}

/// Applies rule R to the first neuron with more than two inputs, in every
/// possible way. Returns `None` when the tree is already binary.
fn expand_first(t: &NeuronTree) -> Option<Vec<NeuronTree>> {
    let NeuronTree::Node { bias, inputs } = t else {
        return None;
    };
    if inputs.len() > 2 {
        let m = inputs.len();
        let (p, n) = signs(inputs.iter().map(|(w, _)| *w));
        let b = *bias as i64;
        let mut out = Vec::new();
        for s in 0..m {
            let (ws, xs) = &inputs[s];
            let rest: Vec<(f64, NeuronTree)> = inputs
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != s)
                .map(|(_, c)| c.clone())
                .collect();
            let (pi, ni) = (p - (*ws > 0.0) as i64, n - (*ws < 0.0) as i64);
            let (po, no) = (1 + (*ws > 0.0) as i64, (*ws < 0.0) as i64);
            for b1 in -po + 1..=no {
                let b0 = b - b1;
                if b1 <= b0 && non_constant(b0, pi, ni) {
                    out.push(NeuronTree::node(
                        b1 as f64,
                        vec![
                            (*ws, xs.clone()),
                            (1.0, NeuronTree::node(b0 as f64, rest.clone())),
                        ],
                    ));
                }
            }
        }
        return Some(out);
    }
    for (k, (_, c)) in inputs.iter().enumerate() {
        if let Some(children) = expand_first(c) {
            return Some(
                children
                    .into_iter()
                    .map(|child| {
                        let mut ins = inputs.clone();
                        ins[k].1 = child;
                        NeuronTree::node(*bias, ins)
                    })
                    .collect(),
            );
        }
    }
    None
}

/// Grid values of `f` as multiples of `1/n`; exact for Castro trees.
pub(crate) fn table_key<F: TruthFunction + ?Sized>(f: &F, arity: usize, n: u32) -> Vec<u32> {
    let grid = Grid::new(n).expect("resolution is positive");
    let len = grid.table_len(arity, usize::MAX).expect("small table");
    let mut x = vec![0.0; arity];
    (0..len)
        .map(|k| {
            grid.decode(k, &mut x);
            (f.eval_point(&x) * n as f64).round() as u32
        })
        .collect()
}

/// Evaluates a tree over a fixed arity.
pub(crate) struct TreeAt<'a> {
    pub tree: &'a NeuronTree,
    pub arity: usize,
}

impl TruthFunction for TreeAt<'_> {
    fn arity(&self) -> usize {
        self.arity
    }

    fn eval_point(&self, x: &[f64]) -> f64 {
        self.tree.eval(x)
    }
}

/// The candidate set produced by [`decompositions`].
#[derive(Clone, Debug)]
pub struct DecompositionSet {
    /// Distinct functions, in generation order.
    pub candidates: Vec<NeuronTree>,
    /// Binary trees generated before deduplication.
    pub explored: usize,
}

/// Options for [`decompose`].
pub(crate) struct SearchOptions<'a> {
    pub beam_width: usize,
    /// Resolution of the tables used to deduplicate candidates.
    pub hash_resolution: Option<u32>,
    /// Points used to rank partial decompositions when the beam overflows.
    pub ranking: &'a EvalSet,
}

/// Keeps the partial trees of the `beam_width` functions closest to `nr`.
///
/// Trees are grouped by table when a hash resolution is set, so every
/// structure of a kept function survives.
fn prune(next: Vec<NeuronTree>, nr: &Neuron, target: &[f64], opts: &SearchOptions<'_>) -> Vec<NeuronTree> {
    let arity = nr.fan_in();
    let mut groups: Vec<(Vec<u32>, Vec<NeuronTree>)> = Vec::new();
    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    for (k, t) in next.into_iter().enumerate() {
        let key = match opts.hash_resolution {
            Some(n) => table_key(&TreeAt { tree: &t, arity }, arity, n),
            None => vec![k as u32],
        };
        match index.get(&key) {
            Some(&g) => groups[g].1.push(t),
            None => {
                index.insert(key.clone(), groups.len());
                groups.push((key, vec![t]));
            }
        }
    }
    if groups.len() <= opts.beam_width {
        return groups.into_iter().flat_map(|g| g.1).collect();
    }
    let mut scored: Vec<(i64, usize, String, Vec<NeuronTree>)> = groups
        .into_iter()
        .map(|(_, members)| {
            let first = &members[0];
            let vals = opts.ranking.evaluate(&TreeAt { tree: first, arity });
            (
                quantize(mean_abs_diff(&vals, target)),
                first.neuron_count(),
                first.to_string(),
                members,
            )
        })
        .collect();
    scored.sort_by(|a, b| (a.0, a.1, &a.2).cmp(&(b.0, b.1, &b.2)));
    scored.truncate(opts.beam_width.max(1));
    scored.into_iter().flat_map(|s| s.3).collect()
}

/// All binary Castro trees reachable from `nr` by repeated rule R, with
/// inputs numbered as in `nr`.
pub(crate) fn decompose(nr: &Neuron, opts: &SearchOptions<'_>) -> DecompositionSet {
    let arity = nr.fan_in();
    let root = NeuronTree::from_neuron(nr);
    let target = opts.ranking.evaluate(nr);
    let mut frontier = vec![root];
    let mut complete = Vec::new();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        let mut seen = BTreeSet::new();
        for t in &frontier {
            match expand_first(t) {
                None => complete.push(t.clone()),
                Some(children) => {
                    for c in children {
                        if seen.insert(c.to_string()) {
                            next.push(c);
                        }
                    }
                }
            }
        }
        frontier = prune(next, nr, &target, opts);
    }
    let explored = complete.len();
    let candidates = match opts.hash_resolution {
        Some(n) => {
            let mut seen = HashSet::new();
            complete
                .into_iter()
                .filter(|t| seen.insert(table_key(&TreeAt { tree: t, arity }, arity, n)))
                .collect()
        }
        None => {
            let mut seen = HashSet::new();
            complete
                .into_iter()
                .filter(|t| seen.insert(t.to_string()))
                .collect()
        }
    };
    DecompositionSet { candidates, explored }
}

pub(crate) fn quantize(lambda: f64) -> i64 {
    (lambda * 1e12).round() as i64
}

/// The set `S(α)` of binary Castro trees reachable from `nr` by rule R,
/// deduplicated by truth table at resolution `n`.
///
/// When a round produces more than `beam_width` partial trees, those closest
/// to `nr` on `S_n` are kept.
pub fn decompositions(nr: &Neuron, beam_width: usize, n: u32) -> Result<DecompositionSet, RewriteError> {
    if !nr.is_castro() {
        return Err(RewriteError::NotCastro);
    }
    let ranking = EvalSet::grid(nr.fan_in(), n)?;
    Ok(decompose(
        nr,
        &SearchOptions {
            beam_width,
            hash_resolution: Some(n),
            ranking: &ranking,
        },
    ))
}

/// True unless the neuron matches none of the conjunction, disjunction and
/// constant patterns.
pub fn is_representable(nr: &Neuron) -> Result<bool, RewriteError> {
    Ok(classify_neuron(nr)? != NeuronKind::Unrepresentable)
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

/// Groups candidates that become the same function after permuting inputs
/// that carry the same weight in `nr`; `nr` itself is invariant under such
/// permutations, so grouped candidates are equally similar to it.
///
/// Returns groups of candidate indices, in order of first member.
pub fn symmetry_classes(nr: &Neuron, candidates: &[NeuronTree], n: u32) -> Vec<Vec<usize>> {
    let arity = nr.fan_in();
    let support = nr.support();
    let pos: Vec<usize> = support.iter().copied().filter(|&i| nr.weights[i] > 0.0).collect();
    let neg: Vec<usize> = support.iter().copied().filter(|&i| nr.weights[i] < 0.0).collect();
    let mut maps = Vec::new();
    for pp in permutations(&pos) {
        for np in permutations(&neg) {
            let mut map: Vec<usize> = (0..arity).collect();
            for (a, b) in pos.iter().zip(&pp) {
                map[*a] = *b;
            }
            for (a, b) in neg.iter().zip(&np) {
                map[*a] = *b;
            }
            maps.push(map);
        }
    }
    let keys: Vec<Vec<u32>> = candidates
        .iter()
        .map(|t| {
            maps.iter()
                .map(|map| {
                    let moved = t.remap_inputs(&|i| map[i]);
                    table_key(&TreeAt { tree: &moved, arity }, arity, n)
                })
                .min()
                .expect("identity permutation")
        })
        .collect();
    let mut groups: Vec<(Vec<u32>, Vec<usize>)> = Vec::new();
    for (i, k) in keys.into_iter().enumerate() {
        match groups.iter_mut().find(|(g, _)| *g == k) {
            Some((_, members)) => members.push(i),
            None => groups.push((k, vec![i])),
        }
    }
    groups.into_iter().map(|(_, m)| m).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::parse_neuron_literal;

    fn is_binary(t: &NeuronTree) -> bool {
        t.max_fan_in() <= 2
    }

    fn nr(w: &[f64], b: f64) -> Neuron {
        Neuron::new(w.to_vec(), b)
    }

    #[test]
    fn splits_of_unrepresentable_neuron() {
        let a = nr(&[-1.0, 1.0, 1.0], 0.0);
        let s = rule_r_splits(&a, 2).unwrap();
        let trees: Vec<String> = s.iter().map(|d| d.tree().to_string()).collect();
        assert_eq!(
            trees,
            vec!["psi(-1; x2, psi(1; -x0, x1))", "psi(0; x2, psi(0; -x0, x1))"]
        );
        assert!(s.iter().all(|d| d.b1 <= d.b0 && d.b0 + d.b1 == 0.0));
    }

    #[test]
    fn splits_of_disjunction() {
        let s = rule_r_splits(&nr(&[-1.0, -1.0, 1.0], 2.0), 2).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].b0, s[0].b1), (2.0, 0.0));
        assert_eq!(s[0].tree().to_string(), "psi(0; x2, psi(2; -x0, -x1))");
    }

    #[test]
    fn split_errors() {
        assert!(rule_r_splits(&nr(&[1.0, 1.0], -1.0), 0).is_err());
        assert!(rule_r_splits(&nr(&[1.0, 1.0, 0.0, 1.0], -1.0), 2).is_err());
        assert!(rule_r_splits(&nr(&[0.5, 1.0, 1.0], -1.0), 0).is_err());
    }

    #[test]
    fn split_sides_are_not_constant() {
        for b in -4..=4 {
            let a = nr(&[1.0, -1.0, 1.0, -1.0], b as f64);
            for s in 0..4 {
                for d in rule_r_splits(&a, s).unwrap() {
                    assert!(!classify_neuron(&d.inner).unwrap().is_constant());
                    assert!(!classify_neuron(&d.outer()).unwrap().is_constant());
                    assert!(d.b1 <= d.b0);
                }
            }
        }
    }

    #[test]
    fn three_input_candidates() {
        let a = nr(&[-1.0, 1.0, 1.0], 0.0);
        let set = decompositions(&a, DEFAULT_BEAM_WIDTH, 4).unwrap();
        assert_eq!(set.candidates.len(), 5);
        let classes = symmetry_classes(&a, &set.candidates, 4);
        assert_eq!(classes.len(), 3);
        let reps: BTreeSet<String> = classes
            .iter()
            .map(|g| g.iter().map(|&i| set.candidates[i].to_string()).min().unwrap())
            .collect();
        let expected: BTreeSet<String> = [
            "psi(0; -x0, psi(0; x1, x2))",
            "psi(-1; x1, psi(1; -x0, x2))",
            "psi(0; x1, psi(0; -x0, x2))",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        assert_eq!(reps, expected);
    }

    #[test]
    fn equivalent_configurations() {
        let a = nr(&[-1.0, -1.0, 1.0], 2.0);
        let set = decompositions(&a, DEFAULT_BEAM_WIDTH, 4).unwrap();
        assert!(set.explored >= 2);
        assert_eq!(set.candidates.len(), 1);
    }

    #[test]
    fn five_input_candidates_are_binary() {
        let a = nr(&[-1.0, 1.0, -1.0, 1.0, -1.0], 0.0);
        let set = decompositions(&a, DEFAULT_BEAM_WIDTH, 2).unwrap();
        assert!(!set.candidates.is_empty());
        for t in &set.candidates {
            assert!(is_binary(t));
            t.for_each_neuron(&mut |b, ins| {
                let w: Vec<f64> = ins.iter().map(|(w, _)| *w).collect();
                let k = classify_neuron(&Neuron::new(w, b)).unwrap();
                assert!(k.is_representable() && !k.is_constant());
            });
        }
        let beta2 = parse_neuron_literal("psi(-1; x3, psi(0; x1, psi(0; -x4, psi(1; -x2, -x0))))").unwrap();
        let key = table_key(
            &TreeAt {
                tree: &beta2,
                arity: 5,
            },
            5,
            2,
        );
        assert!(set
            .candidates
            .iter()
            .any(|t| table_key(&TreeAt { tree: t, arity: 5 }, 5, 2) == key));
    }

    #[test]
    fn representability() {
        assert!(is_representable(&nr(&[1.0, 1.0, 1.0], -2.0)).unwrap());
        assert!(!is_representable(&nr(&[-1.0, 1.0, 1.0], 0.0)).unwrap());
        assert!(is_representable(&nr(&[-1.0, -1.0, -1.0], 4.0)).unwrap());
    }

    #[test]
    fn representable_iff_decompositions_agree() {
        for m in 3..=4usize {
            for signs in 0..(1u32 << m) {
                let w: Vec<f64> = (0..m)
                    .map(|i| if signs >> i & 1 == 1 { -1.0 } else { 1.0 })
                    .collect();
                for b in -(m as i64)..=(m as i64) {
                    let a = Neuron::new(w.clone(), b as f64);
                    let kind = classify_neuron(&a).unwrap();
                    if kind.is_constant() {
                        continue;
                    }
                    let set = decompositions(&a, DEFAULT_BEAM_WIDTH, 4).unwrap();
                    let all_equal_alpha = set
                        .candidates
                        .iter()
                        .all(|t| table_key(&TreeAt { tree: t, arity: m }, m, 4) == table_key(&a, m, 4));
                    assert_eq!(kind.is_representable(), all_equal_alpha, "{a:?}");
                    if !kind.is_representable() {
                        assert!(set.candidates.len() >= 2, "{a:?}");
                    }
                }
            }
        }
    }

    fn all_sign_patterns(m: usize) -> Vec<Neuron> {
        let mut out = Vec::new();
        for signs in 0..(1u32 << m) {
            let w: Vec<f64> = (0..m)
                .map(|i| if signs >> i & 1 == 1 { -1.0 } else { 1.0 })
                .collect();
            for b in -(m as i64)..=(m as i64) {
                out.push(Neuron::new(w.clone(), b as f64));
            }
        }
        out
    }

    #[test]
    fn grouped_beam_is_lossless_when_wide() {
        for m in 3..=5 {
            for a in all_sign_patterns(m) {
                let ranking = EvalSet::grid(m, 2).unwrap();
                let fast = decompositions(&a, usize::MAX, 2).unwrap();
                let full = decompose(
                    &a,
                    &SearchOptions {
                        beam_width: usize::MAX,
                        hash_resolution: None,
                        ranking: &ranking,
                    },
                );
                let keys = |ts: &[NeuronTree]| -> BTreeSet<Vec<u32>> {
                    ts.iter()
                        .map(|t| table_key(&TreeAt { tree: t, arity: m }, m, 2))
                        .collect()
                };
                assert_eq!(keys(&fast.candidates), keys(&full.candidates), "{a:?}");
                assert_eq!(fast.candidates.len(), keys(&fast.candidates).len());
            }
        }
    }

    #[test]
    fn default_beam_exhausts_alternating_five_input_neuron() {
        let a = nr(&[-1.0, 1.0, -1.0, 1.0, -1.0], 0.0);
        for n in [1, 2, 4] {
            let narrow = decompositions(&a, DEFAULT_BEAM_WIDTH, n).unwrap();
            let wide = decompositions(&a, usize::MAX, n).unwrap();
            assert_eq!(narrow.candidates.len(), wide.candidates.len());
        }
        assert_eq!(decompositions(&a, usize::MAX, 2).unwrap().candidates.len(), 35);
    }
}
