use super::net::CastroNetwork;
use super::tree::NeuronTree;
use crate::logic::Formula;

fn neuron(bias: f64, inputs: Vec<(f64, NeuronTree)>) -> NeuronTree {
    NeuronTree::node(bias, inputs)
}

/// The neuron tree of `f`, one atom per connective.
///
/// ⊗, ⊕, ⇒ and ¬ are single neurons; ∧, ∨ and ⇔ are built from their
/// definitions `x ⊗ (x ⇒ y)`, `(x ⇒ y) ⇒ y` and `(x ⇒ y) ⊗ (y ⇒ x)`.
pub fn formula_tree(f: &Formula) -> NeuronTree {
    match f {
        Formula::Var(i) => NeuronTree::Input(*i),
        Formula::Const0 => neuron(0.0, vec![]),
        Formula::Const1 => neuron(1.0, vec![]),
        Formula::Not(a) => neuron(1.0, vec![(-1.0, formula_tree(a))]),
        Formula::Otimes(a, b) => neuron(-1.0, vec![(1.0, formula_tree(a)), (1.0, formula_tree(b))]),
        Formula::Oplus(a, b) => neuron(0.0, vec![(1.0, formula_tree(a)), (1.0, formula_tree(b))]),
        Formula::Implies(a, b) => neuron(1.0, vec![(-1.0, formula_tree(a)), (1.0, formula_tree(b))]),
        Formula::And(a, b) => {
            let (ta, tb) = (formula_tree(a), formula_tree(b));
            neuron(
                -1.0,
                vec![(1.0, ta.clone()), (1.0, neuron(1.0, vec![(-1.0, ta), (1.0, tb)]))],
            )
        }
        Formula::Or(a, b) => {
            let (ta, tb) = (formula_tree(a), formula_tree(b));
            neuron(
                1.0,
                vec![
                    (-1.0, neuron(1.0, vec![(-1.0, ta), (1.0, tb.clone())])),
                    (1.0, tb),
                ],
            )
        }
        Formula::Iff(a, b) => {
            let (ta, tb) = (formula_tree(a), formula_tree(b));
            neuron(
                -1.0,
                vec![
                    (1.0, neuron(1.0, vec![(-1.0, ta.clone()), (1.0, tb.clone())])),
                    (1.0, neuron(1.0, vec![(-1.0, tb), (1.0, ta)])),
                ],
            )
        }
    }
}

/// Compiles `f` into a binary Castro network over its own arity.
pub fn compile_formula(f: &Formula) -> CastroNetwork {
    compile_formula_with_arity(f, f.arity())
}

/// Compiles `f` over `arity >= f.arity()` inputs.
pub fn compile_formula_with_arity(f: &Formula, arity: usize) -> CastroNetwork {
    let net = formula_tree(f).to_network(arity.max(f.arity()));
    CastroNetwork::try_from(net).expect("compiled neurons are Castro neurons")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula, truth_subtable, TruthTable};
    use crate::network::Neuron;

    fn compiled_table(text: &str, n: u32) -> (TruthTable, TruthTable) {
        let f = parse_formula(text).unwrap();
        let net = compile_formula(&f);
        (truth_subtable(&f, n).unwrap(), net.truth_subtable(n).unwrap())
    }

    #[test]
    fn atoms() {
        let net = compile_formula(&parse_formula("x0 * x1").unwrap());
        assert_eq!(net.widths(), vec![1]);
        assert_eq!(net.neuron(0, 0), &Neuron::new(vec![1.0, 1.0], -1.0));
        let net = compile_formula(&parse_formula("x0 -> x1").unwrap());
        assert_eq!(net.neuron(0, 0), &Neuron::new(vec![-1.0, 1.0], 1.0));
    }

    #[test]
    fn matrix_example() {
        let f = parse_formula("((x0 * x1) -> x2) + (x2 -> x3)").unwrap();
        let net = compile_formula(&f);
        let expected = crate::network::Network::from_matrices(
            4,
            vec![
                (
                    vec![
                        vec![1.0, 1.0, 0.0, 0.0],
                        vec![0.0, 0.0, 1.0, 0.0],
                        vec![0.0, 0.0, -1.0, 1.0],
                    ],
                    vec![-1.0, 0.0, 1.0],
                ),
                (vec![vec![-1.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]], vec![1.0, 0.0]),
                (vec![vec![1.0, 1.0]], vec![0.0]),
            ],
        )
        .unwrap();
        assert_eq!(net.as_network(), &expected);
    }

    #[test]
    fn derived_connectives() {
        for text in [
            "x0 & x1",
            "x0 | x1",
            "x0 <-> x1",
            "!(x0 & !x1) | x2",
            "1",
            "0 + x1",
        ] {
            let (a, b) = compiled_table(text, 4);
            assert_eq!(a.max_abs_diff(&b), Some(0.0), "{text}");
            assert!(compile_formula(&parse_formula(text).unwrap()).is_binary());
        }
    }

    #[test]
    fn same_table_as_formula() {
        let (a, b) = compiled_table("x0 * x1", 2);
        assert_eq!(a, b);
    }
}
