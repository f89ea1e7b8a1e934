use luknet::data::{binarize, enrich_negative, Dataset, NominalTable};
use luknet::logic::{format_formula, parse_formula, Formula, TruthTable};
use luknet::network::{
    classify_neuron, compile_formula, compile_formula_with_arity, network_to_formula, Layer, Network, Neuron,
};
use luknet::rewrite::{best_approximation, decompositions, is_representable, lambda_similarity, EvalSet};
use luknet::train::{crisp_crystallize, lm_train, mse, obs_prune, TrainConfig};
use proptest::prelude::*;

fn formula(max_arity: usize, depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        8 => (0..max_arity).prop_map(Formula::Var),
        1 => Just(Formula::Const0),
        1 => Just(Formula::Const1),
    ];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::otimes(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::oplus(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::iff(a, b)),
        ]
    })
}

fn sign_neuron(k: usize) -> impl Strategy<Value = Neuron> {
    (
        proptest::collection::vec(prop::bool::ANY, k),
        -3i32..=(k as i32 + 1),
    )
        .prop_map(|(s, b)| {
            Neuron::new(
                s.into_iter().map(|p| if p { 1.0 } else { -1.0 }).collect(),
                b as f64,
            )
        })
}

fn point(m: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.0f64..=1.0, m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn subtable_entries_are_grid_values(f in formula(3, 4), n in 1u32..6) {
        let t = TruthTable::tabulate(&f, n).unwrap();
        for &v in t.values() {
            prop_assert!(((v * n as f64) - (v * n as f64).round()).abs() < 1e-12);
        }
    }

    #[test]
    fn expansion_preserves_semantics(f in formula(4, 4), xs in proptest::collection::vec(point(4), 5)) {
        let e = f.expand_derived();
        prop_assert!(e.is_primitive());
        for x in xs {
            prop_assert!((f.eval(&x).unwrap() - e.eval(&x).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn format_then_parse_is_identity(f in formula(5, 4)) {
        let text = format_formula(&f);
        prop_assert_eq!(parse_formula(&text).unwrap(), f, "{}", text);
    }

    #[test]
    fn compiled_network_matches_formula(f in formula(5, 4)) {
        let net = compile_formula(&f);
        prop_assert!(net.is_castro());
        let t = TruthTable::tabulate(&f, 2).unwrap();
        for (x, v) in t.rows() {
            prop_assert!((net.forward(&x).unwrap() - v).abs() < 1e-12);
        }
    }

    #[test]
    fn decompiled_formula_matches_network(f in formula(3, 4)) {
        let net = compile_formula(&f);
        let g = network_to_formula(&net).unwrap();
        let m = net.arity();
        let nt = net.truth_subtable(3).unwrap();
        let padded = luknet::logic::Padded { formula: &g, arity: m };
        let gt = TruthTable::tabulate(&padded, 3).unwrap();
        prop_assert!(nt.max_abs_diff(&gt).unwrap() < 1e-12);
    }

    #[test]
    fn positive_chains_are_monotone(
        ops in proptest::collection::vec(0usize..4, 1..4),
        x in point(4),
        bump in 0.0f64..=1.0,
        which in 0usize..4,
    ) {
        let mut f = Formula::var(0);
        for (i, op) in ops.iter().enumerate() {
            let v = Formula::var(i + 1);
            f = match op {
                0 => Formula::otimes(f, v),
                1 => Formula::oplus(f, v),
                2 => Formula::and(f, v),
                _ => Formula::or(f, v),
            };
        }
        let net = compile_formula_with_arity(&f, 4);
        let mut y = x.clone();
        y[which] = (y[which] + bump).min(1.0);
        prop_assert!(net.forward(&y).unwrap() >= net.forward(&x).unwrap() - 1e-12);
    }

    #[test]
    fn lambda_is_a_pseudometric(a in formula(3, 3), b in formula(3, 3), c in formula(3, 3)) {
        let set = EvalSet::grid(3, 2).unwrap();
        let [na, nb, nc] = [&a, &b, &c].map(|f| compile_formula_with_arity(f, 3));
        let l = |x: &luknet::CastroNetwork, y: &luknet::CastroNetwork| lambda_similarity(x, y, &set).unwrap();
        prop_assert_eq!(l(&na, &na), 0.0);
        prop_assert!((l(&na, &nb) - l(&nb, &na)).abs() < 1e-15);
        prop_assert!(l(&na, &nc) <= l(&na, &nb) + l(&nb, &nc) + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn decompositions_are_binary_castro(nr in (3usize..6).prop_flat_map(sign_neuron)) {
        let set = decompositions(&nr, 64, 2).unwrap();
        for t in &set.candidates {
            t.for_each_neuron(&mut |bias, inputs| {
                assert!(inputs.len() <= 2);
                assert!(bias.fract() == 0.0);
                assert!(inputs.iter().all(|(w, _)| w.abs() == 1.0));
                let local = Neuron::new(inputs.iter().map(|(w, _)| *w).collect(), bias);
                assert!(classify_neuron(&local).unwrap().is_representable());
            });
        }
    }

    #[test]
    fn representable_neurons_equal_their_decompositions(nr in sign_neuron(3)) {
        prop_assume!(is_representable(&nr).unwrap());
        let grid = EvalSet::grid(3, 4).unwrap();
        for t in decompositions(&nr, 64, 4).unwrap().candidates {
            prop_assert!(lambda_similarity(&nr, &t, &grid).unwrap() < 1e-12);
        }
    }

    #[test]
    fn wider_beams_never_hurt(nr in (4usize..6).prop_flat_map(sign_neuron)) {
        let set = EvalSet::grid(nr.fan_in(), 1).unwrap();
        let mut last = f64::INFINITY;
        for beam in [1, 4, 32] {
            let l = best_approximation(&nr, &set, beam).unwrap().lambda;
            prop_assert!(l <= last + 1e-12);
            last = l;
        }
    }

    #[test]
    fn lm_steps_decrease_error(f in formula(2, 3), params in proptest::collection::vec(-1.0f64..1.0, 13)) {
        let data = Dataset::from_table(&TruthTable::tabulate(&luknet::logic::Padded { formula: &f, arity: 2 }, 2).unwrap());
        let init = Network::from_matrices(
            2,
            vec![
                (vec![params[0..2].to_vec(), params[2..4].to_vec(), params[4..6].to_vec()], params[6..9].to_vec()),
                (vec![params[9..12].to_vec()], vec![params[12]]),
            ],
        )
        .unwrap();
        let cfg = TrainConfig { max_iterations: 40, ..TrainConfig::default() };
        let (net, state) = lm_train(&init, &data, &cfg).unwrap();
        for w in state.history.windows(2) {
            prop_assert!(w[1] < w[0]);
        }
        prop_assert!((mse(&net, &data).unwrap() - state.error / data.len() as f64).abs() < 1e-12);
    }

    #[test]
    fn pruning_respects_tolerance(
        ws in proptest::collection::vec(-1.4f64..1.4, 9),
        tol in prop_oneof![Just(0.0), 0.0f64..0.05],
        targets in proptest::collection::vec(0.0f64..=1.0, 9),
    ) {
        let net = Network::new(2, vec![
            Layer::from_matrix(vec![ws[0..2].to_vec(), ws[2..4].to_vec()], ws[4..6].to_vec()),
            Layer::from_matrix(vec![ws[6..8].to_vec()], vec![ws[8]]),
        ]).unwrap();
        let crisp = crisp_crystallize(&net);
        let grid = EvalSet::grid(2, 2).unwrap();
        let rows: Vec<Vec<f64>> = grid.points().map(<[f64]>::to_vec).collect();
        let data = Dataset::new(vec!["a".into(), "b".into()], rows, targets, luknet::data::Provenance::Raw).unwrap();
        let pruned = obs_prune(&crisp, &data, tol).unwrap();
        prop_assert!(mse(&pruned, &data).unwrap() <= mse(&crisp, &data).unwrap() + tol + 1e-12);
        prop_assert!(pruned.nonzero_weight_count() <= crisp.nonzero_weight_count());
    }

    #[test]
    fn encoded_features_take_expected_values(
        cells in proptest::collection::vec((0usize..4, 0usize..3, prop::bool::ANY), 1..30),
        factor in 0.05f64..0.95,
    ) {
        let mut csv = String::from("class,a,b\n");
        for (a, b, pos) in &cells {
            let a = if *a == 3 { "?".to_string() } else { format!("v{a}") };
            csv.push_str(&format!("{},{a},w{b}\n", if *pos { "e" } else { "p" }));
        }
        let t = NominalTable::read_csv(csv.as_bytes(), "class", "e").unwrap();
        let d = binarize(&t, true);
        prop_assert!(d.rows().iter().flatten().all(|&v| v == 0.0 || v == 1.0));
        let e = enrich_negative(&d, factor, 0.0).unwrap();
        prop_assert!(e.rows().iter().flatten().all(|&v| v == 0.0 || v == 1.0 || v == factor));
    }
}
