use std::f64::consts::FRAC_PI_2;

use crate::network::{CastroNetwork, Network};

/// One step of smooth crystallization,
/// `Υₙ(w) = sign(w)·(cos((1 − frac|w|)·π/2)ⁿ + ⌊|w|⌋)`.
///
/// Integers are fixed points, half-integers are unstable fixed points for
/// `n = 2`, and every interval `[k, k+1]` maps into itself.
pub fn smooth_crystallize_value(w: f64, n: u32) -> f64 {
    if w == 0.0 {
        return 0.0;
    }
    let a = w.abs();
    let fl = a.floor();
    let frac = a - fl;
    let v = ((1.0 - frac) * FRAC_PI_2).cos().powi(n as i32) + fl;
    // cos(π/2) is not exactly zero in floating point
    let v = if frac == 0.0 { fl } else { v.min(fl + 1.0) };
    w.signum() * v
}

/// Applies [`smooth_crystallize_value`] to every weight and bias.
pub fn smooth_crystallize_network(net: &Network, n: u32) -> Network {
    net.map_params(|v, _| smooth_crystallize_value(v, n))
}

fn distance_to_integer(v: f64) -> f64 {
    (v - v.round()).abs()
}

/// Total distance of all weights and biases from their nearest integers.
pub fn representation_error(net: &Network) -> f64 {
    net.params().iter().map(|&v| distance_to_integer(v)).sum()
}

/// Rounds to the nearest integer, halves toward zero.
pub fn round_half_toward_zero(v: f64) -> f64 {
    let t = v.trunc();
    if (v - t).abs() == 0.5 {
        t
    } else {
        v.round()
    }
}

/// Rounds weights into `{-1, 0, 1}` and biases to integers, ties toward 0.
pub fn crisp_crystallize(net: &Network) -> CastroNetwork {
    let rounded = net.map_params(|v, is_weight| {
        let r = round_half_toward_zero(v);
        if is_weight {
            r.clamp(-1.0, 1.0)
        } else {
            r
        }
    });
    CastroNetwork::try_from(rounded).expect("rounded parameters are Castro")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{Layer, Neuron};
    use proptest::prelude::*;

    fn single(weights: Vec<f64>, bias: f64) -> Network {
        let m = weights.len();
        Network::new(m, vec![Layer::new(vec![Neuron::new(weights, bias)])]).unwrap()
    }

    #[test]
    fn upsilon_values() {
        assert_eq!(smooth_crystallize_value(1.0, 2), 1.0);
        assert_eq!(smooth_crystallize_value(-3.0, 2), -3.0);
        let s = (std::f64::consts::PI / 8.0).sin();
        assert!((smooth_crystallize_value(0.25, 2) - s * s).abs() < 1e-15);
        assert!((smooth_crystallize_value(-0.9, 2) + 0.975_528_258_147_576_7).abs() < 1e-12);
        assert!((smooth_crystallize_value(0.5, 2) - 0.5).abs() < 1e-15);
        assert!((smooth_crystallize_value(1.5, 2) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn castro_networks_are_fixed_points() {
        let net = single(vec![1.0, -1.0, 0.0], 2.0);
        assert_eq!(smooth_crystallize_network(&net, 2), net);
        assert_eq!(representation_error(&net), 0.0);
        assert_eq!(crisp_crystallize(&net).as_network(), &net);
    }

    #[test]
    fn representation_error_examples() {
        assert_eq!(representation_error(&single(vec![0.5, -0.25], 0.0)), 0.75);
        assert!((representation_error(&single(vec![0.9], 0.0)) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn crisp_examples() {
        let c = crisp_crystallize(&single(vec![0.98, -0.03], -0.96));
        assert_eq!(c.as_network(), &single(vec![1.0, 0.0], -1.0));
        let c = crisp_crystallize(&single(vec![0.5, -0.5, 1.4], 1.5));
        assert_eq!(c.as_network(), &single(vec![0.0, 0.0, 1.0], 1.0));
        let c = crisp_crystallize(&single(vec![1.5, -1.6], -2.5));
        assert_eq!(c.as_network(), &single(vec![1.0, -1.0], -2.0));
    }

    #[test]
    fn iteration_converges_to_integers() {
        for k in 1..2000 {
            let w0 = -1.0 + k as f64 * 0.001;
            let frac = w0.abs() - w0.abs().floor();
            if (frac - 0.5).abs() < 1e-9 || frac < 1e-12 || frac > 1.0 - 1e-12 {
                continue;
            }
            let mut w = w0;
            for _ in 0..200 {
                w = smooth_crystallize_value(w, 2);
            }
            assert!((w - w.round()).abs() < 1e-9, "{w0} -> {w}");
        }
    }

    #[test]
    fn distance_never_grows_on_grid() {
        for k in -1000..=1000 {
            let w = k as f64 * 0.001;
            let u = smooth_crystallize_value(w, 2);
            assert!(distance_to_integer(u) <= distance_to_integer(w) + 1e-15, "{w}");
            let lo = w.floor();
            assert!(u >= lo - 1e-15 && u <= lo + 1.0 + 1e-15, "{w}");
        }
    }

    proptest! {
        #[test]
        fn upsilon_is_odd(w in -3.0f64..3.0, n in 1u32..5) {
            prop_assert_eq!(smooth_crystallize_value(-w, n), -smooth_crystallize_value(w, n));
        }

        #[test]
        fn upsilon_preserves_unit_intervals(w in -3.0f64..3.0, n in 1u32..5) {
            let u = smooth_crystallize_value(w, n);
            let (lo, hi) = if w >= 0.0 { (w.floor(), w.floor() + 1.0) } else { (w.ceil() - 1.0, w.ceil()) };
            prop_assert!(u >= lo && u <= hi);
        }

        #[test]
        fn crisp_has_zero_representation_error(
            ws in proptest::collection::vec(-1.2f64..1.2, 6),
            bs in proptest::collection::vec(-3.0f64..3.0, 3),
        ) {
            let l0 = Layer::from_matrix(vec![ws[0..2].to_vec(), ws[2..4].to_vec()], bs[0..2].to_vec());
            let l1 = Layer::from_matrix(vec![ws[4..6].to_vec()], vec![bs[2]]);
            let net = Network::new(2, vec![l0, l1]).unwrap();
            prop_assert_eq!(representation_error(crisp_crystallize(&net).as_network()), 0.0);
        }
    }
}
