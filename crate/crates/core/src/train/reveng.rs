use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::crystal::crisp_crystallize;
use super::jacobian::{jacobian, mse};
use super::lm::{lm_train, StopReason};
use super::obs::obs_prune;
use super::{TrainConfig, TrainError};
use crate::data::Dataset;
use crate::network::{CastroNetwork, Layer, Network};
use crate::rewrite::{extract_with_approximation, EvalSet, ExtractionReport};

/// Initial draws per restart while the output is saturated on every row.
const MAX_REDRAWS: usize = 100;

/// Layer widths `(h, ⌈h/2⌉, 1)` with `h = 2 + k` for the `k`-th topology.
pub fn topology_schedule(k: usize) -> Vec<usize> {
    let h = 2 + k;
    vec![h, h.div_ceil(2), 1]
}

/// A network of the given widths with every parameter uniform in `[-1, 1]`.
pub fn random_network(arity: usize, widths: &[usize], rng: &mut impl Rng) -> Network {
    let mut fan_in = arity;
    let layers = widths
        .iter()
        .map(|&w| {
            let weights = (0..w)
                .map(|_| (0..fan_in).map(|_| rng.gen_range(-1.0..=1.0)).collect())
                .collect();
            let bias = (0..w).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            fan_in = w;
            Layer::from_matrix(weights, bias)
        })
        .collect();
    Network::new(arity, layers).expect("widths are consistent")
}

/// The random stream of one restart.
pub fn restart_rng(seed: u64, topology: usize, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((topology as u64) << 32) | restart as u64);
    rng
}

/// One training run of the search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Attempt {
    pub topology: usize,
    pub widths: Vec<usize>,
    pub restart: usize,
    pub iterations: usize,
    pub stop: StopReason,
    pub trained_mse: f64,
    pub crystallized_mse: f64,
    pub accepted: bool,
}

/// Result of [`reverse_engineer`].
#[derive(Clone, Debug)]
pub struct RevEngOutcome {
    pub network: CastroNetwork,
    /// Recomputed from `network` on the training data.
    pub mse: f64,
    pub report: ExtractionReport,
    pub attempts: Vec<Attempt>,
    pub converged: bool,
}

struct RestartResult {
    attempt: Attempt,
    network: CastroNetwork,
}

fn run_restart(
    data: &Dataset,
    cfg: &TrainConfig,
    topology: usize,
    restart: usize,
) -> Result<RestartResult, TrainError> {
    let widths = topology_schedule(topology);
    let mut rng = restart_rng(cfg.rng_seed, topology, restart);
    let mut init = random_network(data.arity(), &widths, &mut rng);
    for _ in 0..MAX_REDRAWS {
        if jacobian(&init, data)?.iter().any(|&v| v != 0.0) {
            break;
        }
        init = random_network(data.arity(), &widths, &mut rng);
    }
    let (trained, state) = lm_train(&init, data, cfg)?;
    let trained_mse = mse(&trained, data)?;
    let crisp = crisp_crystallize(&trained);
    let crisp_mse = mse(&crisp, data)?;
    let accepted =
        crisp_mse <= cfg.target_mse && crisp_mse <= cfg.degradation_factor * trained_mse.max(f64::EPSILON);
    let network = if accepted {
        let pruned = crisp_crystallize(&obs_prune(&crisp, data, cfg.prune_tolerance)?);
        let pruned_mse = mse(&pruned, data)?;
        if pruned_mse <= cfg.target_mse && pruned_mse <= crisp_mse + cfg.prune_tolerance {
            pruned
        } else {
            crisp
        }
    } else {
        crisp
    };
    Ok(RestartResult {
        attempt: Attempt {
            topology,
            widths,
            restart,
            iterations: state.iterations,
            stop: state.stop,
            trained_mse,
            crystallized_mse: crisp_mse,
            accepted,
        },
        network,
    })
}

/// Searches topologies and seeded restarts for a Castro network that fits
/// `data`, then reads it back as a formula.
///
/// Each trained network is crisply crystallized and discarded if that costs
/// too much accuracy; the first accepted one, in (topology, restart) order,
/// is pruned and extracted, with unrepresentable neurons approximated on
/// the activations the training rows induce. When nothing is accepted the crystallized
/// network with the lowest mse is returned with `converged = false`.
pub fn reverse_engineer(data: &Dataset, cfg: &TrainConfig) -> Result<RevEngOutcome, TrainError> {
    cfg.validate()?;
    if data.is_empty() {
        return Err(TrainError::EmptyData);
    }
    let restarts = cfg.restarts_for(data.arity());
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| TrainError::Config(e.to_string()))?;
    let mut attempts = Vec::new();
    let mut best: Option<(f64, CastroNetwork)> = None;
    let mut chosen = None;
    for topology in cfg.first_topology..cfg.first_topology + cfg.max_topologies {
        let results: Vec<RestartResult> = if cfg.jobs == 1 {
            let mut out = Vec::new();
            for r in 0..restarts {
                let res = run_restart(data, cfg, topology, r)?;
                let done = res.attempt.accepted;
                out.push(res);
                if done {
                    break;
                }
            }
            out
        } else {
            pool.install(|| {
                (0..restarts)
                    .into_par_iter()
                    .map(|r| run_restart(data, cfg, topology, r))
                    .collect::<Result<_, _>>()
            })?
        };
        for res in results {
            let accepted = res.attempt.accepted;
            let m = res.attempt.crystallized_mse;
            attempts.push(res.attempt);
            if accepted {
                chosen = Some(res.network);
                break;
            }
            if best.as_ref().map_or(true, |(b, _)| m < *b) {
                best = Some((m, res.network));
            }
        }
        if chosen.is_some() {
            break;
        }
    }
    let converged = chosen.is_some();
    let network = match chosen {
        Some(n) => n,
        None => best.expect("at least one attempt").1,
    };
    let set = EvalSet::rows(data.arity(), data.rows())?;
    let report = pool.install(|| extract_with_approximation(&network, &set, data.names(), cfg.beam_width))?;
    Ok(RevEngOutcome {
        mse: mse(&network, data)?,
        network,
        report,
        attempts,
        converged,
    })
}
