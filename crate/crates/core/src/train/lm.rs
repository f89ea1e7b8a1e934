use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::crystal::{representation_error, smooth_crystallize_value};
use super::jacobian::{check_arity, jacobian_and_residuals, residuals, sse};
use super::{TrainConfig, TrainError};
use crate::data::Dataset;
use crate::network::Network;

/// Increases of μ allowed within one iteration before training stalls.
pub const MAX_RETRIES: usize = 20;
const RIDGE: f64 = 1e-8;
const WEIGHT_BOUND: f64 = 1.5;
const MU_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    TargetReached,
    MaxIterations,
    Stalled,
}

/// Where a training run ended.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrainState {
    pub params: Vec<f64>,
    /// `F(w) = eᵀe`.
    pub error: f64,
    pub mu: f64,
    pub iterations: usize,
    pub stop: StopReason,
    /// `F` at the start and after every accepted step.
    pub history: Vec<f64>,
}

/// Solves `(A + μ·diag(A))·x = −g`, adding `εI` when the matrix is singular.
fn solve_step(a: &DMatrix<f64>, g: &DVector<f64>, mu: f64) -> Option<DVector<f64>> {
    let mut m = a.clone();
    for i in 0..m.nrows() {
        m[(i, i)] += mu * a[(i, i)];
    }
    let rhs = -g;
    if let Some(ch) = m.clone().cholesky() {
        return Some(ch.solve(&rhs));
    }
    for i in 0..m.nrows() {
        m[(i, i)] += RIDGE;
    }
    if let Some(ch) = m.clone().cholesky() {
        return Some(ch.solve(&rhs));
    }
    m.lu().solve(&rhs)
}

/// `Υₙ(w + Δw)` with weights clamped to `[-1.5, 1.5]`; `n = 0` skips `Υ`.
fn candidate(w: &[f64], step: &DVector<f64>, mask: &[bool], n: u32) -> Vec<f64> {
    w.iter()
        .zip(step.iter())
        .zip(mask)
        .map(|((&v, &d), &is_weight)| {
            let c = match n {
                0 => v + d,
                n => smooth_crystallize_value(v + d, n),
            };
            if is_weight {
                c.clamp(-WEIGHT_BOUND, WEIGHT_BOUND)
            } else {
                c
            }
        })
        .collect()
}

/// Levenberg-Marquardt with a smooth crystallization step `Υₙ` applied to
/// every candidate.
///
/// The crystallized candidate `Υₙ(w + Δw)` is accepted if it lowers `F`,
/// else the plain step `w + Δw` if that does; then `μ ← μ·β`. Otherwise
/// `μ ← μ/β` and the step is re-solved with the same Jacobian.
pub fn lm_train(
    net: &Network,
    data: &Dataset,
    cfg: &TrainConfig,
) -> Result<(Network, TrainState), TrainError> {
    cfg.validate()?;
    check_arity(net, data)?;
    let rows = data.len().max(1) as f64;
    let target_sse = cfg.target_mse * rows;
    let mask = net.weight_mask();
    let mut cur = net.clone();
    let mut w = cur.params();
    let mut f = sse(&residuals(&cur, data)?);
    let mut mu = cfg.mu0;
    let mut history = vec![f];
    let mut iterations = 0;
    let stop = loop {
        if f <= target_sse {
            break StopReason::TargetReached;
        }
        if iterations >= cfg.max_iterations {
            break StopReason::MaxIterations;
        }
        iterations += 1;
        let (j, e) = jacobian_and_residuals(&cur, data)?;
        let a = j.tr_mul(&j);
        let g = j.tr_mul(&e);
        let mut accepted = false;
        for _ in 0..=MAX_RETRIES {
            if let Some(step) = solve_step(&a, &g, mu) {
                for n in [cfg.crystallization_exponent, 0] {
                    let wc = candidate(&w, &step, &mask, n);
                    let next = cur.with_params(&wc);
                    let fc = sse(&residuals(&next, data)?);
                    if fc < f {
                        w = wc;
                        f = fc;
                        cur = next;
                        accepted = true;
                        break;
                    }
                }
            }
            if accepted {
                mu = (mu * cfg.beta).max(MU_FLOOR);
                break;
            }
            mu /= cfg.beta;
            if !mu.is_finite() {
                break;
            }
        }
        if !accepted {
            break StopReason::Stalled;
        }
        history.push(f);
        if cfg.progress {
            eprintln!(
                "{iterations}, {:.6e}, {mu:.3e}, {:.6}",
                f / rows,
                representation_error(&cur)
            );
        }
    };
    let state = TrainState {
        params: w,
        error: f,
        mu,
        iterations,
        stop,
        history,
    };
    Ok((cur, state))
}
