use nalgebra::DMatrix;

use super::jacobian::{check_arity, jacobian_and_residuals, mse};
use super::TrainError;
use crate::data::Dataset;
use crate::network::Network;

const RIDGE: f64 = 1e-8;
const SLACK: f64 = 1e-12;

fn inverse(h: DMatrix<f64>) -> Option<DMatrix<f64>> {
    match h.clone().cholesky() {
        Some(ch) => Some(ch.inverse()),
        None => h.try_inverse(),
    }
}

/// Optimal Brain Surgeon pruning.
///
/// Weights are removed in order of saliency `w_q² / (2[H⁻¹]_qq)` with
/// `H = JᵀJ + εI`, each removal followed by the compensating update
/// `δw = −(w_q/[H⁻¹]_qq)·H⁻¹e_q`. A removal is kept only while the mse stays
/// within `tolerance` of the input network's. Zero weights count as pruned
/// and are never revived; biases are adjusted but not pruned.
pub fn obs_prune(net: &Network, data: &Dataset, tolerance: f64) -> Result<Network, TrainError> {
    check_arity(net, data)?;
    let base = mse(net, data)?;
    let limit = base + tolerance + SLACK;
    let mask = net.weight_mask();
    let mut w = net.params();
    let mut cur = net.clone();
    loop {
        let active: Vec<usize> = (0..w.len()).filter(|&i| !mask[i] || w[i] != 0.0).collect();
        let (j, _) = jacobian_and_residuals(&cur, data)?;
        let ja = j.select_columns(&active);
        let mut h = ja.tr_mul(&ja);
        for i in 0..h.nrows() {
            h[(i, i)] += RIDGE;
        }
        let Some(hinv) = inverse(h) else { break };
        let mut order: Vec<(f64, usize)> = active
            .iter()
            .enumerate()
            .filter(|&(_, &q)| mask[q])
            .map(|(a, &q)| (w[q] * w[q] / (2.0 * hinv[(a, a)]), a))
            .collect();
        if order.is_empty() {
            break;
        }
        order.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        let mut pruned = false;
        for &(_, a) in &order {
            let q = active[a];
            let scale = w[q] / hinv[(a, a)];
            let mut next = w.clone();
            for (b, &i) in active.iter().enumerate() {
                next[i] -= scale * hinv[(b, a)];
            }
            next[q] = 0.0;
            let cand = cur.with_params(&next);
            if mse(&cand, data)? <= limit {
                w = next;
                cur = cand;
                pruned = true;
                break;
            }
        }
        if !pruned {
            break;
        }
    }
    debug_assert!(mse(&cur, data)? <= limit);
    Ok(cur)
}
