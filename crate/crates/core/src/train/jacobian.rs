use nalgebra::{DMatrix, DVector};

use super::TrainError;
use crate::data::Dataset;
use crate::network::Network;

/// Derivative of ψ, taken as 1 on the closed interval `[0, 1]`.
fn dpsi(z: f64) -> f64 {
    if (0.0..=1.0).contains(&z) {
        1.0
    } else {
        0.0
    }
}

pub(crate) fn check_arity(net: &Network, data: &Dataset) -> Result<(), TrainError> {
    if net.arity() != data.arity() {
        return Err(TrainError::ArityMismatch {
            expected: net.arity(),
            got: data.arity(),
        });
    }
    Ok(())
}

/// Residuals `output − target`, one per row.
pub fn residuals(net: &Network, data: &Dataset) -> Result<Vec<f64>, TrainError> {
    check_arity(net, data)?;
    Ok(data
        .rows()
        .iter()
        .zip(data.targets())
        .map(|(x, t)| net.forward_unchecked(x) - t)
        .collect())
}

/// Mean squared error over the rows; 0 for an empty dataset.
pub fn mse(net: &Network, data: &Dataset) -> Result<f64, TrainError> {
    let e = residuals(net, data)?;
    Ok(sse(&e) / e.len().max(1) as f64)
}

pub(crate) fn sse(e: &[f64]) -> f64 {
    e.iter().map(|v| v * v).sum()
}

/// Offset of each neuron's parameter block in [`Network::params`].
fn offsets(net: &Network) -> Vec<Vec<usize>> {
    let mut off = 0;
    net.layers()
        .iter()
        .map(|l| {
            l.neurons
                .iter()
                .map(|n| {
                    let o = off;
                    off += n.fan_in() + 1;
                    o
                })
                .collect()
        })
        .collect()
}

/// Writes `∂out/∂param` for input `x` into `row`; returns the output.
fn backprop_row(net: &Network, offs: &[Vec<usize>], x: &[f64], row: &mut [f64]) -> f64 {
    let tr = net.forward_trace(x);
    let depth = net.depth();
    let mut g = vec![dpsi(tr.pre[depth - 1][0])];
    for l in (0..depth).rev() {
        let layer = &net.layers()[l];
        let input = &tr.act[l];
        let mut back = vec![0.0; layer.fan_in()];
        for (j, nr) in layer.neurons.iter().enumerate() {
            let gj = g[j];
            if gj == 0.0 {
                continue;
            }
            let off = offs[l][j];
            for (i, (&a, &w)) in input.iter().zip(&nr.weights).enumerate() {
                row[off + i] = gj * a;
                back[i] += gj * w;
            }
            row[off + nr.fan_in()] = gj;
        }
        if l > 0 {
            for (b, &z) in back.iter_mut().zip(&tr.pre[l - 1]) {
                *b *= dpsi(z);
            }
        }
        g = back;
    }
    tr.output()
}

/// Jacobian of the outputs (equivalently of the residuals) with respect to
/// the parameters, together with the residuals.
pub fn jacobian_and_residuals(
    net: &Network,
    data: &Dataset,
) -> Result<(DMatrix<f64>, DVector<f64>), TrainError> {
    check_arity(net, data)?;
    let p = net.num_params();
    let offs = offsets(net);
    let mut buf = vec![0.0; data.len() * p];
    let mut e = Vec::with_capacity(data.len());
    for (k, (x, t)) in data.rows().iter().zip(data.targets()).enumerate() {
        let out = backprop_row(net, &offs, x, &mut buf[k * p..(k + 1) * p]);
        e.push(out - t);
    }
    Ok((DMatrix::from_row_slice(data.len(), p, &buf), DVector::from_vec(e)))
}

/// Rows are data rows, columns are parameters in [`Network::params`] order.
pub fn jacobian(net: &Network, data: &Dataset) -> Result<DMatrix<f64>, TrainError> {
    Ok(jacobian_and_residuals(net, data)?.0)
}
