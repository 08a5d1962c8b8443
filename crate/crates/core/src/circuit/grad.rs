use std::f64::consts::PI;

use rayon::prelude::*;

use super::circuit::ParamCircuit;
use crate::error::{QgaaError, Result};

/// Parameter-shift gradient of `loss` with respect to the slots of `c`.
///
/// For a slot bound as `s·θ + b`, the loss is `a + b·cos(sθ) + c·sin(sθ)`, so
/// `∂L/∂θ = s·[L(θ + π/2s) − L(θ − π/2s)]/2` exactly. Slots that drive no
/// gate get zero.
pub fn param_shift_grad<F>(loss: F, c: &ParamCircuit, params: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    try_param_shift_grad(|p| Ok(loss(p)), c, params)
}

pub fn try_param_shift_grad<F>(loss: F, c: &ParamCircuit, params: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    if params.len() != c.n_params() {
        return Err(QgaaError::ParamLength { expected: c.n_params(), got: params.len() });
    }
    shift_gradient(loss, &c.slot_scales()?, params)
}

/// Shift-rule gradient given the per-slot angle scales directly. Used when
/// the loss spans several circuits whose slot vectors are concatenated.
pub fn shift_gradient<F>(loss: F, scales: &[f64], params: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    if scales.len() != params.len() {
        return Err(QgaaError::ParamLength { expected: scales.len(), got: params.len() });
    }
    let jobs: Vec<(usize, f64)> = scales
        .iter()
        .enumerate()
        .filter(|(_, s)| **s != 0.0)
        .flat_map(|(j, s)| {
            let h = PI / (2.0 * s);
            [(j, h), (j, -h)]
        })
        .collect();
    // evaluated in parallel, reduced in a fixed order
    let values: Vec<f64> = jobs
        .par_iter()
        .map(|&(j, h)| {
            let mut p = params.to_vec();
            p[j] += h;
            loss(&p)
        })
        .collect::<Result<_>>()?;
    if values.iter().any(|v| v.is_nan()) {
        return Err(QgaaError::NanObjective { evaluations: values.len() });
    }
    let mut grad = vec![0.0; params.len()];
    for (pair, vals) in jobs.chunks(2).zip(values.chunks(2)) {
        let j = pair[0].0;
        grad[j] = scales[j] * (vals[0] - vals[1]) / 2.0;
    }
    Ok(grad)
}
