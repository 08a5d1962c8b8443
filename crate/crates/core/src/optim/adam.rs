use serde::{Deserialize, Serialize};

use crate::error::{QgaaError, Result};

/// Moment estimates and hyperparameters of one Adam optimizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub step: u64,
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl AdamState {
    pub fn new(dim: usize, lr: f64) -> Self {
        Self { step: 0, m: vec![0.0; dim], v: vec![0.0; dim], lr, beta1: 0.9, beta2: 0.999, eps: 1e-8 }
    }

    /// In-place bias-corrected update of `params`.
    pub fn update(&mut self, grad: &[f64], params: &mut [f64]) -> Result<()> {
        let dim = self.m.len();
        if grad.len() != dim || params.len() != dim {
            return Err(QgaaError::DimensionMismatch { expected: dim, got: grad.len().max(params.len()) });
        }
        if grad.iter().any(|g| !g.is_finite()) {
            return Err(QgaaError::NanObjective { evaluations: self.step as usize });
        }
        if self.lr.is_nan() || self.lr <= 0.0 {
            return Err(QgaaError::Config(format!("learning rate must be positive, got {}", self.lr)));
        }
        self.step += 1;
        let t = self.step as i32;
        let c1 = 1.0 - self.beta1.powi(t);
        let c2 = 1.0 - self.beta2.powi(t);
        for i in 0..dim {
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * grad[i];
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * grad[i] * grad[i];
            let mh = self.m[i] / c1;
            let vh = self.v[i] / c2;
            params[i] -= self.lr * mh / (vh.sqrt() + self.eps);
        }
        Ok(())
    }
}

/// Functional form of [`AdamState::update`].
pub fn adam_step(state: &AdamState, grad: &[f64], params: &[f64]) -> Result<(AdamState, Vec<f64>)> {
    let mut s = state.clone();
    let mut p = params.to_vec();
    s.update(grad, &mut p)?;
    Ok((s, p))
}
