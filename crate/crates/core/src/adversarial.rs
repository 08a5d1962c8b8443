//! Label-conditioned quantum GAN over latent states.
//!
//! The discriminator reads its verdict off a probe wire appended after the
//! `l` input wires: `P(real) = (1 + ⟨Z_probe⟩)/2`. Every loss here is linear
//! in the probe probabilities, so `T̂ + F̂ = I` holds by construction.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{build_conditioned, shift_gradient, AnsatzSpec, LabelEncoding, ParamCircuit};
use crate::ensemble::{Label, LabeledEnsemble};
use crate::error::{QgaaError, Result};
use crate::linalg::{eig_hermitian, tensor_product, DensityMatrix, StateVector};
use crate::metrics::fidelity_pure;
use crate::optim::{scheduled, AdamState, ScheduleConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub ansatz: AnsatzSpec,
    pub theta: Vec<f64>,
}

impl GeneratorSpec {
    pub fn new(ansatz: AnsatzSpec, theta: Vec<f64>) -> Result<Self> {
        let want = ansatz.param_count()?;
        if theta.len() != want {
            return Err(QgaaError::ParamLength { expected: want, got: theta.len() });
        }
        Ok(Self { ansatz, theta })
    }

    pub fn latent_qubits(&self) -> usize {
        self.ansatz.n_qubits
    }

    pub fn label_arity(&self) -> usize {
        self.ansatz.label_arity()
    }

    pub fn circuit(&self, label: &[f64]) -> Result<ParamCircuit> {
        build_conditioned(&self.ansatz, label)
    }

    pub fn generate_state_with(&self, theta: &[f64], label: &[f64]) -> Result<StateVector> {
        self.circuit(label)?.apply_to_state(theta, &StateVector::zero(self.latent_qubits()))
    }

    /// `|ν_K⟩ = U_g(K, θ_g)|0…0⟩`
    pub fn generate_state(&self, label: &[f64]) -> Result<StateVector> {
        self.generate_state_with(&self.theta, label)
    }

    pub fn generate(&self, label: &[f64]) -> Result<DensityMatrix> {
        Ok(self.generate_state(label)?.to_density())
    }
}

pub fn generate(g: &GeneratorSpec, label: &[f64]) -> Result<DensityMatrix> {
    g.generate(label)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscriminatorSpec {
    pub input_qubits: usize,
    /// Processing body over `input_qubits + 1` wires; the last is the probe.
    pub ansatz: AnsatzSpec,
    /// Extra trainable label block ahead of the body.
    #[serde(default)]
    pub label_encoding: LabelEncoding,
    /// Label-encoding slots first, then the body's.
    pub theta: Vec<f64>,
}

impl DiscriminatorSpec {
    pub fn new(input_qubits: usize, ansatz: AnsatzSpec, label_encoding: LabelEncoding, theta: Vec<f64>) -> Result<Self> {
        let d = Self { input_qubits, ansatz, label_encoding, theta };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ansatz.n_qubits != self.input_qubits + 1 {
            return Err(QgaaError::Config(format!(
                "discriminator body needs {} wires, got {}",
                self.input_qubits + 1,
                self.ansatz.n_qubits
            )));
        }
        let (a, b) = (self.label_encoding.label_arity(), self.ansatz.label_arity());
        if a != 0 && b != 0 && a != b {
            return Err(QgaaError::Config(format!("label block and body disagree on label arity ({a} vs {b})")));
        }
        let want = self.param_count()?;
        if self.theta.len() != want {
            return Err(QgaaError::ParamLength { expected: want, got: self.theta.len() });
        }
        Ok(())
    }

    pub fn param_count(&self) -> Result<usize> {
        Ok(self.label_encoding.param_count(self.input_qubits) + self.ansatz.param_count()?)
    }

    /// Label components consumed; 0 for a label-blind discriminator.
    pub fn label_arity(&self) -> usize {
        self.label_encoding.label_arity().max(self.ansatz.label_arity())
    }

    /// Label block on the input wires, then the body.
    pub fn circuit(&self, label: &[f64]) -> Result<ParamCircuit> {
        let n = self.input_qubits + 1;
        let pick = |arity: usize| if arity == 0 { &[][..] } else { label };
        let enc = self.label_encoding.build(n, self.input_qubits, pick(self.label_encoding.label_arity()))?;
        let body = build_conditioned(&self.ansatz, pick(self.ansatz.label_arity()))?;
        let mut c = ParamCircuit::new(n, enc.n_params() + body.n_params());
        c.append(&enc, 0, 0)?;
        c.append(&body, enc.n_params(), 0)?;
        Ok(c)
    }

    pub fn prob_real(&self, label: &[f64], state: &DensityMatrix) -> Result<f64> {
        probe_prob_real(&self.circuit(label)?, &self.theta, state)
    }

    pub fn prob_real_pure(&self, label: &[f64], psi: &StateVector) -> Result<f64> {
        probe_prob_real_pure(&self.circuit(label)?, &self.theta, psi)
    }
}

/// Probability that the probe (last wire) reads `|0⟩` after `c` acts on
/// `state ⊗ |0⟩⟨0|`.
pub fn probe_prob_real(c: &ParamCircuit, params: &[f64], state: &DensityMatrix) -> Result<f64> {
    if state.n_qubits() + 1 != c.n_qubits() {
        return Err(QgaaError::DimensionMismatch { expected: c.n_qubits() - 1, got: state.n_qubits() });
    }
    let out = c.apply_to_density(params, &tensor_product(state, &DensityMatrix::zero(1)))?;
    let m = out.matrix();
    Ok((0..out.dim()).step_by(2).map(|i| m[(i, i)].re).sum::<f64>().clamp(0.0, 1.0))
}

pub fn probe_prob_real_pure(c: &ParamCircuit, params: &[f64], psi: &StateVector) -> Result<f64> {
    if psi.n_qubits() + 1 != c.n_qubits() {
        return Err(QgaaError::DimensionMismatch { expected: c.n_qubits() - 1, got: psi.n_qubits() });
    }
    let out = c.apply_to_state(params, &tensor_product(psi, &StateVector::zero(1)))?;
    Ok(out.amplitudes().iter().step_by(2).map(|a| a.norm_sqr()).sum::<f64>().clamp(0.0, 1.0))
}

/// Weighted pure components of a real entry. The probe probability is linear
/// in the state, so `P(real|ρ) = Σ wᵢ P(real|vᵢ)` over the eigenpairs of `ρ`;
/// simulating the few vectors is cheaper than propagating the full matrix.
fn real_components(e: &crate::ensemble::EnsembleEntry) -> Result<Vec<(f64, StateVector)>> {
    if let Some(psi) = &e.pure {
        return Ok(vec![(1.0, psi.clone())]);
    }
    let eig = eig_hermitian(e.rho.matrix())?;
    let mut out = Vec::new();
    for (k, &w) in eig.values.iter().enumerate() {
        if w.abs() > 1e-15 {
            out.push((w, StateVector::new(eig.vector(k))?));
        }
    }
    Ok(out)
}

fn prob_real_mixture(c: &ParamCircuit, params: &[f64], parts: &[(f64, StateVector)]) -> Result<f64> {
    let mut p = 0.0;
    for (w, v) in parts {
        p += w * probe_prob_real_pure(c, params, v)?;
    }
    Ok(p.clamp(0.0, 1.0))
}

pub fn discriminator_prob_real(d: &DiscriminatorSpec, label: &[f64], state: &DensityMatrix) -> Result<f64> {
    d.prob_real(label, state)
}

/// `½[1 + P(real|η_K) − P(real|ν_K)]`
pub fn per_label_loss(d: &DiscriminatorSpec, g: &GeneratorSpec, eta: &DensityMatrix, label: &[f64]) -> Result<f64> {
    let c = d.circuit(label)?;
    let p_real = probe_prob_real(&c, &d.theta, eta)?;
    let p_fake = probe_prob_real_pure(&c, &d.theta, &g.generate_state(label)?)?;
    Ok(0.5 * (1.0 + p_real - p_fake))
}

/// Mean of [`per_label_loss`] over every entry of `real`.
pub fn qgan_loss(d: &DiscriminatorSpec, g: &GeneratorSpec, real: &LabeledEnsemble) -> Result<f64> {
    Ok(evaluate(d, g, real)?.loss)
}

/// Loss and its ingredients at the current parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameSnapshot {
    pub loss: f64,
    pub p_real: f64,
    pub p_fake: f64,
    /// Mean `⟨ν_K|η_K|ν_K⟩`; the Bloch overlap for one-qubit pure states.
    pub mean_fidelity: f64,
}

pub fn evaluate(d: &DiscriminatorSpec, g: &GeneratorSpec, real: &LabeledEnsemble) -> Result<GameSnapshot> {
    check_shapes(d, g, real)?;
    let rows: Vec<(f64, f64, f64)> = real
        .entries()
        .par_iter()
        .map(|e| {
            let c = d.circuit(&e.label)?;
            let nu = g.generate_state(&e.label)?;
            let pr = prob_real_mixture(&c, &d.theta, &real_components(e)?)?;
            Ok((pr, probe_prob_real_pure(&c, &d.theta, &nu)?, fidelity_pure(&nu, &e.rho)?))
        })
        .collect::<Result<_>>()?;
    let k = rows.len() as f64;
    let p_real = rows.iter().map(|r| r.0).sum::<f64>() / k;
    let p_fake = rows.iter().map(|r| r.1).sum::<f64>() / k;
    Ok(GameSnapshot {
        loss: 0.5 * (1.0 + p_real - p_fake),
        p_real,
        p_fake,
        mean_fidelity: rows.iter().map(|r| r.2).sum::<f64>() / k,
    })
}

fn check_shapes(d: &DiscriminatorSpec, g: &GeneratorSpec, real: &LabeledEnsemble) -> Result<()> {
    if real.is_empty() {
        return Err(QgaaError::EmptyEnsemble);
    }
    d.validate()?;
    for (want, got) in [(d.input_qubits, real.n_qubits()), (d.input_qubits, g.latent_qubits())] {
        if want != got {
            return Err(QgaaError::DimensionMismatch { expected: want, got });
        }
    }
    Ok(())
}

/// `∂L_QGAN/∂θ_d` by parameter shift, label by label.
pub fn discriminator_gradient(d: &DiscriminatorSpec, g: &GeneratorSpec, real: &LabeledEnsemble) -> Result<Vec<f64>> {
    check_shapes(d, g, real)?;
    let mut total = vec![0.0; d.theta.len()];
    for e in real.iter() {
        let c = d.circuit(&e.label)?;
        let nu = g.generate_state(&e.label)?;
        let parts = real_components(e)?;
        let loss = |p: &[f64]| -> Result<f64> {
            Ok(0.5 * (1.0 + prob_real_mixture(&c, p, &parts)? - probe_prob_real_pure(&c, p, &nu)?))
        };
        let grad = shift_gradient(loss, &c.slot_scales()?, &d.theta)?;
        total.iter_mut().zip(grad).for_each(|(t, v)| *t += v);
    }
    let k = real.len() as f64;
    Ok(total.into_iter().map(|v| v / k).collect())
}

/// `∂L_QGAN/∂θ_g` by parameter shift; only the fake term depends on `θ_g`.
pub fn generator_gradient(d: &DiscriminatorSpec, g: &GeneratorSpec, real: &LabeledEnsemble) -> Result<Vec<f64>> {
    check_shapes(d, g, real)?;
    let mut total = vec![0.0; g.theta.len()];
    for e in real.iter() {
        let dc = d.circuit(&e.label)?;
        let gc = g.circuit(&e.label)?;
        let zero = StateVector::zero(g.latent_qubits());
        let loss = |p: &[f64]| -> Result<f64> {
            Ok(-0.5 * probe_prob_real_pure(&dc, &d.theta, &gc.apply_to_state(p, &zero)?)?)
        };
        let grad = shift_gradient(loss, &gc.slot_scales()?, &g.theta)?;
        total.iter_mut().zip(grad).for_each(|(t, v)| *t += v);
    }
    let k = real.len() as f64;
    Ok(total.into_iter().map(|v| v / k).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentConfig {
    pub lr: f64,
    #[serde(default)]
    pub schedule: Option<ScheduleConfig>,
    /// Adam updates per outer iteration.
    #[serde(default = "one")]
    pub steps: usize,
}

fn one() -> usize {
    1
}

fn yes() -> bool {
    true
}

impl AgentConfig {
    pub fn new(lr: f64) -> Self {
        Self { lr, schedule: None, steps: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StopRule {
    pub eps_loss: f64,
    pub eps_prob: f64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self { eps_loss: 0.02, eps_prob: 0.05 }
    }
}

impl StopRule {
    /// `|L − ½| < ε_loss` and both mean probabilities above `1 − ε_prob`.
    pub fn met(&self, s: &GameSnapshot) -> bool {
        (s.loss - 0.5).abs() < self.eps_loss && s.p_real.min(s.p_fake) > 1.0 - self.eps_prob
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdversarialConfig {
    /// Labels to train on; `None` uses every label of the real source.
    #[serde(default)]
    pub train_labels: Option<Vec<Label>>,
    pub max_iter: usize,
    pub generator: AgentConfig,
    pub discriminator: AgentConfig,
    /// `None` always runs `max_iter` iterations.
    #[serde(default)]
    pub stop: Option<StopRule>,
    /// Freezes the generator when false.
    #[serde(default = "yes")]
    pub update_generator: bool,
}

impl AdversarialConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(s) = &self.stop {
            for (name, v) in [("eps_loss", s.eps_loss), ("eps_prob", s.eps_prob)] {
                if !(v > 0.0 && v < 0.5) {
                    return Err(QgaaError::Config(format!("{name} must lie in (0, 0.5), got {v}")));
                }
            }
        }
        for (name, a) in [("generator", &self.generator), ("discriminator", &self.discriminator)] {
            if !(a.lr.is_finite() && a.lr > 0.0) {
                return Err(QgaaError::Config(format!("{name} lr must be positive, got {}", a.lr)));
            }
            if let Some(s) = &a.schedule {
                s.validate()?;
            }
        }
        if self.train_labels.as_ref().is_some_and(|l| l.is_empty()) {
            return Err(QgaaError::EmptyEnsemble);
        }
        Ok(())
    }
}

/// One row of the training series; columns in CSV order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainRecord {
    pub iter: usize,
    pub loss: f64,
    pub p_real: f64,
    pub p_fake: f64,
    pub mean_fidelity: f64,
    pub lr_g: f64,
    pub lr_d: f64,
}

impl TrainRecord {
    pub const HEADER: [&'static str; 7] = ["iter", "loss", "p_real", "p_fake", "mean_fidelity", "lr_g", "lr_d"];
}

pub fn write_records<W: Write>(w: W, records: &[TrainRecord]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    if records.is_empty() {
        out.write_record(TrainRecord::HEADER)?;
    }
    for r in records {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrainStatus {
    /// The stop rule held at `stopped_at`.
    Stopped,
    MaxIter,
    /// A non-finite loss or gradient; parameters are those before the bad step.
    Aborted,
}

#[derive(Debug, Clone)]
pub struct AdversarialOutcome {
    pub generator: GeneratorSpec,
    pub discriminator: DiscriminatorSpec,
    pub record: Vec<TrainRecord>,
    pub status: TrainStatus,
    pub stopped_at: Option<usize>,
    /// `θ_g` at the start of every recorded iteration.
    pub generator_history: Vec<Vec<f64>>,
}

/// Alternating training. Each iteration (numbered from 1) records the game
/// at the current parameters, checks the stop rule, then takes the
/// discriminator's ascent steps followed by the generator's descent steps
/// against the updated discriminator.
pub fn train_adversarial(
    cfg: &AdversarialConfig,
    real_source: &LabeledEnsemble,
    g0: GeneratorSpec,
    d0: DiscriminatorSpec,
) -> Result<AdversarialOutcome> {
    cfg.validate()?;
    let real = match &cfg.train_labels {
        None => real_source.clone(),
        Some(labels) => {
            let mut sub = LabeledEnsemble::new(real_source.n_qubits());
            for l in labels {
                let e = real_source
                    .get(l)
                    .ok_or_else(|| QgaaError::MissingArtifact(format!("no real state for label {l:?}")))?;
                sub.push_entry(e.clone())?;
            }
            sub
        }
    };
    check_shapes(&d0, &g0, &real)?;
    if g0.label_arity() != real.entries()[0].label.len() {
        return Err(QgaaError::LabelArity { expected: real.entries()[0].label.len(), got: g0.label_arity() });
    }

    let (mut g, mut d) = (g0, d0);
    let mut adam_g = AdamState::new(g.theta.len(), cfg.generator.lr);
    let mut adam_d = AdamState::new(d.theta.len(), cfg.discriminator.lr);
    let mut record = Vec::new();
    let mut history = Vec::new();

    for iter in 1..=cfg.max_iter {
        let lr_g = scheduled(cfg.generator.schedule.as_ref(), iter - 1, cfg.generator.lr);
        let lr_d = scheduled(cfg.discriminator.schedule.as_ref(), iter - 1, cfg.discriminator.lr);
        let s = evaluate(&d, &g, &real)?;
        record.push(TrainRecord {
            iter,
            loss: s.loss,
            p_real: s.p_real,
            p_fake: s.p_fake,
            mean_fidelity: s.mean_fidelity,
            lr_g,
            lr_d,
        });
        history.push(g.theta.clone());
        let aborted = |g, d, record, generator_history| {
            Ok(AdversarialOutcome { generator: g, discriminator: d, record, status: TrainStatus::Aborted, stopped_at: None, generator_history })
        };
        if !s.loss.is_finite() {
            log::warn!("non-finite loss at iteration {iter}");
            return aborted(g, d, record, history);
        }
        if cfg.stop.is_some_and(|rule| rule.met(&s)) {
            return Ok(AdversarialOutcome {
                generator: g,
                discriminator: d,
                record,
                status: TrainStatus::Stopped,
                stopped_at: Some(iter),
                generator_history: history,
            });
        }
        if iter % 50 == 0 {
            log::debug!("iter {iter}: loss {:.4} p_real {:.3} p_fake {:.3} F {:.4}", s.loss, s.p_real, s.p_fake, s.mean_fidelity);
        }

        adam_d.lr = lr_d;
        for _ in 0..cfg.discriminator.steps {
            let grad: Vec<f64> = discriminator_gradient(&d, &g, &real)?.into_iter().map(|v| -v).collect();
            if adam_d.update(&grad, &mut d.theta).is_err() {
                return aborted(g, d, record, history);
            }
        }
        if cfg.update_generator {
            adam_g.lr = lr_g;
            for _ in 0..cfg.generator.steps {
                let grad = generator_gradient(&d, &g, &real)?;
                if adam_g.update(&grad, &mut g.theta).is_err() {
                    return aborted(g, d, record, history);
                }
            }
        }
    }
    Ok(AdversarialOutcome {
        generator: g,
        discriminator: d,
        record,
        status: TrainStatus::MaxIter,
        stopped_at: None,
        generator_history: history,
    })
}
