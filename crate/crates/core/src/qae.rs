//! Quantum autoencoder: compress `n`-qubit states onto the first `l` wires,
//! discard the rest, and rebuild from a fresh `|0…0⟩` register.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{build_ansatz, shift_gradient, AnsatzSpec, ParamCircuit};
use crate::ensemble::{EnsembleEntry, Label, LabeledEnsemble};
use crate::error::{QgaaError, Result};
use crate::linalg::{tensor_product, DensityMatrix, StateVector, C64};
use crate::metrics::{fidelity, fidelity_pure};
use crate::optim::{scheduled, try_cobyla_minimize, AdamState, CobylaConfig, ScheduleConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QaeOptimizer {
    Cobyla(CobylaConfig),
    /// Adam on parameter-shift gradients.
    Adam {
        lr: f64,
        iterations: usize,
        #[serde(default)]
        schedule: Option<ScheduleConfig>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaeConfig {
    /// Input qubits `n`.
    pub n_qubits: usize,
    /// Latent qubits `l`, the first `l` wires.
    pub latent_qubits: usize,
    pub encoder: AnsatzSpec,
    pub decoder: AnsatzSpec,
    pub optimizer: QaeOptimizer,
    #[serde(default)]
    pub seed: u64,
    /// Independent random starts; the best result is kept.
    #[serde(default = "one")]
    pub restarts: usize,
    #[serde(default)]
    pub decoder_layout: DecoderLayout,
    /// Explicit `[θ_E, φ_D]` start, used for the first restart.
    #[serde(default)]
    pub init: Option<Vec<f64>>,
}

/// Gate order of the decoder relative to its ansatz.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecoderLayout {
    /// Reversed gate order, the shape of an inverted encoder.
    #[default]
    Mirrored,
    /// The ansatz as built.
    Forward,
}

fn one() -> usize {
    1
}

impl QaeConfig {
    pub fn validate(&self) -> Result<()> {
        let (n, l) = (self.n_qubits, self.latent_qubits);
        if l == 0 || l >= n {
            return Err(QgaaError::Config(format!("need 1 ≤ l < n, got l={l} n={n}")));
        }
        if self.encoder.n_qubits != n || self.decoder.n_qubits != n {
            return Err(QgaaError::Config("encoder and decoder must act on n qubits".into()));
        }
        if self.encoder.label_arity() != 0 || self.decoder.label_arity() != 0 {
            return Err(QgaaError::Config("encoder and decoder ansatzes take no label".into()));
        }
        if let Some(init) = &self.init {
            let want = self.encoder.param_count()? + self.decoder.param_count()?;
            if init.len() != want {
                return Err(QgaaError::ParamLength { expected: want, got: init.len() });
            }
        }
        Ok(())
    }

    pub fn trash_qubits(&self) -> usize {
        self.n_qubits - self.latent_qubits
    }
}

/// Compiled encoder/decoder pair.
#[derive(Debug, Clone)]
pub struct QaeCircuits {
    pub n_qubits: usize,
    pub latent_qubits: usize,
    pub encoder: ParamCircuit,
    pub decoder: ParamCircuit,
}

impl QaeCircuits {
    pub fn new(config: &QaeConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            n_qubits: config.n_qubits,
            latent_qubits: config.latent_qubits,
            encoder: build_ansatz(&config.encoder)?,
            decoder: match config.decoder_layout {
                DecoderLayout::Mirrored => build_ansatz(&config.decoder)?.reversed(),
                DecoderLayout::Forward => build_ansatz(&config.decoder)?,
            },
        })
    }

    fn latent_wires(&self) -> Vec<usize> {
        (0..self.latent_qubits).collect()
    }

    /// `η = Tr_T[U_E σ U_E†]`
    pub fn encode(&self, theta_e: &[f64], sigma: &DensityMatrix) -> Result<DensityMatrix> {
        self.encoder.apply_to_density(theta_e, sigma)?.partial_trace(&self.latent_wires())
    }

    /// Latent state of a pure input, without forming `σ`.
    pub fn encode_pure(&self, theta_e: &[f64], psi: &StateVector) -> Result<DensityMatrix> {
        self.encoder.apply_to_state(theta_e, psi)?.reduced_density(&self.latent_wires())
    }

    /// `U_D (η ⊗ |0…0⟩⟨0…0|) U_D†`
    pub fn decode(&self, phi_d: &[f64], eta: &DensityMatrix) -> Result<DensityMatrix> {
        if eta.n_qubits() != self.latent_qubits {
            return Err(QgaaError::DimensionMismatch { expected: self.latent_qubits, got: eta.n_qubits() });
        }
        let full = tensor_product(eta, &DensityMatrix::zero(self.n_qubits - self.latent_qubits));
        self.decoder.apply_to_density(phi_d, &full)
    }

    /// Reconstruction fidelity of one entry.
    ///
    /// Pure inputs use `F = χ₀†ηχ₀` with `χ = U_D†ψ` restricted to the
    /// zero-trash block, which equals `⟨ψ|decode(η)|ψ⟩`.
    pub fn fidelity(&self, theta_e: &[f64], phi_d: &[f64], entry: &EnsembleEntry) -> Result<f64> {
        match &entry.pure {
            Some(psi) => {
                let eta = self.encode_pure(theta_e, psi)?;
                let chi = self.decoder.apply_inverse_to_state(phi_d, psi)?;
                let t = self.n_qubits - self.latent_qubits;
                let chi0: Vec<C64> = (0..1usize << self.latent_qubits).map(|i| chi.amplitudes()[i << t]).collect();
                Ok(eta.matrix().quadratic_form(&chi0).re.clamp(0.0, 1.0))
            }
            None => self.fidelity_general(theta_e, phi_d, entry),
        }
    }

    /// Encode, decode and compare with the Uhlmann–Jozsa fidelity.
    pub fn fidelity_general(&self, theta_e: &[f64], phi_d: &[f64], entry: &EnsembleEntry) -> Result<f64> {
        let rho = self.decode(phi_d, &self.encode(theta_e, &entry.rho)?)?;
        match &entry.pure {
            Some(psi) => fidelity_pure(psi, &rho),
            None => fidelity(&entry.rho, &rho),
        }
    }

    pub fn fidelities(&self, theta_e: &[f64], phi_d: &[f64], ensemble: &LabeledEnsemble) -> Result<Vec<f64>> {
        if ensemble.is_empty() {
            return Err(QgaaError::EmptyEnsemble);
        }
        if ensemble.n_qubits() != self.n_qubits {
            return Err(QgaaError::DimensionMismatch { expected: self.n_qubits, got: ensemble.n_qubits() });
        }
        ensemble.entries().par_iter().map(|e| self.fidelity(theta_e, phi_d, e)).collect()
    }

    /// `mean(1 − F)` over the ensemble.
    pub fn loss(&self, theta_e: &[f64], phi_d: &[f64], ensemble: &LabeledEnsemble) -> Result<f64> {
        let f = self.fidelities(theta_e, phi_d, ensemble)?;
        Ok(f.iter().map(|v| 1.0 - v).sum::<f64>() / f.len() as f64)
    }

    /// Loss on the concatenated vector `[θ_E, φ_D]`.
    pub fn loss_joint(&self, params: &[f64], ensemble: &LabeledEnsemble) -> Result<f64> {
        let (e, d) = self.split(params)?;
        self.loss(e, d, ensemble)
    }

    pub fn split<'a>(&self, params: &'a [f64]) -> Result<(&'a [f64], &'a [f64])> {
        let ne = self.encoder.n_params();
        let want = ne + self.decoder.n_params();
        if params.len() != want {
            return Err(QgaaError::ParamLength { expected: want, got: params.len() });
        }
        Ok(params.split_at(ne))
    }

    /// Per-slot angle scales of `[θ_E, φ_D]`.
    pub fn slot_scales(&self) -> Result<Vec<f64>> {
        let mut s = self.encoder.slot_scales()?;
        s.extend(self.decoder.slot_scales()?);
        Ok(s)
    }
}

pub fn encode(config: &QaeConfig, theta_e: &[f64], sigma: &DensityMatrix) -> Result<DensityMatrix> {
    QaeCircuits::new(config)?.encode(theta_e, sigma)
}

pub fn decode(config: &QaeConfig, phi_d: &[f64], eta: &DensityMatrix) -> Result<DensityMatrix> {
    QaeCircuits::new(config)?.decode(phi_d, eta)
}

pub fn qae_loss(config: &QaeConfig, theta_e: &[f64], phi_d: &[f64], ensemble: &LabeledEnsemble) -> Result<f64> {
    QaeCircuits::new(config)?.loss(theta_e, phi_d, ensemble)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelFidelity {
    pub label: Label,
    pub fidelity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedQae {
    pub config: QaeConfig,
    pub theta_e: Vec<f64>,
    pub phi_d: Vec<f64>,
    pub final_loss: f64,
    pub fidelities: Vec<LabelFidelity>,
    pub seed: u64,
}

impl TrainedQae {
    pub fn circuits(&self) -> Result<QaeCircuits> {
        QaeCircuits::new(&self.config)
    }

    pub fn encode(&self, sigma: &DensityMatrix) -> Result<DensityMatrix> {
        self.circuits()?.encode(&self.theta_e, sigma)
    }

    pub fn decode(&self, eta: &DensityMatrix) -> Result<DensityMatrix> {
        self.circuits()?.decode(&self.phi_d, eta)
    }

    pub fn mean_fidelity(&self) -> f64 {
        self.fidelities.iter().map(|f| f.fidelity).sum::<f64>() / self.fidelities.len().max(1) as f64
    }

    /// Latent states of every ensemble entry, same labels and order.
    pub fn latent_ensemble(&self, ensemble: &LabeledEnsemble) -> Result<LabeledEnsemble> {
        let c = self.circuits()?;
        let mut out = LabeledEnsemble::new(self.config.latent_qubits);
        for e in ensemble.iter() {
            let eta = match &e.pure {
                Some(psi) => c.encode_pure(&self.theta_e, psi)?,
                None => c.encode(&self.theta_e, &e.rho)?,
            };
            out.push_mixed(e.label.clone(), eta)?;
        }
        Ok(out)
    }
}

/// One optimizer iteration (an objective evaluation for COBYLA, an update
/// for Adam).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QaeRecord {
    pub restart: usize,
    pub iter: usize,
    pub loss: f64,
    pub best_loss: f64,
}

/// Trains encoder and decoder jointly. Returns the best parameters found
/// over all restarts and the per-iteration record.
pub fn train_qae(config: &QaeConfig, ensemble: &LabeledEnsemble) -> Result<(TrainedQae, Vec<QaeRecord>)> {
    let c = QaeCircuits::new(config)?;
    if ensemble.is_empty() {
        return Err(QgaaError::EmptyEnsemble);
    }
    let dim = c.encoder.n_params() + c.decoder.n_params();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut records = Vec::new();
    let mut best: Option<(Vec<f64>, f64)> = None;

    for restart in 0..config.restarts.max(1) {
        let random: Vec<f64> = (0..dim).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
        let x0 = match (&config.init, restart) {
            (Some(init), 0) => init.clone(),
            _ => random,
        };
        let (x, f) = match &config.optimizer {
            QaeOptimizer::Cobyla(cfg) => run_cobyla(&c, ensemble, &x0, cfg, restart, &mut records)?,
            QaeOptimizer::Adam { lr, iterations, schedule } => {
                run_adam(&c, ensemble, &x0, *lr, *iterations, schedule.as_ref(), restart, &mut records)?
            }
        };
        log::debug!("qae restart {restart}: loss {f:.3e}");
        if best.as_ref().is_none_or(|(_, bf)| f < *bf) {
            best = Some((x, f));
        }
    }

    let (x, final_loss) = best.expect("at least one restart");
    let (e, d) = c.split(&x)?;
    let fids = c.fidelities(e, d, ensemble)?;
    let trained = TrainedQae {
        config: config.clone(),
        theta_e: e.to_vec(),
        phi_d: d.to_vec(),
        final_loss,
        fidelities: ensemble
            .iter()
            .zip(fids)
            .map(|(en, fidelity)| LabelFidelity { label: en.label.clone(), fidelity })
            .collect(),
        seed: config.seed,
    };
    Ok((trained, records))
}

fn run_cobyla(
    c: &QaeCircuits,
    ensemble: &LabeledEnsemble,
    x0: &[f64],
    cfg: &CobylaConfig,
    restart: usize,
    records: &mut Vec<QaeRecord>,
) -> Result<(Vec<f64>, f64)> {
    let mut best = f64::INFINITY;
    let mut iter = 0;
    let r = try_cobyla_minimize(
        |x| {
            let loss = c.loss_joint(x, ensemble)?;
            iter += 1;
            best = best.min(loss);
            records.push(QaeRecord { restart, iter, loss, best_loss: best });
            Ok(loss)
        },
        x0,
        cfg,
    )?;
    Ok((r.x, r.f))
}

#[allow(clippy::too_many_arguments)]
fn run_adam(
    c: &QaeCircuits,
    ensemble: &LabeledEnsemble,
    x0: &[f64],
    lr: f64,
    iterations: usize,
    schedule: Option<&ScheduleConfig>,
    restart: usize,
    records: &mut Vec<QaeRecord>,
) -> Result<(Vec<f64>, f64)> {
    let scales = c.slot_scales()?;
    let mut x = x0.to_vec();
    let mut adam = AdamState::new(x.len(), lr);
    let mut best = (x.clone(), c.loss_joint(&x, ensemble)?);
    for iter in 0..iterations {
        let loss = c.loss_joint(&x, ensemble)?;
        if loss < best.1 {
            best = (x.clone(), loss);
        }
        records.push(QaeRecord { restart, iter, loss, best_loss: best.1 });
        let grad = shift_gradient(|p| c.loss_joint(p, ensemble), &scales, &x)?;
        adam.lr = scheduled(schedule, iter, lr);
        adam.update(&grad, &mut x)?;
    }
    let loss = c.loss_joint(&x, ensemble)?;
    if loss < best.1 {
        best = (x, loss);
    }
    records.push(QaeRecord { restart, iter: iterations, loss, best_loss: best.1 });
    Ok(best)
}
