use crate::ensemble::{Label, LabeledEnsemble};
use crate::error::{QgaaError, Result};
use crate::hamiltonian::{MoleculeDataset, PauliHamiltonian};
use crate::linalg::{StateVector, C64, ZERO};
use crate::metrics::entanglement_entropy;

use super::config::{EntangledGrid, Experiment, ExperimentConfig};

/// `cos(k₀/2)|00⟩ + e^{ik₁} sin(k₀/2)|11⟩`
pub fn entangled_state(k0: f64, k1: f64) -> StateVector {
    let a = C64::new((k0 / 2.0).cos(), 0.0);
    let b = C64::from_polar((k0 / 2.0).sin(), k1);
    StateVector::new(vec![a, ZERO, ZERO, b]).expect("unit norm by construction")
}

/// Training grid states, keeping only those at or above the entropy floor.
pub fn entangled_ensemble(grid: &EntangledGrid) -> Result<LabeledEnsemble> {
    let mut ens = LabeledEnsemble::new(2);
    for label in grid.train_labels() {
        let psi = entangled_state(label[0], label[1]);
        let s = entanglement_entropy(&psi, &[0])?;
        if s < grid.min_entropy {
            log::warn!("dropping label {label:?}: entropy {s:.4} below {}", grid.min_entropy);
            continue;
        }
        ens.push_pure(label, psi)?;
    }
    if ens.is_empty() {
        return Err(QgaaError::EmptyEnsemble);
    }
    Ok(ens)
}

/// One label on the evaluation grid with its reference state.
#[derive(Debug, Clone)]
pub struct EvalPoint {
    pub label: Label,
    pub state: StateVector,
    pub train: bool,
    pub hamiltonian: Option<PauliHamiltonian>,
    pub energy: Option<f64>,
}

/// Everything a run needs from the data: training ensemble and evaluation grid.
#[derive(Debug, Clone)]
pub struct Problem {
    pub n_qubits: usize,
    pub train: LabeledEnsemble,
    pub eval: Vec<EvalPoint>,
}

impl Problem {
    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self> {
        match &cfg.experiment {
            Experiment::Entangled { grid } => Self::entangled(grid),
            Experiment::Molecule { dataset, train_r, test_r } => {
                Self::molecule(&MoleculeDataset::load(dataset)?, train_r, test_r.as_deref())
            }
        }
    }

    /// Training grid plus the half-step `k₁` held-out labels.
    pub fn entangled(grid: &EntangledGrid) -> Result<Self> {
        let train = entangled_ensemble(grid)?;
        let mut eval: Vec<EvalPoint> = train
            .iter()
            .map(|e| EvalPoint {
                label: e.label.clone(),
                state: e.pure.clone().expect("pure"),
                train: true,
                hamiltonian: None,
                energy: None,
            })
            .collect();
        for label in grid.test_labels() {
            let state = entangled_state(label[0], label[1]);
            eval.push(EvalPoint { label, state, train: false, hamiltonian: None, energy: None });
        }
        Ok(Self { n_qubits: 2, train, eval })
    }

    /// Ground states at `train_r`; evaluation over `test_r` or the whole
    /// fixture. Test points missing from the fixture are skipped.
    pub fn molecule(ds: &MoleculeDataset, train_r: &[f64], test_r: Option<&[f64]>) -> Result<Self> {
        let mut train = LabeledEnsemble::new(ds.n_qubits);
        for &r in train_r {
            let e = ds.at(r).ok_or_else(|| QgaaError::MissingArtifact(format!("no Hamiltonian at training r = {r}")))?;
            train.push_pure(vec![e.r], e.ground()?.1.clone())?;
        }
        let grid = test_r.map(<[f64]>::to_vec).unwrap_or_else(|| ds.r_values());
        let mut eval = Vec::with_capacity(grid.len());
        for r in grid {
            let Some(e) = ds.at(r) else {
                log::warn!("no Hamiltonian at test r = {r}; point skipped");
                continue;
            };
            let (e0, psi) = e.ground()?;
            eval.push(EvalPoint {
                label: vec![e.r],
                state: psi.clone(),
                train: train.get(&[e.r]).is_some(),
                hamiltonian: Some(e.hamiltonian.clone()),
                energy: Some(*e0),
            });
        }
        Ok(Self { n_qubits: ds.n_qubits, train, eval })
    }
}
