use serde::{Deserialize, Serialize};

use crate::error::{QgaaError, Result};
use crate::linalg::{CMatrix, DensityMatrix, StateVector};

/// Classical label: `(k₀, k₁)` for the entangled family, `(r)` for molecules.
pub type Label = Vec<f64>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleEntry {
    pub label: Label,
    pub rho: DensityMatrix,
    /// Kept when the state is known to be pure; enables vector fast paths.
    pub pure: Option<StateVector>,
}

/// Ordered, uniformly weighted family of labelled states on a common register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledEnsemble {
    n_qubits: usize,
    entries: Vec<EnsembleEntry>,
}

impl LabeledEnsemble {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, entries: Vec::new() }
    }

    pub fn from_pure(n_qubits: usize, items: impl IntoIterator<Item = (Label, StateVector)>) -> Result<Self> {
        let mut e = Self::new(n_qubits);
        for (label, psi) in items {
            e.push_pure(label, psi)?;
        }
        Ok(e)
    }

    pub fn push_pure(&mut self, label: Label, psi: StateVector) -> Result<()> {
        self.check(psi.n_qubits())?;
        self.entries.push(EnsembleEntry { label, rho: psi.to_density(), pure: Some(psi) });
        Ok(())
    }

    pub fn push_mixed(&mut self, label: Label, rho: DensityMatrix) -> Result<()> {
        self.check(rho.n_qubits())?;
        self.entries.push(EnsembleEntry { label, rho, pure: None });
        Ok(())
    }

    pub fn push_entry(&mut self, entry: EnsembleEntry) -> Result<()> {
        self.check(entry.rho.n_qubits())?;
        self.entries.push(entry);
        Ok(())
    }

    fn check(&self, n: usize) -> Result<()> {
        if n != self.n_qubits {
            return Err(QgaaError::DimensionMismatch { expected: self.n_qubits, got: n });
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[EnsembleEntry] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &EnsembleEntry> {
        self.entries.iter()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.entries.iter().map(|e| e.label.clone()).collect()
    }

    /// Entry whose label matches within `1e-12` per component.
    pub fn get(&self, label: &[f64]) -> Option<&EnsembleEntry> {
        self.entries
            .iter()
            .find(|e| e.label.len() == label.len() && e.label.iter().zip(label).all(|(a, b)| (a - b).abs() < 1e-12))
    }

    /// Uniform average state.
    pub fn mean_density(&self) -> Result<DensityMatrix> {
        if self.is_empty() {
            return Err(QgaaError::EmptyEnsemble);
        }
        let dim = 1 << self.n_qubits;
        let mut acc = CMatrix::zeros(dim, dim);
        for e in &self.entries {
            acc = &acc + e.rho.matrix();
        }
        Ok(DensityMatrix::from_matrix_unchecked(acc.scale_real(1.0 / self.len() as f64)))
    }
}
