//! Scalar diagnostics on states and ensembles.

use serde::{Deserialize, Serialize};

use crate::circuit::{Gate, ParamCircuit};
use crate::ensemble::LabeledEnsemble;
use crate::error::{QgaaError, Result};
use crate::hamiltonian::PauliHamiltonian;
use crate::linalg::{eig_hermitian, tensor_product, CMatrix, DensityMatrix, StateVector};

/// Relative eigenvalue threshold used by [`ensemble_rank`] unless overridden.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

fn same_dim(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.n_qubits() != b.n_qubits() {
        return Err(QgaaError::DimensionMismatch { expected: a.n_qubits(), got: b.n_qubits() });
    }
    Ok(())
}

/// Eigenvalues below this are treated as exact zeros when factoring a state.
/// Square roots amplify rounding noise, so a noise-level eigenvalue of
/// `1e-17` would otherwise add `3e-9` to the fidelity root.
const SUPPORT_TOL: f64 = 1e-12;

/// Factor `L` with `L·L† = ρ`, one column per eigenvalue above
/// [`SUPPORT_TOL`].
fn support_factor(rho: &DensityMatrix) -> Result<CMatrix> {
    let e = eig_hermitian(rho.matrix())?;
    let keep: Vec<usize> = (0..e.values.len()).filter(|&k| e.values[k] > SUPPORT_TOL).collect();
    let dim = rho.dim();
    Ok(CMatrix::from_fn(dim, keep.len(), |i, j| e.vectors[(i, keep[j])] * e.values[keep[j]].sqrt()))
}

/// Uhlmann–Jozsa fidelity `(Tr√(√a·b·√a))²`, clamped to `[0, 1]`.
///
/// Computed as the squared nuclear norm of `X = L_b†·L_a`, whose singular
/// values are those of `√b·√a`. The eigenproblem is solved on the smaller
/// of `X·X†` and `X†·X`, so a pure side reduces it to one number.
pub fn fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    same_dim(a, b)?;
    let la = support_factor(a)?;
    let lb = support_factor(b)?;
    let x = lb.adjoint().matmul(&la);
    let gram = if x.rows() <= x.cols() { x.matmul(&x.adjoint()) } else { x.adjoint().matmul(&x) };
    if gram.rows() == 0 {
        return Ok(0.0);
    }
    let e = eig_hermitian(&gram.hermitian_part())?;
    let root: f64 = e.values.iter().map(|v| v.max(0.0).sqrt()).sum();
    Ok((root * root).clamp(0.0, 1.0))
}

/// `⟨ψ|ρ|ψ⟩`, the fidelity when one side is pure.
pub fn fidelity_pure(psi: &StateVector, rho: &DensityMatrix) -> Result<f64> {
    if psi.n_qubits() != rho.n_qubits() {
        return Err(QgaaError::DimensionMismatch { expected: psi.n_qubits(), got: rho.n_qubits() });
    }
    Ok(rho.matrix().quadratic_form(psi.amplitudes()).re.clamp(0.0, 1.0))
}

/// `Tr(a·b)` computed directly.
pub fn swap_overlap(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    same_dim(a, b)?;
    Ok(a.matrix().trace_product(b.matrix()).re)
}

/// `Tr(a·b)` read off a simulated SWAP test: ancilla in `|+⟩`, controlled
/// SWAP of the two registers, Hadamard, then `2·Prob(0) − 1`.
pub fn swap_overlap_circuit(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    same_dim(a, b)?;
    let n = a.n_qubits();
    let total = 1 + 2 * n;
    let input = tensor_product(&DensityMatrix::zero(1), &tensor_product(a, b));
    let mut c = ParamCircuit::new(total, 0);
    c.push(Gate::h(0))?;
    for q in 0..n {
        c.push(Gate::cswap(0, 1 + q, 1 + n + q))?;
    }
    c.push(Gate::h(0))?;
    let out = c.apply_to_density(&[], &input)?;
    let half = 1 << (total - 1);
    let p0: f64 = (0..half).map(|i| out.matrix()[(i, i)].re).sum();
    Ok(2.0 * p0 - 1.0)
}

/// `½‖a − b‖₁`
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    same_dim(a, b)?;
    let e = eig_hermitian(&(a.matrix() - b.matrix()))?;
    Ok(0.5 * e.values.iter().map(|v| v.abs()).sum::<f64>())
}

/// Von Neumann entropy in bits; `0·log 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let e = eig_hermitian(rho.matrix())?;
    Ok(e.values.iter().filter(|&&v| v > 1e-15).map(|&v| -v * v.log2()).sum())
}

/// Entropy of the reduced state on `cut`.
pub fn entanglement_entropy(psi: &StateVector, cut: &[usize]) -> Result<f64> {
    let nrm = psi.norm();
    if (nrm - 1.0).abs() > 1e-10 {
        return Err(QgaaError::NotNormalized(nrm));
    }
    von_neumann_entropy(&psi.reduced_density(cut)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, o: &BlochVector) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }
}

/// `(Tr ρX, Tr ρY, Tr ρZ)` of a one-qubit state.
pub fn bloch_vector(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.n_qubits() != 1 {
        return Err(QgaaError::DimensionMismatch { expected: 1, got: rho.n_qubits() });
    }
    let m = rho.matrix();
    let off = m[(1, 0)];
    Ok(BlochVector { x: 2.0 * off.re, y: 2.0 * off.im, z: m[(0, 0)].re - m[(1, 1)].re })
}

/// `(1 + a·b)/2`, clamped to `[0, 1]`.
pub fn bloch_overlap(a: &BlochVector, b: &BlochVector) -> f64 {
    (0.5 * (1.0 + a.dot(b))).clamp(0.0, 1.0)
}

/// `Σᵢ cᵢ Tr(Pᵢ ρ)`
pub fn expectation(h: &PauliHamiltonian, rho: &DensityMatrix) -> Result<f64> {
    h.expectation(rho)
}

/// Number of eigenvalues of the ensemble average exceeding `tol` times the
/// largest one.
pub fn ensemble_rank(states: &LabeledEnsemble, tol: f64) -> Result<usize> {
    let mean = states.mean_density()?;
    let e = eig_hermitian(mean.matrix())?;
    let top = e.values.last().copied().unwrap_or(0.0);
    Ok(e.values.iter().filter(|&&v| v > tol * top).count())
}
