use serde::{Deserialize, Serialize};

use super::eigen::eig_hermitian;
use super::matrix::{kron_vec, norm, CMatrix, C64, ONE, ZERO};
use crate::error::{QgaaError, Result};

pub const NORM_TOL: f64 = 1e-10;
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_SLACK: f64 = 1e-9;
pub const UNITARY_TOL: f64 = 1e-9;

fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(QgaaError::InvalidDensity(format!("dimension {dim} is not a power of two")));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Normalized pure state on `n` qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let n_qubits = qubits_for_dim(amplitudes.len())?;
        let nrm = norm(&amplitudes);
        if (nrm - 1.0).abs() > NORM_TOL {
            return Err(QgaaError::NotNormalized(nrm));
        }
        Ok(Self { n_qubits, amplitudes })
    }

    /// Rescales to unit norm. Fails on the zero vector.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        let n_qubits = qubits_for_dim(amplitudes.len())?;
        let nrm = norm(&amplitudes);
        if nrm == 0.0 || !nrm.is_finite() {
            return Err(QgaaError::NotNormalized(nrm));
        }
        amplitudes.iter_mut().for_each(|a| *a /= nrm);
        Ok(Self { n_qubits, amplitudes })
    }

    pub(crate) fn from_amplitudes_unchecked(amplitudes: Vec<C64>) -> Self {
        let n_qubits = amplitudes.len().trailing_zeros() as usize;
        Self { n_qubits, amplitudes }
    }

    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![ZERO; 1 << n_qubits];
        amplitudes[index] = ONE;
        Self { n_qubits, amplitudes }
    }

    /// `|0…0⟩`
    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }

    pub fn inner(&self, other: &Self) -> C64 {
        super::matrix::inner(&self.amplitudes, &other.amplitudes)
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    /// Reduced state on `keep`, computed directly from the amplitudes.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let plan = TracePlan::new(self.n_qubits, keep)?;
        let kd = plan.kept.len();
        let mut out = CMatrix::zeros(kd, kd);
        for (i, &ki) in plan.kept.iter().enumerate() {
            for (j, &kj) in plan.kept.iter().enumerate().skip(i) {
                let mut acc = ZERO;
                for &t in &plan.traced {
                    acc += self.amplitudes[ki | t] * self.amplitudes[kj | t].conj();
                }
                out[(i, j)] = acc;
                if i != j {
                    out[(j, i)] = acc.conj();
                }
            }
        }
        Ok(DensityMatrix::from_matrix_unchecked(out))
    }
}

/// Hermitian, unit-trace, positive semidefinite operator on `n` qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity (with `PSD_SLACK`).
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(QgaaError::DimensionMismatch { expected: matrix.rows(), got: matrix.cols() });
        }
        let n_qubits = qubits_for_dim(matrix.rows())?;
        let dev = matrix.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(QgaaError::InvalidDensity(format!("not Hermitian (deviation {dev:e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(QgaaError::InvalidDensity(format!("trace {tr} is not 1")));
        }
        let e = eig_hermitian(&matrix)?;
        if e.values[0] < -PSD_SLACK {
            return Err(QgaaError::InvalidDensity(format!("negative eigenvalue {}", e.values[0])));
        }
        Ok(Self { n_qubits, matrix })
    }

    /// Projects a Hermitian matrix onto the density matrices by clipping
    /// negative eigenvalues and renormalizing the trace.
    pub fn from_hermitian_clipped(matrix: &CMatrix) -> Result<Self> {
        let e = eig_hermitian(matrix)?;
        let total: f64 = e.values.iter().map(|v| v.max(0.0)).sum();
        if total <= 0.0 {
            return Err(QgaaError::InvalidDensity("no positive spectrum".into()));
        }
        let m = e.map_values(|v| v.max(0.0) / total);
        Ok(Self::from_matrix_unchecked(m.hermitian_part()))
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        let n_qubits = matrix.rows().trailing_zeros() as usize;
        Self { n_qubits, matrix }
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        Self { n_qubits: psi.n_qubits, matrix: CMatrix::outer(&psi.amplitudes) }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1 << n_qubits;
        Self { n_qubits, matrix: CMatrix::identity(dim).scale_real(1.0 / dim as f64) }
    }

    /// `|0…0⟩⟨0…0|`
    pub fn zero(n_qubits: usize) -> Self {
        Self::from_pure(&StateVector::zero(n_qubits))
    }

    /// Uniform mixture of the given states (same qubit count).
    pub fn mixture(states: &[&DensityMatrix]) -> Result<Self> {
        let first = states.first().ok_or(QgaaError::EmptyEnsemble)?;
        let mut acc = CMatrix::zeros(first.dim(), first.dim());
        for s in states {
            if s.n_qubits != first.n_qubits {
                return Err(QgaaError::DimensionMismatch { expected: first.n_qubits, got: s.n_qubits });
            }
            acc = &acc + &s.matrix;
        }
        Ok(Self::from_matrix_unchecked(acc.scale_real(1.0 / states.len() as f64)))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub(crate) fn matrix_mut(&mut self) -> &mut CMatrix {
        &mut self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// `Tr(ρ²)`, in `[1/2ⁿ, 1]`.
    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }

    /// Checks every invariant; used by tests and debug assertions.
    pub fn validate(&self) -> Result<()> {
        Self::new(self.matrix.clone()).map(|_| ())
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        partial_trace(self, keep)
    }
}

/// Unitary operator on `log2(dim)` qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitaryMatrix {
    matrix: CMatrix,
}

impl UnitaryMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(QgaaError::DimensionMismatch { expected: matrix.rows(), got: matrix.cols() });
        }
        qubits_for_dim(matrix.rows())?;
        let err = (&matrix.adjoint().matmul(&matrix) - &CMatrix::identity(matrix.rows())).frobenius_norm();
        if err > UNITARY_TOL {
            return Err(QgaaError::InvalidDensity(format!("not unitary (‖U†U − I‖ = {err:e})")));
        }
        Ok(Self { matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self { matrix: CMatrix::identity(1 << n_qubits) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self { matrix: self.matrix.adjoint() }
    }

    pub fn apply_state(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.dim() != self.dim() {
            return Err(QgaaError::DimensionMismatch { expected: self.dim(), got: psi.dim() });
        }
        Ok(StateVector::from_amplitudes_unchecked(self.matrix.mul_vec(psi.amplitudes())))
    }

    /// `UρU†`
    pub fn conjugate(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim() {
            return Err(QgaaError::DimensionMismatch { expected: self.dim(), got: rho.dim() });
        }
        let m = self.matrix.matmul(rho.matrix()).matmul(&self.matrix.adjoint());
        Ok(DensityMatrix::from_matrix_unchecked(m))
    }
}

/// Kronecker product of two objects of the same kind.
pub trait TensorProduct: Sized {
    fn tensor(&self, other: &Self) -> Self;
}

impl TensorProduct for StateVector {
    fn tensor(&self, other: &Self) -> Self {
        StateVector::from_amplitudes_unchecked(kron_vec(&self.amplitudes, &other.amplitudes))
    }
}

impl TensorProduct for DensityMatrix {
    fn tensor(&self, other: &Self) -> Self {
        DensityMatrix::from_matrix_unchecked(self.matrix.kron(&other.matrix))
    }
}

impl TensorProduct for UnitaryMatrix {
    fn tensor(&self, other: &Self) -> Self {
        UnitaryMatrix::from_matrix_unchecked(self.matrix.kron(&other.matrix))
    }
}

/// `a ⊗ b`; `a` occupies the leading (most significant) qubits.
pub fn tensor_product<T: TensorProduct>(a: &T, b: &T) -> T {
    a.tensor(b)
}

/// Index bookkeeping shared by the density-matrix and state-vector traces.
struct TracePlan {
    kept: Vec<usize>,
    traced: Vec<usize>,
}

impl TracePlan {
    fn new(n: usize, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(QgaaError::InvalidSelection("keep set is empty".into()));
        }
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != keep.len() {
            return Err(QgaaError::InvalidSelection("keep set has duplicates".into()));
        }
        if let Some(&bad) = sorted.iter().find(|&&q| q >= n) {
            return Err(QgaaError::QubitOutOfRange { index: bad, n_qubits: n });
        }
        let traced_q: Vec<usize> = (0..n).filter(|q| !sorted.contains(q)).collect();
        let spread = |qubits: &[usize]| -> Vec<usize> {
            let k = qubits.len();
            (0..1usize << k)
                .map(|l| {
                    let mut full = 0;
                    for (b, &q) in qubits.iter().enumerate() {
                        if l & (1 << (k - 1 - b)) != 0 {
                            full |= 1 << (n - 1 - q);
                        }
                    }
                    full
                })
                .collect()
        };
        Ok(Self { kept: spread(&sorted), traced: spread(&traced_q) })
    }
}

/// Traces out every qubit not in `keep`. Kept qubits retain their relative
/// order in the result.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let plan = TracePlan::new(rho.n_qubits, keep)?;
    let kd = plan.kept.len();
    let m = &rho.matrix;
    let out = CMatrix::from_fn(kd, kd, |i, j| {
        let (ki, kj) = (plan.kept[i], plan.kept[j]);
        plan.traced.iter().map(|&t| m[(ki | t, kj | t)]).sum()
    });
    Ok(DensityMatrix::from_matrix_unchecked(out))
}

pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}
