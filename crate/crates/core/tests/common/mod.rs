//! Strategies and hand-rolled oracles shared by the integration tests.
#![allow(dead_code)]

use proptest::prelude::*;
use qgaa::circuit::{build_ansatz, AnsatzFamily, AnsatzSpec};
use qgaa::linalg::{CMatrix, DensityMatrix, StateVector, UnitaryMatrix, C64};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Normalized state from raw components; rejects near-zero vectors.
pub fn state_from(raw: &[(f64, f64)]) -> Option<StateVector> {
    let v: Vec<C64> = raw.iter().map(|&(a, b)| c(a, b)).collect();
    let n: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    (n > 1e-3).then(|| StateVector::new(v.into_iter().map(|z| z / n).collect()).unwrap())
}

pub fn arb_state(n_qubits: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1 << n_qubits).prop_filter_map("zero vector", |raw| state_from(&raw))
}

/// Random mixture of up to three pure states.
pub fn arb_density(n_qubits: usize) -> impl Strategy<Value = DensityMatrix> {
    (prop::collection::vec(arb_state(n_qubits), 1..=3), prop::collection::vec(0.05..1.0f64, 3)).prop_map(|(states, w)| {
        let total: f64 = w[..states.len()].iter().sum();
        let dim = states[0].dim();
        let mut m = CMatrix::zeros(dim, dim);
        for (s, wi) in states.iter().zip(&w) {
            m = &m + &CMatrix::outer(s.amplitudes()).scale_real(wi / total);
        }
        DensityMatrix::new(m).unwrap()
    })
}

pub fn arb_params(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-std::f64::consts::PI..std::f64::consts::PI, n)
}

/// Unitary from a random linear-entangling circuit.
pub fn arb_unitary(n_qubits: usize) -> impl Strategy<Value = UnitaryMatrix> {
    let spec = AnsatzSpec::new(AnsatzFamily::LinearEntangling, n_qubits, 2);
    arb_params(spec.param_count().unwrap()).prop_map(move |p| build_ansatz(&spec).unwrap().unitary(&p).unwrap())
}

/// `|⟨a|b⟩|²` straight from amplitudes.
pub fn overlap_sq(a: &StateVector, b: &StateVector) -> f64 {
    a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| x.conj() * y).sum::<C64>().norm_sqr()
}

/// Partial trace keeping the leading `keep` qubits, by explicit index sums.
pub fn trace_out_tail(rho: &CMatrix, n: usize, keep: usize) -> CMatrix {
    let (dk, dt) = (1 << keep, 1 << (n - keep));
    CMatrix::from_fn(dk, dk, |i, j| (0..dt).map(|t| rho[(i * dt + t, j * dt + t)]).sum())
}

/// Partial trace keeping the trailing `keep` qubits.
pub fn trace_out_head(rho: &CMatrix, n: usize, keep: usize) -> CMatrix {
    let (dk, dh) = (1 << keep, 1 << (n - keep));
    CMatrix::from_fn(dk, dk, |i, j| (0..dh).map(|h| rho[(h * dk + i, h * dk + j)]).sum())
}

/// Kronecker product by the defining index formula.
pub fn kron_oracle(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ra, rb) = (a.rows(), b.rows());
    CMatrix::from_fn(ra * rb, ra * rb, |i, j| a[(i / rb, j / rb)] * b[(i % rb, j % rb)])
}

pub fn pauli(ch: char) -> CMatrix {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match ch {
        'I' => CMatrix::from_vec(2, 2, vec![o, z, z, o]),
        'X' => CMatrix::from_vec(2, 2, vec![z, o, o, z]),
        'Y' => CMatrix::from_vec(2, 2, vec![z, -i, i, z]),
        'Z' => CMatrix::from_vec(2, 2, vec![o, z, z, -o]),
        _ => panic!("bad Pauli {ch}"),
    }
}

/// Dense Hamiltonian built term by term from explicit Kronecker products.
pub fn hamiltonian_oracle(h: &qgaa::hamiltonian::PauliHamiltonian) -> CMatrix {
    let dim = 1 << h.n_qubits;
    let mut m = CMatrix::zeros(dim, dim);
    for t in &h.terms {
        let mut k = CMatrix::identity(1);
        for ch in t.word.chars() {
            k = kron_oracle(&k, &pauli(ch));
        }
        m = &m + &k.scale_real(t.coefficient);
    }
    m
}

/// Eigenvalues by nalgebra's Hermitian solver, ascending.
pub fn eigenvalues_oracle(m: &CMatrix) -> Vec<f64> {
    let n = m.rows();
    let a = nalgebra::DMatrix::from_fn(n, n, |i, j| {
        let z = m[(i, j)];
        nalgebra::Complex::new(z.re, z.im)
    });
    let mut v: Vec<f64> = a.symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(|x, y| x.partial_cmp(y).unwrap());
    v
}

/// Trace distance `½Σ|λ|` of `a − b` via the oracle eigensolver.
pub fn trace_distance_oracle(a: &CMatrix, b: &CMatrix) -> f64 {
    0.5 * eigenvalues_oracle(&(a - b)).iter().map(|x| x.abs()).sum::<f64>()
}

/// Binary entropy in bits.
pub fn h2(p: f64) -> f64 {
    [p, 1.0 - p].iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

/// Central finite difference of `f` along every coordinate.
pub fn finite_diff(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    (0..x.len())
        .map(|j| {
            let mut p = x.to_vec();
            p[j] += h;
            let up = f(&p);
            p[j] -= 2.0 * h;
            (up - f(&p)) / (2.0 * h)
        })
        .collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
