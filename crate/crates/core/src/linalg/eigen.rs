//! Hermitian eigendecomposition by cyclic Jacobi rotations.
//!
//! Each rotation first removes the phase of the pivot element with a diagonal
//! unitary, then applies the classical real Jacobi rotation. Sweeps run in a
//! fixed order, so results are reproducible on a given platform.

use super::matrix::{CMatrix, C64};
use crate::error::{QgaaError, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order and the matching eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// `V·f(Λ)·V†`
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        let mut out = CMatrix::zeros(n, n);
        for (k, &w) in fv.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vi = self.vectors[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vi * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Diagonalizes a Hermitian matrix. Rejects inputs that deviate from
/// Hermiticity by more than `1e-8` (relative to the largest entry, floor 1).
pub fn eig_hermitian(m: &CMatrix) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(QgaaError::DimensionMismatch { expected: m.rows(), got: m.cols() });
    }
    let scale = m.data().iter().map(|z| z.norm()).fold(1.0, f64::max);
    let dev = m.hermitian_deviation();
    if dev > 1e-8 * scale {
        return Err(QgaaError::NotHermitian(dev));
    }
    Ok(jacobi(m.hermitian_part()))
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi(mut a: CMatrix) -> HermitianEigen {
    let n = a.rows();
    let mut v = CMatrix::identity(n);
    let total = a.frobenius_norm().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= 1e-15 * total {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // skip rotations that can no longer change the diagonal
                if mag < 1e-18 * (app.abs() + aqq.abs()) {
                    a[(p, q)] = C64::new(0.0, 0.0);
                    a[(q, p)] = C64::new(0.0, 0.0);
                    continue;
                }
                let phase = apq / mag; // e^{iφ}
                let zeta = (aqq - app) / (2.0 * mag);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // W = diag(1, e^{-iφ}) · R, with R the real Jacobi rotation
                let w_pp = C64::new(c, 0.0);
                let w_pq = C64::new(s, 0.0);
                let w_qp = -phase.conj() * s;
                let w_qq = phase.conj() * c;
                rotate(&mut a, &mut v, p, q, [w_pp, w_pq, w_qp, w_qq]);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    HermitianEigen { values, vectors }
}

/// `A ← W†AW`, `V ← VW` where `W` acts on the (p, q) plane.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize, w: [C64; 4]) {
    let [w_pp, w_pq, w_qp, w_qq] = w;
    let n = a.rows();
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * w_pp + aiq * w_qp;
        a[(i, q)] = aip * w_pq + aiq * w_qq;
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * w_pp + viq * w_qp;
        v[(i, q)] = vip * w_pq + viq * w_qq;
    }
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = w_pp.conj() * apj + w_qp.conj() * aqj;
        a[(q, j)] = w_pq.conj() * apj + w_qq.conj() * aqj;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
}

/// Principal square root of a positive semidefinite matrix. Eigenvalues
/// below zero (rounding) are clipped.
pub fn sqrt_psd(m: &CMatrix) -> Result<CMatrix> {
    let e = eig_hermitian(m)?;
    Ok(e.map_values(|x| x.max(0.0).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::I;

    fn pauli_x() -> CMatrix {
        CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    #[test]
    fn pauli_z_spectrum() {
        let z = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
        let e = eig_hermitian(&z).unwrap();
        assert_eq!(e.values, vec![-1.0, 1.0]);
        // eigenvector of -1 is |1⟩
        assert!((e.vectors[(1, 0)].norm() - 1.0).abs() < 1e-12);
        assert!((e.vectors[(0, 1)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pauli_x_spectrum() {
        let e = eig_hermitian(&pauli_x()).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-12);
        assert!((e.values[1] - 1.0).abs() < 1e-12);
        let minus = e.vector(0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // (|0⟩ − |1⟩)/√2 up to phase
        let ov = (minus[0] * h - minus[1] * h).norm();
        assert!((ov - 1.0).abs() < 1e-12);
    }

    #[test]
    fn complex_entries_reconstruct() {
        let m = CMatrix::from_fn(4, 4, |i, j| {
            let re = ((i + 2 * j) as f64).sin() + ((j + 2 * i) as f64).sin();
            let im = if i == j { 0.0 } else { (i as f64 - j as f64) * 0.3 };
            C64::new(re, 0.0) + I * im
        });
        let e = eig_hermitian(&m).unwrap();
        let rebuilt = e.map_values(|x| x);
        assert!(rebuilt.max_abs_diff(&m) < 1e-12);
        let vhv = e.vectors.adjoint().matmul(&e.vectors);
        assert!(vhv.max_abs_diff(&CMatrix::identity(4)) < 1e-12);
        for w in e.values.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(eig_hermitian(&m), Err(QgaaError::NotHermitian(_))));
    }

    #[test]
    fn degenerate_spectrum_is_handled() {
        let e = eig_hermitian(&CMatrix::identity(3)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
        assert_eq!(e.vectors, CMatrix::identity(3));
    }
}
