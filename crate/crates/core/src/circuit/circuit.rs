use std::fmt;

use serde::{Deserialize, Serialize};

use super::gate::{Angle, Gate, GateKind};
use crate::error::{QgaaError, Result};
use crate::linalg::{CMatrix, DensityMatrix, StateVector, UnitaryMatrix};

/// Ordered gate list over `n_qubits` wires with `n_params` trainable slots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamCircuit {
    n_qubits: usize,
    n_params: usize,
    gates: Vec<Gate>,
}

impl ParamCircuit {
    pub fn new(n_qubits: usize, n_params: usize) -> Self {
        Self { n_qubits, n_params, gates: Vec::new() }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Appends a gate after checking targets and slot references.
    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        if gate.targets.len() != gate.kind.arity() {
            return Err(QgaaError::InvalidSelection(format!(
                "{} takes {} targets, got {}",
                gate.kind.name(),
                gate.kind.arity(),
                gate.targets.len()
            )));
        }
        for (i, &q) in gate.targets.iter().enumerate() {
            if q >= self.n_qubits {
                return Err(QgaaError::QubitOutOfRange { index: q, n_qubits: self.n_qubits });
            }
            if gate.targets[..i].contains(&q) {
                return Err(QgaaError::InvalidSelection(format!("repeated target q{q}")));
            }
        }
        match (&gate.angle, gate.kind.is_rotation()) {
            (None, true) => {
                return Err(QgaaError::InvalidSelection(format!("{} needs an angle", gate.kind.name())));
            }
            (Some(_), false) => {
                return Err(QgaaError::NotShiftable(format!("{} cannot carry an angle", gate.kind.name())));
            }
            (Some(Angle { slot: Some(s), .. }), true) if *s >= self.n_params => {
                return Err(QgaaError::ParamLength { expected: self.n_params, got: s + 1 });
            }
            _ => {}
        }
        self.gates.push(gate);
        Ok(self)
    }

    /// Appends every gate of `other`, with its slots shifted by `slot_shift`
    /// and its wires shifted by `wire_shift`.
    pub fn append(&mut self, other: &ParamCircuit, slot_shift: usize, wire_shift: usize) -> Result<&mut Self> {
        for g in &other.gates {
            let mut g = g.clone();
            g.targets.iter_mut().for_each(|q| *q += wire_shift);
            if let Some(a) = g.angle.as_mut() {
                a.slot = a.slot.map(|s| s + slot_shift);
            }
            self.push(g)?;
        }
        Ok(self)
    }

    /// Same gates in reverse order, slots unchanged. With free angles this is
    /// the layout of the adjoint circuit.
    pub fn reversed(&self) -> ParamCircuit {
        let mut gates = self.gates.clone();
        gates.reverse();
        ParamCircuit { n_qubits: self.n_qubits, n_params: self.n_params, gates }
    }

    fn check_params(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.n_params {
            return Err(QgaaError::ParamLength { expected: self.n_params, got: params.len() });
        }
        Ok(())
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.n_qubits {
            return Err(QgaaError::DimensionMismatch { expected: self.n_qubits, got: n });
        }
        Ok(())
    }

    /// Scale of the single gate using each slot; 0 for unused slots.
    /// Fails when a slot drives more than one gate, where a single shift
    /// pair no longer gives the exact derivative.
    pub fn slot_scales(&self) -> Result<Vec<f64>> {
        let mut scales = vec![0.0; self.n_params];
        let mut seen = vec![false; self.n_params];
        for g in &self.gates {
            if let Some(Angle { slot: Some(s), scale, .. }) = g.angle {
                if seen[s] {
                    return Err(QgaaError::NotShiftable(format!("slot {s} drives more than one gate")));
                }
                seen[s] = true;
                scales[s] = scale;
            }
        }
        Ok(scales)
    }

    pub fn apply_to_state(&self, params: &[f64], psi: &StateVector) -> Result<StateVector> {
        self.check_params(params)?;
        self.check_dim(psi.n_qubits())?;
        let mut out = psi.clone();
        for g in &self.gates {
            g.apply_raw(out.amplitudes_mut(), self.n_qubits, 0, g.bound_angle(params), false);
        }
        Ok(out)
    }

    /// `U†|ψ⟩`
    pub fn apply_inverse_to_state(&self, params: &[f64], psi: &StateVector) -> Result<StateVector> {
        self.check_params(params)?;
        self.check_dim(psi.n_qubits())?;
        let mut out = psi.clone();
        for g in self.gates.iter().rev() {
            g.apply_adjoint_raw(out.amplitudes_mut(), self.n_qubits, 0, g.bound_angle(params));
        }
        Ok(out)
    }

    /// `UρU†`, treating the row-major matrix as a `2n`-qubit amplitude array.
    pub fn apply_to_density(&self, params: &[f64], rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.check_params(params)?;
        self.check_dim(rho.n_qubits())?;
        let n = self.n_qubits;
        let mut out = rho.clone();
        let data = out.matrix_mut().data_mut();
        for g in &self.gates {
            let theta = g.bound_angle(params);
            g.apply_raw(data, 2 * n, 0, theta, false);
            g.apply_raw(data, 2 * n, n, theta, true);
        }
        Ok(out)
    }

    pub fn unitary(&self, params: &[f64]) -> Result<UnitaryMatrix> {
        self.check_params(params)?;
        let n = self.n_qubits;
        let mut m = CMatrix::identity(1 << n);
        let data = m.data_mut();
        for g in &self.gates {
            // acting on the row index only left-multiplies
            g.apply_raw(data, 2 * n, 0, g.bound_angle(params), false);
        }
        Ok(UnitaryMatrix::from_matrix_unchecked(m))
    }

    /// One gate per line, in circuit order.
    pub fn dump(&self) -> String {
        self.to_string()
    }

    pub fn count_kind(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }
}

impl fmt::Display for ParamCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

pub fn circuit_unitary(c: &ParamCircuit, params: &[f64]) -> Result<UnitaryMatrix> {
    c.unitary(params)
}

pub fn apply_to_density(c: &ParamCircuit, params: &[f64], rho: &DensityMatrix) -> Result<DensityMatrix> {
    c.apply_to_density(params, rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{C64, ZERO};
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn source_circuit(k0: f64, k1: f64) -> ParamCircuit {
        let mut c = ParamCircuit::new(2, 0);
        c.push(Gate::ry(0, Angle::fixed(k0))).unwrap();
        c.push(Gate::rz(0, Angle::fixed(k1))).unwrap();
        c.push(Gate::cx(0, 1)).unwrap();
        c
    }

    #[test]
    fn empty_circuit_is_identity() {
        let c = ParamCircuit::new(3, 0);
        assert_eq!(c.unitary(&[]).unwrap(), UnitaryMatrix::identity(3));
    }

    #[test]
    fn source_circuit_makes_bell_state() {
        let psi = source_circuit(PI / 2.0, 0.0).apply_to_state(&[], &StateVector::zero(2)).unwrap();
        let h = FRAC_1_SQRT_2;
        let expect = [C64::new(h, 0.0), ZERO, ZERO, C64::new(h, 0.0)];
        let ov = psi.inner(&StateVector::new(expect.to_vec()).unwrap()).norm();
        assert!((ov - 1.0).abs() < 1e-14);
    }

    #[test]
    fn density_path_matches_unitary_path() {
        let mut c = ParamCircuit::new(3, 3);
        c.push(Gate::rx(0, Angle::slot(0))).unwrap();
        c.push(Gate::ry(2, Angle::slot(1))).unwrap();
        c.push(Gate::cx(2, 0)).unwrap();
        c.push(Gate::rz(1, Angle::affine(2, 0.7, 0.1))).unwrap();
        c.push(Gate::cswap(1, 0, 2)).unwrap();
        c.push(Gate::h(1)).unwrap();
        let p = [0.3, -1.1, 2.0];
        let psi = StateVector::normalized((0..8).map(|i| C64::new(i as f64 - 3.0, 0.5 * i as f64)).collect()).unwrap();
        let rho = psi.to_density();
        let via_density = c.apply_to_density(&p, &rho).unwrap();
        let u = c.unitary(&p).unwrap();
        let via_unitary = u.conjugate(&rho).unwrap();
        assert!(via_density.matrix().max_abs_diff(via_unitary.matrix()) < 1e-13);
        let via_state = c.apply_to_state(&p, &psi).unwrap().to_density();
        assert!(via_density.matrix().max_abs_diff(via_state.matrix()) < 1e-13);
        let back = c.apply_inverse_to_state(&p, &c.apply_to_state(&p, &psi).unwrap()).unwrap();
        assert!((back.inner(&psi).norm() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn push_validation() {
        let mut c = ParamCircuit::new(2, 1);
        assert!(c.push(Gate::cx(0, 2)).is_err());
        assert!(c.push(Gate::cx(1, 1)).is_err());
        assert!(c.push(Gate::ry(0, Angle::slot(1))).is_err());
        let bad = Gate { kind: GateKind::CZ, targets: vec![0, 1], angle: Some(Angle::slot(0)) };
        assert!(matches!(c.push(bad), Err(QgaaError::NotShiftable(_))));
    }

    #[test]
    fn shared_slots_are_not_shiftable() {
        let mut c = ParamCircuit::new(1, 1);
        c.push(Gate::ry(0, Angle::slot(0))).unwrap();
        c.push(Gate::rz(0, Angle::slot(0))).unwrap();
        assert!(c.slot_scales().is_err());
    }
}
