//! Ansatz builders for every circuit family used by the experiments.
//!
//! Label-dependent families are instantiated per label: the label enters as
//! fixed angle offsets or as per-gate slot scales, never as a slot value.

use serde::{Deserialize, Serialize};

use super::circuit::ParamCircuit;
use super::gate::{Angle, Gate};
use crate::error::{QgaaError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnsatzFamily {
    /// Two-qubit encoder/decoder: RY pair, CZ, RY pair.
    EntangledQae,
    /// `RY(g₁)·RZ(g₀ + k₁)·RY(k₀)` on one qubit.
    EntangledGenerator,
    /// Twelve-parameter two-qubit discriminator (input q0, probe q1); the
    /// label `(k₀, k₁)` enters as angle offsets only.
    EntangledDiscriminator,
    /// The same twelve-slot two-qubit body without the label offsets.
    CompactDiscriminator,
    /// RX, RY, nearest-neighbour CX ladder, RX, RY per layer.
    LinearEntangling,
    /// RX, RY, ring of CX per layer.
    CircularEntangling,
    /// Affine label encoding on every qubit, then `depth` processing blocks.
    GeneratorMeta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub family: AnsatzFamily,
    pub n_qubits: usize,
    pub depth: usize,
}

impl AnsatzSpec {
    pub fn new(family: AnsatzFamily, n_qubits: usize, depth: usize) -> Self {
        Self { family, n_qubits, depth }
    }

    /// Closed-form slot count.
    pub fn param_count(&self) -> Result<usize> {
        self.validate()?;
        let (n, d) = (self.n_qubits, self.depth);
        Ok(match self.family {
            AnsatzFamily::EntangledQae => 4,
            AnsatzFamily::EntangledGenerator => 2,
            AnsatzFamily::EntangledDiscriminator | AnsatzFamily::CompactDiscriminator => 12,
            AnsatzFamily::LinearEntangling => 4 * n * d,
            AnsatzFamily::CircularEntangling => 2 * n * d,
            AnsatzFamily::GeneratorMeta => 4 * n + 2 * n * d,
        })
    }

    /// Number of label components the family consumes.
    pub fn label_arity(&self) -> usize {
        match self.family {
            AnsatzFamily::EntangledGenerator | AnsatzFamily::EntangledDiscriminator => 2,
            AnsatzFamily::GeneratorMeta => 1,
            _ => 0,
        }
    }

    fn validate(&self) -> Result<()> {
        let fixed = |n: usize| {
            if self.n_qubits != n || self.depth != 1 {
                Err(QgaaError::UnsupportedAnsatz(format!(
                    "{:?} is defined for {n} qubit(s) and depth 1, got n={} d={}",
                    self.family, self.n_qubits, self.depth
                )))
            } else {
                Ok(())
            }
        };
        match self.family {
            AnsatzFamily::EntangledQae => fixed(2),
            AnsatzFamily::EntangledGenerator => fixed(1),
            AnsatzFamily::EntangledDiscriminator | AnsatzFamily::CompactDiscriminator => fixed(2),
            _ if self.n_qubits == 0 || self.n_qubits > 8 || self.depth == 0 => Err(QgaaError::UnsupportedAnsatz(
                format!("{:?} needs 1..=8 qubits and depth ≥ 1, got n={} d={}", self.family, self.n_qubits, self.depth),
            )),
            _ => Ok(()),
        }
    }
}

/// Builds the circuit with every label component bound to zero.
pub fn build_ansatz(spec: &AnsatzSpec) -> Result<ParamCircuit> {
    build_conditioned(spec, &vec![0.0; spec.label_arity()])
}

/// Builds the circuit for one label value.
pub fn build_conditioned(spec: &AnsatzSpec, label: &[f64]) -> Result<ParamCircuit> {
    let count = spec.param_count()?;
    if label.len() != spec.label_arity() {
        return Err(QgaaError::LabelArity { expected: spec.label_arity(), got: label.len() });
    }
    let n = spec.n_qubits;
    let mut c = ParamCircuit::new(n, count);
    match spec.family {
        AnsatzFamily::EntangledQae => {
            c.push(Gate::ry(0, Angle::slot(0)))?;
            c.push(Gate::ry(1, Angle::slot(1)))?;
            c.push(Gate::cz(0, 1))?;
            c.push(Gate::ry(0, Angle::slot(2)))?;
            c.push(Gate::ry(1, Angle::slot(3)))?;
        }
        AnsatzFamily::EntangledGenerator => {
            c.push(Gate::ry(0, Angle::fixed(label[0])))?;
            c.push(Gate::rz(0, Angle::affine(0, 1.0, label[1])))?;
            c.push(Gate::ry(0, Angle::slot(1)))?;
        }
        AnsatzFamily::EntangledDiscriminator => {
            // Undo the generator's shape on the input wire, so a matched
            // real state lands on |0⟩; zero slots make the probe idle.
            c.push(Gate::ry(0, Angle::slot(0)))?;
            c.push(Gate::rz(0, Angle::affine(1, 1.0, -label[1])))?;
            c.push(Gate::ry(0, Angle::fixed(-label[0])))?;
            let mut s = 2..;
            for _ in 0..2 {
                for q in 0..2 {
                    c.push(Gate::rx(q, Angle::slot(s.next().unwrap())))?;
                    c.push(Gate::ry(q, Angle::slot(s.next().unwrap())))?;
                }
                c.push(Gate::cx(0, 1))?;
            }
            c.push(Gate::rx(1, Angle::slot(s.next().unwrap())))?;
            c.push(Gate::ry(1, Angle::slot(s.next().unwrap())))?;
        }
        AnsatzFamily::CompactDiscriminator => {
            let mut s = 0..;
            for _ in 0..2 {
                for q in 0..2 {
                    c.push(Gate::rx(q, Angle::slot(s.next().unwrap())))?;
                    c.push(Gate::ry(q, Angle::slot(s.next().unwrap())))?;
                }
                c.push(Gate::cx(0, 1))?;
            }
            for q in 0..2 {
                c.push(Gate::rx(q, Angle::slot(s.next().unwrap())))?;
                c.push(Gate::ry(q, Angle::slot(s.next().unwrap())))?;
            }
        }
        AnsatzFamily::LinearEntangling => {
            for layer in 0..spec.depth {
                let base = 4 * n * layer;
                rotation_layers(&mut c, base, n)?;
                cx_ladder(&mut c, n)?;
                rotation_layers(&mut c, base + 2 * n, n)?;
            }
        }
        AnsatzFamily::CircularEntangling => {
            for layer in 0..spec.depth {
                rotation_layers(&mut c, 2 * n * layer, n)?;
                cx_ring(&mut c, n)?;
            }
        }
        AnsatzFamily::GeneratorMeta => {
            let enc = LabelEncoding::Affine;
            c.append(&enc.build(n, n, label)?, 0, 0)?;
            let base = enc.param_count(n);
            for block in 0..spec.depth {
                rotation_layers(&mut c, base + 2 * n * block, n)?;
                cx_ladder(&mut c, n)?;
            }
        }
    }
    debug_assert_eq!(c.n_params(), count);
    Ok(c)
}

/// RX on every wire (slots `base..base+n`), then RY (`base+n..base+2n`).
fn rotation_layers(c: &mut ParamCircuit, base: usize, n: usize) -> Result<()> {
    for q in 0..n {
        c.push(Gate::rx(q, Angle::slot(base + q)))?;
    }
    for q in 0..n {
        c.push(Gate::ry(q, Angle::slot(base + n + q)))?;
    }
    Ok(())
}

/// `CX(q+1 → q)` from the bottom wire upward.
fn cx_ladder(c: &mut ParamCircuit, n: usize) -> Result<()> {
    for q in (0..n.saturating_sub(1)).rev() {
        c.push(Gate::cx(q + 1, q))?;
    }
    Ok(())
}

/// `CX(q → q+1)` down the register, closed by `CX(n−1 → 0)`.
fn cx_ring(c: &mut ParamCircuit, n: usize) -> Result<()> {
    if n < 2 {
        return Ok(());
    }
    for q in 0..n - 1 {
        c.push(Gate::cx(q, q + 1))?;
    }
    c.push(Gate::cx(n - 1, 0))?;
    Ok(())
}

/// How a classical label enters a circuit acting on `n_inputs` data wires.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelEncoding {
    /// The label is not used.
    #[default]
    None,
    /// On each input wire `RY(a·r + b)` then `RZ(c·r + d)`, each split into a
    /// scaled slot and a plain slot.
    Affine,
}

impl LabelEncoding {
    pub fn label_arity(self) -> usize {
        match self {
            LabelEncoding::None => 0,
            LabelEncoding::Affine => 1,
        }
    }

    pub fn param_count(self, n_inputs: usize) -> usize {
        match self {
            LabelEncoding::None => 0,
            LabelEncoding::Affine => 4 * n_inputs,
        }
    }

    /// Circuit over `n_wires` acting on wires `0..n_inputs`.
    pub fn build(self, n_wires: usize, n_inputs: usize, label: &[f64]) -> Result<ParamCircuit> {
        if self != LabelEncoding::None && label.len() != self.label_arity() {
            return Err(QgaaError::LabelArity { expected: self.label_arity(), got: label.len() });
        }
        let mut c = ParamCircuit::new(n_wires, self.param_count(n_inputs));
        match self {
            LabelEncoding::None => {}
            LabelEncoding::Affine => {
                let r = label[0];
                for q in 0..n_inputs {
                    let s = 4 * q;
                    c.push(Gate::ry(q, Angle::affine(s, r, 0.0)))?;
                    c.push(Gate::ry(q, Angle::slot(s + 1)))?;
                    c.push(Gate::rz(q, Angle::affine(s + 2, r, 0.0)))?;
                    c.push(Gate::rz(q, Angle::slot(s + 3)))?;
                }
            }
        }
        Ok(c)
    }
}
