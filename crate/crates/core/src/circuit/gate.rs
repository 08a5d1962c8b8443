use std::fmt;

use serde::{Deserialize, Serialize};

use crate::linalg::kernel;
use crate::linalg::{CMatrix, UnitaryMatrix, C64, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    RX,
    RY,
    RZ,
    H,
    CX,
    CZ,
    CSWAP,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::RX | GateKind::RY | GateKind::RZ | GateKind::H => 1,
            GateKind::CX | GateKind::CZ => 2,
            GateKind::CSWAP => 3,
        }
    }

    pub fn is_rotation(self) -> bool {
        matches!(self, GateKind::RX | GateKind::RY | GateKind::RZ)
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::RX => "RX",
            GateKind::RY => "RY",
            GateKind::RZ => "RZ",
            GateKind::H => "H",
            GateKind::CX => "CX",
            GateKind::CZ => "CZ",
            GateKind::CSWAP => "CSWAP",
        }
    }
}

/// Bound angle `scale · params[slot] + offset`; without a slot the angle is
/// the fixed `offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Angle {
    pub slot: Option<usize>,
    pub scale: f64,
    pub offset: f64,
}

impl Angle {
    pub fn slot(slot: usize) -> Self {
        Self { slot: Some(slot), scale: 1.0, offset: 0.0 }
    }

    pub fn fixed(value: f64) -> Self {
        Self { slot: None, scale: 1.0, offset: value }
    }

    pub fn affine(slot: usize, scale: f64, offset: f64) -> Self {
        Self { slot: Some(slot), scale, offset }
    }

    pub fn bind(&self, params: &[f64]) -> f64 {
        match self.slot {
            Some(s) => self.scale * params[s] + self.offset,
            None => self.offset,
        }
    }
}

/// A gate instance. Rotations carry an [`Angle`]; all other kinds carry none.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    pub angle: Option<Angle>,
}

impl Gate {
    pub fn rotation(kind: GateKind, q: usize, angle: Angle) -> Self {
        debug_assert!(kind.is_rotation());
        Self { kind, targets: vec![q], angle: Some(angle) }
    }

    pub fn rx(q: usize, angle: Angle) -> Self {
        Self::rotation(GateKind::RX, q, angle)
    }

    pub fn ry(q: usize, angle: Angle) -> Self {
        Self::rotation(GateKind::RY, q, angle)
    }

    pub fn rz(q: usize, angle: Angle) -> Self {
        Self::rotation(GateKind::RZ, q, angle)
    }

    pub fn h(q: usize) -> Self {
        Self { kind: GateKind::H, targets: vec![q], angle: None }
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Self { kind: GateKind::CX, targets: vec![control, target], angle: None }
    }

    pub fn cz(a: usize, b: usize) -> Self {
        Self { kind: GateKind::CZ, targets: vec![a, b], angle: None }
    }

    pub fn cswap(control: usize, a: usize, b: usize) -> Self {
        Self { kind: GateKind::CSWAP, targets: vec![control, a, b], angle: None }
    }

    pub fn bound_angle(&self, params: &[f64]) -> f64 {
        self.angle.map_or(0.0, |a| a.bind(params))
    }

    /// Applies the gate to an amplitude array over `n` qubits, with all
    /// targets shifted by `shift`. `conjugate` applies the entrywise
    /// conjugate matrix (column side of a density matrix).
    pub(crate) fn apply_raw(&self, amps: &mut [C64], n: usize, shift: usize, theta: f64, conjugate: bool) {
        let t = |i: usize| self.targets[i] + shift;
        match self.kind {
            GateKind::RX | GateKind::RY | GateKind::RZ | GateKind::H => {
                let mut u = single_qubit(self.kind, theta);
                if conjugate {
                    u.iter_mut().for_each(|z| *z = z.conj());
                }
                kernel::apply_single(amps, n, u, t(0));
            }
            GateKind::CX => kernel::apply_cx(amps, n, t(0), t(1)),
            GateKind::CZ => kernel::apply_cz(amps, n, t(0), t(1)),
            GateKind::CSWAP => kernel::apply_cswap(amps, n, t(0), t(1), t(2)),
        }
    }

    /// Applies the adjoint gate.
    pub(crate) fn apply_adjoint_raw(&self, amps: &mut [C64], n: usize, shift: usize, theta: f64) {
        if self.kind.is_rotation() {
            // R(θ)† = R(−θ)
            self.apply_raw(amps, n, shift, -theta, false);
        } else {
            // H, CX, CZ, CSWAP are self-inverse
            self.apply_raw(amps, n, shift, theta, false);
        }
    }
}

impl fmt::Display for Gate {
    /// One-line dump, e.g. `RY q0 slot:3 offset:0.0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        for q in &self.targets {
            write!(f, " q{q}")?;
        }
        if let Some(a) = &self.angle {
            if let Some(s) = a.slot {
                write!(f, " slot:{s}")?;
                if a.scale != 1.0 {
                    write!(f, " scale:{:?}", a.scale)?;
                }
            }
            write!(f, " offset:{:?}", a.offset)?;
        }
        Ok(())
    }
}

/// Row-major 2×2 matrix of a one-qubit gate.
pub fn single_qubit(kind: GateKind, theta: f64) -> [C64; 4] {
    let (s, c) = (theta / 2.0).sin_cos();
    match kind {
        GateKind::RX => [C64::new(c, 0.0), C64::new(0.0, -s), C64::new(0.0, -s), C64::new(c, 0.0)],
        GateKind::RY => [C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(c, 0.0)],
        GateKind::RZ => [C64::new(c, -s), ZERO, ZERO, C64::new(c, s)],
        GateKind::H => {
            let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            [h, h, h, -h]
        }
        _ => panic!("single_qubit: {} is not a one-qubit gate", kind.name()),
    }
}

/// Local unitary of a gate, with targets taken in the gate's own order
/// (`targets[0]` is the most significant local qubit).
pub fn gate_matrix(g: &Gate, bound_angle: f64) -> UnitaryMatrix {
    let k = g.kind.arity();
    let dim = 1 << k;
    let m = match g.kind {
        GateKind::RX | GateKind::RY | GateKind::RZ | GateKind::H => {
            CMatrix::from_vec(2, 2, single_qubit(g.kind, bound_angle).to_vec())
        }
        _ => {
            let local = Gate { kind: g.kind, targets: (0..k).collect(), angle: None };
            let mut cols = Vec::with_capacity(dim);
            for b in 0..dim {
                let mut v = vec![ZERO; dim];
                v[b] = ONE;
                local.apply_raw(&mut v, k, 0, 0.0, false);
                cols.push(v);
            }
            CMatrix::from_fn(dim, dim, |i, j| cols[j][i])
        }
    };
    UnitaryMatrix::from_matrix_unchecked(m)
}
