//! Pauli-sum Hamiltonians indexed by bond length, their text format, and
//! exact ground states.
//!
//! File format (UTF-8):
//!
//! ```text
//! # comment
//! molecule H2 qubits 4
//! r 0.735
//! -0.81 IIII
//! 0.17 ZIII
//! ```
//!
//! Character `i` of a Pauli word acts on qubit `i`. Energies are in Hartree,
//! bond lengths in Ångström.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::ensemble::LabeledEnsemble;
use crate::error::{QgaaError, Result};
use crate::linalg::{eig_hermitian, CMatrix, DensityMatrix, StateVector, C64, ZERO};

/// Largest register [`ground_state`] will diagonalize densely.
pub const MAX_DENSE_QUBITS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub word: String,
}

impl PauliTerm {
    /// `(x_mask, z_mask, number of Y)`: `P|k⟩ = i^{nY}·(−1)^{|k ∧ z|}·|k ⊕ x⟩`.
    fn masks(&self) -> (usize, usize, u32) {
        let n = self.word.len();
        let (mut x, mut z, mut ny) = (0usize, 0usize, 0u32);
        for (i, ch) in self.word.bytes().enumerate() {
            let bit = 1usize << (n - 1 - i);
            match ch {
                b'X' => x |= bit,
                b'Y' => {
                    x |= bit;
                    z |= bit;
                    ny += 1;
                }
                b'Z' => z |= bit,
                _ => {}
            }
        }
        (x, z, ny)
    }
}

fn i_pow(k: u32) -> C64 {
    match k % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliHamiltonian {
    pub n_qubits: usize,
    pub terms: Vec<PauliTerm>,
    /// Bond length in Å, when the Hamiltonian belongs to a dataset.
    pub r: Option<f64>,
}

impl PauliHamiltonian {
    /// Builds from `(coefficient, word)` pairs, merging repeated words.
    pub fn new(n_qubits: usize, terms: impl IntoIterator<Item = (f64, String)>) -> Result<Self> {
        let mut h = Self { n_qubits, terms: Vec::new(), r: None };
        for (c, w) in terms {
            if w.len() != n_qubits || !w.bytes().all(|b| matches!(b, b'I' | b'X' | b'Y' | b'Z')) {
                return Err(QgaaError::Parse { line: 0, msg: format!("bad Pauli word {w:?} for {n_qubits} qubits") });
            }
            if !c.is_finite() {
                return Err(QgaaError::Parse { line: 0, msg: format!("non-finite coefficient for {w}") });
            }
            h.add_term(c, w);
        }
        Ok(h)
    }

    fn add_term(&mut self, c: f64, word: String) {
        match self.terms.iter_mut().find(|t| t.word == word) {
            Some(t) => t.coefficient += c,
            None => self.terms.push(PauliTerm { coefficient: c, word }),
        }
    }

    pub fn to_matrix(&self) -> CMatrix {
        let dim = 1usize << self.n_qubits;
        let mut m = CMatrix::zeros(dim, dim);
        for t in &self.terms {
            let (x, z, ny) = t.masks();
            let base = i_pow(ny) * t.coefficient;
            for k in 0..dim {
                let sign = if (k & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                m[(k ^ x, k)] += base * sign;
            }
        }
        m
    }

    /// `Σᵢ cᵢ Tr(Pᵢ ρ)`, without building the matrix.
    pub fn expectation(&self, rho: &DensityMatrix) -> Result<f64> {
        if rho.n_qubits() != self.n_qubits {
            return Err(QgaaError::DimensionMismatch { expected: self.n_qubits, got: rho.n_qubits() });
        }
        let m = rho.matrix();
        let mut acc = ZERO;
        for t in &self.terms {
            let (x, z, ny) = t.masks();
            let mut s = ZERO;
            for k in 0..rho.dim() {
                let v = m[(k, k ^ x)];
                s += if (k & z).count_ones() % 2 == 0 { v } else { -v };
            }
            acc += s * i_pow(ny) * t.coefficient;
        }
        Ok(acc.re)
    }
}

/// Lowest eigenvalue and a unit eigenvector for it. The vector's largest
/// component is made real and positive so repeated runs agree.
pub fn ground_state(h: &PauliHamiltonian) -> Result<(f64, StateVector)> {
    if h.n_qubits > MAX_DENSE_QUBITS {
        return Err(QgaaError::Oversized(h.n_qubits));
    }
    let e = eig_hermitian(&h.to_matrix())?;
    let mut v = e.vector(0);
    let pivot = v.iter().copied().fold(ZERO, |best, z| if z.norm() > best.norm() + 1e-12 { z } else { best });
    let phase = pivot.conj() / pivot.norm();
    v.iter_mut().for_each(|z| *z *= phase);
    Ok((e.values[0], StateVector::normalized(v)?))
}

#[derive(Debug, Clone)]
pub struct DatasetEntry {
    pub r: f64,
    pub hamiltonian: PauliHamiltonian,
    ground: OnceLock<(f64, StateVector)>,
}

impl DatasetEntry {
    /// Ground energy and state, computed on first use.
    pub fn ground(&self) -> Result<&(f64, StateVector)> {
        if let Some(g) = self.ground.get() {
            return Ok(g);
        }
        let g = ground_state(&self.hamiltonian)?;
        Ok(self.ground.get_or_init(|| g))
    }
}

/// Hamiltonians of one molecule on a strictly increasing grid of bond lengths.
#[derive(Debug, Clone)]
pub struct MoleculeDataset {
    pub name: String,
    pub n_qubits: usize,
    entries: Vec<DatasetEntry>,
}

impl MoleculeDataset {
    pub fn entries(&self) -> &[DatasetEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn r_values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.r).collect()
    }

    /// Entry at bond length `r` (matched within `1e-9` Å).
    pub fn at(&self, r: f64) -> Option<&DatasetEntry> {
        self.entries.iter().find(|e| (e.r - r).abs() < 1e-9)
    }

    /// Sub-dataset on the given bond lengths, which must all be present.
    pub fn select(&self, rs: &[f64]) -> Result<MoleculeDataset> {
        let mut sorted = rs.to_vec();
        sorted.sort_by(f64::total_cmp);
        let entries = sorted
            .iter()
            .map(|&r| self.at(r).cloned().ok_or_else(|| QgaaError::Config(format!("no Hamiltonian at r = {r}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(MoleculeDataset { name: self.name.clone(), n_qubits: self.n_qubits, entries })
    }

    /// Entries with `lo ≤ r ≤ hi`.
    pub fn range(&self, lo: f64, hi: f64) -> MoleculeDataset {
        let entries = self.entries.iter().filter(|e| e.r >= lo - 1e-9 && e.r <= hi + 1e-9).cloned().collect();
        MoleculeDataset { name: self.name.clone(), n_qubits: self.n_qubits, entries }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        parse_hamiltonian_file(&std::fs::read_to_string(path)?)
    }
}

pub fn parse_hamiltonian_file(text: &str) -> Result<MoleculeDataset> {
    let err = |line: usize, msg: String| QgaaError::Parse { line, msg };
    let mut header: Option<(String, usize)> = None;
    let mut entries: Vec<DatasetEntry> = Vec::new();
    let mut block_line = 0;

    let close_block = |entries: &[DatasetEntry], block_line: usize| -> Result<()> {
        match entries.last() {
            Some(e) if e.hamiltonian.terms.is_empty() => Err(err(block_line, format!("block r {} has no terms", e.r))),
            _ => Ok(()),
        }
    };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let Some((_, n)) = &header else {
            match tokens.as_slice() {
                ["molecule", name, "qubits", n] => {
                    let n: usize = n.parse().map_err(|_| err(line_no, format!("bad qubit count {n:?}")))?;
                    if n == 0 {
                        return Err(err(line_no, "qubit count must be positive".into()));
                    }
                    header = Some((name.to_string(), n));
                    continue;
                }
                _ => return Err(err(line_no, "expected `molecule <name> qubits <n>` header".into())),
            }
        };
        let n = *n;
        match tokens.as_slice() {
            ["r", value] => {
                close_block(&entries, block_line)?;
                let r: f64 = value.parse().map_err(|_| err(line_no, format!("bad bond length {value:?}")))?;
                if !r.is_finite() {
                    return Err(err(line_no, format!("bond length {r} is not finite")));
                }
                if let Some(prev) = entries.last() {
                    if r <= prev.r {
                        return Err(err(line_no, format!("bond length {r} does not exceed previous {}", prev.r)));
                    }
                }
                entries.push(DatasetEntry {
                    r,
                    hamiltonian: PauliHamiltonian { n_qubits: n, terms: Vec::new(), r: Some(r) },
                    ground: OnceLock::new(),
                });
                block_line = line_no;
            }
            [coef, word] => {
                let Some(entry) = entries.last_mut() else {
                    return Err(err(line_no, "term before the first `r` block".into()));
                };
                let c: f64 = coef.parse().map_err(|_| err(line_no, format!("bad coefficient {coef:?}")))?;
                if !c.is_finite() {
                    return Err(err(line_no, format!("coefficient {c} is not finite")));
                }
                if word.len() != n {
                    return Err(err(line_no, format!("word {word:?} has length {}, expected {n}", word.len())));
                }
                if !word.bytes().all(|b| matches!(b, b'I' | b'X' | b'Y' | b'Z')) {
                    return Err(err(line_no, format!("word {word:?} has characters outside IXYZ")));
                }
                entry.hamiltonian.add_term(c, word.to_string());
            }
            _ => return Err(err(line_no, format!("unrecognized line {line:?}"))),
        }
    }
    close_block(&entries, block_line)?;
    let (name, n_qubits) = header.ok_or_else(|| err(0, "missing header".into()))?;
    if entries.is_empty() {
        return Err(err(0, "no `r` blocks".into()));
    }
    Ok(MoleculeDataset { name, n_qubits, entries })
}

/// Canonical text form. Numbers use the shortest round-trip representation,
/// so `parse(serialize(d))` reproduces `d` exactly.
pub fn serialize_dataset(d: &MoleculeDataset) -> String {
    let mut out = format!("molecule {} qubits {}\n", d.name, d.n_qubits);
    for e in &d.entries {
        let _ = writeln!(out, "\nr {:?}", e.r);
        for t in &e.hamiltonian.terms {
            let _ = writeln!(out, "{:?} {}", t.coefficient, t.word);
        }
    }
    out
}

/// Every entry's ground state, labelled by `[r]`.
pub fn dataset_to_ensemble(d: &MoleculeDataset) -> Result<LabeledEnsemble> {
    let mut ens = LabeledEnsemble::new(d.n_qubits);
    for e in &d.entries {
        let (_, psi) = e.ground()?;
        ens.push_pure(vec![e.r], psi.clone())?;
    }
    Ok(ens)
}
