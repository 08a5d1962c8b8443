//! In-place application of small gate matrices to amplitude arrays.
//!
//! Qubit 0 is the most significant bit of a basis index. A density matrix
//! stored row-major over `n` qubits is an amplitude array over `2n` qubits
//! whose first `n` are the row index and last `n` the column index, so the
//! same kernel serves both pure and mixed states.

use super::matrix::{CMatrix, C64, ZERO};

/// Applies a `2^k × 2^k` matrix to `targets` of an `n`-qubit amplitude array.
/// `targets[0]` is the most significant qubit of the gate's local index.
pub fn apply_matrix(amps: &mut [C64], n: usize, gate: &CMatrix, targets: &[usize]) {
    let k = targets.len();
    let local = 1usize << k;
    debug_assert_eq!(gate.rows(), local);
    debug_assert_eq!(amps.len(), 1usize << n);

    let masks: Vec<usize> = targets.iter().map(|&q| 1usize << (n - 1 - q)).collect();
    let target_mask: usize = masks.iter().sum();
    let offsets: Vec<usize> = (0..local)
        .map(|l| {
            let mut off = 0;
            for (b, m) in masks.iter().enumerate() {
                if l & (1 << (k - 1 - b)) != 0 {
                    off |= m;
                }
            }
            off
        })
        .collect();

    let mut buf = vec![ZERO; local];
    for base in 0..amps.len() {
        if base & target_mask != 0 {
            continue;
        }
        for (slot, off) in buf.iter_mut().zip(&offsets) {
            *slot = amps[base | off];
        }
        for (r, off) in offsets.iter().enumerate() {
            let row = &gate.data()[r * local..(r + 1) * local];
            amps[base | off] = row.iter().zip(&buf).map(|(g, a)| g * a).sum();
        }
    }
}

/// Specialized single-qubit update.
pub fn apply_single(amps: &mut [C64], n: usize, u: [C64; 4], q: usize) {
    let mask = 1usize << (n - 1 - q);
    for i in 0..amps.len() {
        if i & mask != 0 {
            continue;
        }
        let a0 = amps[i];
        let a1 = amps[i | mask];
        amps[i] = u[0] * a0 + u[1] * a1;
        amps[i | mask] = u[2] * a0 + u[3] * a1;
    }
}

/// Controlled-X as a permutation.
pub fn apply_cx(amps: &mut [C64], n: usize, control: usize, target: usize) {
    let cm = 1usize << (n - 1 - control);
    let tm = 1usize << (n - 1 - target);
    for i in 0..amps.len() {
        if i & cm != 0 && i & tm == 0 {
            amps.swap(i, i | tm);
        }
    }
}

/// Controlled-Z as a sign flip.
pub fn apply_cz(amps: &mut [C64], n: usize, a: usize, b: usize) {
    let m = (1usize << (n - 1 - a)) | (1usize << (n - 1 - b));
    for (i, amp) in amps.iter_mut().enumerate() {
        if i & m == m {
            *amp = -*amp;
        }
    }
}

/// Fredkin gate: swaps `a` and `b` when `control` is set.
pub fn apply_cswap(amps: &mut [C64], n: usize, control: usize, a: usize, b: usize) {
    let cm = 1usize << (n - 1 - control);
    let am = 1usize << (n - 1 - a);
    let bm = 1usize << (n - 1 - b);
    for i in 0..amps.len() {
        if i & cm != 0 && i & am != 0 && i & bm == 0 {
            amps.swap(i, (i & !am) | bm);
        }
    }
}
