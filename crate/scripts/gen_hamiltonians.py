"""Regenerate the bundled Pauli-string Hamiltonian fixtures.

Requires pyscf and numpy. Integrals come from a restricted Hartree-Fock run in
the STO-3G basis; the second-quantized Hamiltonian is mapped to qubits with the
Jordan-Wigner transform and expanded in the Pauli basis.

Qubit q is spin orbital q with all alpha orbitals first, then all beta
orbitals. Character i of a Pauli word acts on qubit i, and qubit 0 is the most
significant bit of the basis index.

    python3 scripts/gen_hamiltonians.py crates/core/data
"""

import itertools
import sys
from pathlib import Path

import numpy as np
from pyscf import ao2mo, gto, scf

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"I": I2, "X": X, "Y": Y, "Z": Z}
LOWER = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|: removes an occupied (|1>) orbital


def kron_all(ops):
    out = np.array([[1.0 + 0j]])
    for op in ops:
        out = np.kron(out, op)
    return out


def annihilators(n):
    ops = []
    for p in range(n):
        ops.append(kron_all([Z] * p + [LOWER] + [I2] * (n - p - 1)))
    return ops


def fermion_matrix(e_const, h1, eri, n_spatial):
    """Build the qubit matrix of E + sum h a+a + 1/2 sum (pq|rs) a+_p a+_r a_s a_q."""
    n = 2 * n_spatial
    a = annihilators(n)
    ad = [m.conj().T for m in a]
    dim = 2**n
    mat = e_const * np.eye(dim, dtype=complex)

    def spin_orb(p):
        return p % n_spatial, p // n_spatial

    for p, q in itertools.product(range(n), repeat=2):
        (ip, sp), (iq, sq) = spin_orb(p), spin_orb(q)
        if sp == sq and abs(h1[ip, iq]) > 1e-14:
            mat += h1[ip, iq] * ad[p] @ a[q]
    for p, q, r, s in itertools.product(range(n), repeat=4):
        (ip, sp), (iq, sq), (ir, sr), (is_, ss) = map(spin_orb, (p, q, r, s))
        if sp != sq or sr != ss:
            continue
        v = eri[ip, iq, ir, is_]
        if abs(v) > 1e-14:
            mat += 0.5 * v * ad[p] @ ad[r] @ a[s] @ a[q]
    return mat


def pauli_decompose(mat, n, tol=1e-10):
    dim = 2**n
    terms = []
    for word in itertools.product("IXYZ", repeat=n):
        op = kron_all([PAULI[c] for c in word])
        c = np.trace(op @ mat) / dim
        assert abs(c.imag) < 1e-10
        if abs(c.real) > tol:
            terms.append(("".join(word), c.real))
    return terms


def h2_integrals(r):
    mol = gto.M(atom=f"H 0 0 0; H 0 0 {r}", basis="sto-3g", unit="Angstrom", verbose=0)
    mf = scf.RHF(mol).run()
    c = mf.mo_coeff
    h1 = c.T @ mf.get_hcore() @ c
    eri = ao2mo.restore(1, ao2mo.kernel(mol, c), c.shape[1])
    return mol.energy_nuc(), h1, eri, c.shape[1]


def lih_integrals(r):
    """Frozen Li 1s core, pi (px/py) orbitals removed: 3 spatial orbitals, 6 qubits."""
    mol = gto.M(atom=f"Li 0 0 0; H 0 0 {r}", basis="sto-3g", unit="Angstrom", verbose=0)
    mf = scf.RHF(mol).run()
    c = mf.mo_coeff
    nmo = c.shape[1]
    h = c.T @ mf.get_hcore() @ c
    eri = ao2mo.restore(1, ao2mo.kernel(mol, c), nmo)
    labels = mol.ao_labels()
    pxy = [i for i, lab in enumerate(labels) if "px" in lab or "py" in lab]
    s = mol.intor("int1e_ovlp")
    weight = [float(c[pxy, m] @ (s[np.ix_(pxy, range(nmo))] @ c[:, m])) for m in range(nmo)]
    core = [0]
    removed = [m for m in range(nmo) if weight[m] > 0.5]
    assert len(removed) == 2, weight
    active = [m for m in range(nmo) if m not in core and m not in removed]
    e_core = mol.energy_nuc()
    for cc in core:
        e_core += 2 * h[cc, cc]
        for dd in core:
            e_core += 2 * eri[cc, cc, dd, dd] - eri[cc, dd, dd, cc]
    h_eff = h.copy()
    for p, q in itertools.product(range(nmo), repeat=2):
        h_eff[p, q] += sum(2 * eri[p, q, cc, cc] - eri[p, cc, cc, q] for cc in core)
    h1 = h_eff[np.ix_(active, active)]
    eri_a = eri[np.ix_(active, active, active, active)]
    return e_core, h1, eri_a, len(active)


def write(path, name, n, grid, build):
    lines = [
        f"# {name}: STO-3G, Jordan-Wigner, coefficients in Hartree, r in Angstrom",
        "# generated by scripts/gen_hamiltonians.py",
        f"molecule {name} qubits {n}",
    ]
    for r in grid:
        e, h1, eri, ns = build(r)
        mat = fermion_matrix(e, h1, eri, ns)
        terms = pauli_decompose(mat, n)
        evals = np.linalg.eigvalsh(mat)
        print(f"{name} r={r:.3f} terms={len(terms)} e0={evals[0]:.8f}", file=sys.stderr)
        lines.append("")
        lines.append(f"r {r:.3f}")
        for word, c in terms:
            lines.append(f"{c:.12f} {word}")
    Path(path).write_text("\n".join(lines) + "\n")


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
    h2_grid = sorted(set([round(0.30 + 0.05 * i, 3) for i in range(37)] + [0.735]))
    write(out / "h2_sto3g_jw_4q.ham", "H2", 4, h2_grid, h2_integrals)
    lih_grid = [round(0.2 + 0.1 * i, 3) for i in range(41)]
    write(out / "lih_6q.ham", "LiH", 6, lih_grid, lih_integrals)


if __name__ == "__main__":
    main()
