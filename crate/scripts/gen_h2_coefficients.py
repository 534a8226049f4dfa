"""Generate the two-qubit H2 Hamiltonian coefficient table.

Runs restricted Hartree-Fock for H2 in the STO-3G basis with PySCF, transforms
the one- and two-electron integrals to the molecular-orbital basis, and
projects the two-electron, zero-spin sector onto the qubit Hamiltonian

    H = g1 + g2 Z1 + g3 Z2 + g4 Z1 Z2 + g5 X1 X2

with the basis assignment |00> = |1a 1b>, |01> = |1a 2b>, |10> = |2a 1b>,
|11> = |2a 2b>. g1 includes the nuclear repulsion energy. Energies in Hartree,
separations in Angstrom.

Usage: python3 scripts/gen_h2_coefficients.py > data/h2_sto3g.csv
"""

import numpy as np
from pyscf import ao2mo, fci, gto, scf


def coefficients(r):
    mol = gto.M(atom=f"H 0 0 0; H 0 0 {r}", basis="sto-3g", unit="Angstrom", verbose=0)
    mf = scf.RHF(mol).run()
    c = mf.mo_coeff
    h = c.T @ mf.get_hcore() @ c
    eri = ao2mo.restore(1, ao2mo.kernel(mol, c), 2)
    e00 = 2 * h[0, 0] + eri[0, 0, 0, 0]
    e11 = 2 * h[1, 1] + eri[1, 1, 1, 1]
    e01 = h[0, 0] + h[1, 1] + eri[0, 0, 1, 1]
    k = eri[0, 1, 0, 1]
    vnn = mol.energy_nuc()
    g1 = (e00 + e11) / 4 + e01 / 2 + vnn
    g2 = (e00 - e11) / 4
    g4 = (e00 + e11) / 4 - e01 / 2
    g5 = k
    e_fci = fci.FCI(mf).kernel()[0]
    ham = np.array([
        [g1 + 2 * g2 + g4, 0, 0, g5],
        [0, g1 - g4, g5, 0],
        [0, g5, g1 - g4, 0],
        [g5, 0, 0, g1 - 2 * g2 + g4],
    ])
    assert abs(np.linalg.eigvalsh(ham)[0] - e_fci) < 1e-8, (r, e_fci)
    return g1, g2, g2, g4, g5


def main():
    print("# H2 two-qubit Hamiltonian coefficients (Hartree) vs internuclear separation R (Angstrom)")
    print("# STO-3G basis, RHF molecular orbitals, generated by scripts/gen_h2_coefficients.py (PySCF)")
    print("# g1 includes nuclear repulsion; lowest eigenvalue equals the full-CI energy")
    print("R,g1,g2,g3,g4,g5")
    for r in np.round(np.arange(0.20, 2.8501, 0.05), 2):
        g = coefficients(r)
        print(f"{r:.2f}," + ",".join(f"{x:.10f}" for x in g))


if __name__ == "__main__":
    main()
