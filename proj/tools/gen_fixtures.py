#!/usr/bin/env python3
"""Regenerate the bundled FCIDUMP fixtures under data/fixtures/.

Requires pyscf. Orbitals are canonical RHF orbitals; for water they are
reordered as 1a1 2a1 1b2 3a1 1b1 4a1 2b2 followed by the remaining virtuals
grouped by irrep, so an orbital index names the same orbital at every
geometry of the stretch series.
"""
import os
import numpy as np
from pyscf import gto, scf, symm, ao2mo
from pyscf.tools import fcidump

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "..", "data", "fixtures")

R0 = 1.8435          # bohr
ANGLE = 110.57       # degrees


def write(name, mol, mf, c, orbsym):
    # ORBSYM in the 1-based Molpro convention
    molpro = [fcidump.ORBSYM_MAP[mol.groupname][i] for i in orbsym]
    h1 = c.T @ mf.get_hcore() @ c
    eri = ao2mo.full(mol, c)
    fcidump.from_integrals(os.path.join(OUT, name), h1, eri, c.shape[1],
                           mol.nelectron, mol.energy_nuc(), 0, molpro,
                           tol=1e-15)


def h2(r, name):
    mol = gto.M(atom=f"H 0 0 0; H 0 0 {r}", unit="Bohr", basis="sto-3g",
                symmetry="D2h", verbose=0)
    mf = scf.RHF(mol).run()
    c = mf.mo_coeff
    orbsym = symm.label_orb_symm(mol, mol.irrep_id, mol.symm_orb, c)
    write(name, mol, mf, c, orbsym)


WATER_ORDER = [("A1", 0), ("A1", 1), ("B2", 0), ("A1", 2), ("B1", 0),
               ("A1", 3), ("B2", 1)]


def water(a, basis="sto-3g", dm0=None):
    r = a * R0
    half = np.radians(ANGLE / 2)
    y, z = r * np.sin(half), r * np.cos(half)
    mol = gto.M(atom=[["O", (0, 0, 0)], ["H", (0, y, z)], ["H", (0, -y, z)]],
                unit="Bohr", basis=basis, symmetry="C2v", verbose=0)
    mf = scf.RHF(mol)
    mf.max_cycle = 200
    mf.kernel(dm0=dm0)
    # keep the (1a1)2(2a1)2(1b2)2(3a1)2(1b1)2 occupation at every geometry
    mf.irrep_nelec = {"A1": 6, "B1": 2, "B2": 2}
    mf.kernel(dm0=mf.make_rdm1())
    labels = symm.label_orb_symm(mol, mol.irrep_name, mol.symm_orb, mf.mo_coeff)
    ranked = {}
    for i in np.argsort(mf.mo_energy, kind="stable"):
        ranked.setdefault(labels[i], []).append(int(i))
    idx = [ranked[irrep][rank] for irrep, rank in WATER_ORDER]
    # remaining virtuals grouped by irrep, then by energy
    for irrep in mol.irrep_name:
        idx += [i for i in ranked.get(irrep, []) if i not in idx]
    c = mf.mo_coeff[:, idx]
    orbsym = [symm.irrep_name2id(mol.groupname, labels[i]) for i in idx]
    tag = basis.replace("-", "").lower()
    write(f"h2o_{tag}_a{a:.2f}.fcidump", mol, mf, c, orbsym)
    return mf.make_rdm1()


if __name__ == "__main__":
    os.makedirs(OUT, exist_ok=True)
    h2(1.4, "h2_sto3g_r1.40.fcidump")
    h2(4.0, "h2_sto3g_r4.00.fcidump")
    h2(6.0, "h2_sto3g_r6.00.fcidump")
    water(1.0, "sto-3g")
    dm = None
    for a in (0.8, 1.0, 1.25, 1.5, 2.0, 2.5, 3.0):
        dm = water(a, "6-31g", dm)
