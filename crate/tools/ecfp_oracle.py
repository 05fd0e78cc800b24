"""Independent circular-fingerprint implementation used to freeze bit
populations for the ten-molecule panel.

The molecular graph comes from RDKit; the identifier scheme (atom
invariants, per-layer refinement, duplicate-environment removal, 64-bit
mixing and folding) is re-implemented here from its written description.
Writes crates/core/tests/fixtures/ecfp_panel.json.
"""

import json
import os

from rdkit import Chem

MASK = (1 << 64) - 1
PANEL = ["O", "C", "CCO", "c1ccccc1", "c1ccc2ccccc2c1", "C1CCCCC1", "Cc1ccccc1", "Oc1ccccc1", "Nc1ccccc1", "c1ccncc1"]
BOND_CODE = {Chem.BondType.SINGLE: 1, Chem.BondType.DOUBLE: 2, Chem.BondType.TRIPLE: 3, Chem.BondType.AROMATIC: 12}


def splitmix64(z):
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


def combine(seed, value):
    return splitmix64(seed ^ ((value + 0x9E3779B97F4A7C15 + ((seed << 6) & MASK) + (seed >> 2)) & MASK))


def hash_all(values):
    seed = 0
    for v in values:
        seed = combine(seed, v & 0xFFFFFFFF)
    return seed


def identifiers(mol, radius):
    ring = mol.GetRingInfo()
    current = []
    for a in mol.GetAtoms():
        parts = [a.GetAtomicNum(), a.GetTotalDegree(), a.GetTotalNumHs(), a.GetFormalCharge(), 0]
        if ring.NumAtomRings(a.GetIdx()):
            parts.append(1)
        current.append(hash_all(parts))
    found = set(current)
    n = mol.GetNumAtoms()
    covered = [frozenset()] * n
    alive = [a.GetDegree() > 0 for a in mol.GetAtoms()]
    seen_envs = set()
    for layer in range(radius):
        previous = list(current)
        new_cover = list(covered)
        candidates = []
        for i in range(n):
            if not alive[i]:
                continue
            env = set(covered[i])
            nbrs = []
            for b in mol.GetAtomWithIdx(i).GetBonds():
                j = b.GetOtherAtomIdx(i)
                env |= covered[j]
                env.add(b.GetIdx())
                nbrs.append((BOND_CODE[b.GetBondType()], previous[j]))
            ident = combine(layer, previous[i])
            for code, other in sorted(nbrs):
                ident = combine(ident, combine(combine(0, code), other))
            current[i] = ident
            new_cover[i] = frozenset(env)
            candidates.append((sorted(env), ident, i))
        for env, ident, i in sorted(candidates):
            key = tuple(env)
            if key in seen_envs:
                alive[i] = False
            else:
                seen_envs.add(key)
                found.add(ident)
        covered = new_cover
    return found


def main():
    rows = []
    for smiles in PANEL:
        mol = Chem.MolFromSmiles(smiles)
        bits = sorted({ident & 2047 for ident in identifiers(mol, 2)})
        rows.append({"smiles": smiles, "population": len(bits), "bits": bits})
    out = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "tests", "fixtures", "ecfp_panel.json")
    with open(out, "w") as fh:
        json.dump({"radius": 2, "n_bits": 2048, "molecules": rows}, fh)
        fh.write("\n")


if __name__ == "__main__":
    main()
