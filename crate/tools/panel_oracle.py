"""Freeze reference descriptor values for the ten-molecule panel.

Counts, masses and polar surface areas are written out by hand below and
cross-checked against RDKit; logP, QED and SA come from RDKit's own
implementations (the SA fragment table bundled with the crate is RDKit's).
Writes crates/core/tests/fixtures/descriptor_panel.json.
"""

import json
import os

from rdkit import Chem
from rdkit.Chem import QED, Crippen, rdMolDescriptors as rd
from rdkit.Contrib.SA_Score import sascorer

MASS = {"C": 12.0, "H": 1.007825032, "N": 14.003074005, "O": 15.994914622}

# smiles, formula, HBA, HBD, rotatable, aromatic rings, fraction sp3 C, TPSA
HAND = [
    ("O", {"H": 2, "O": 1}, 1, 1, 0, 0, 0.0, 31.5),
    ("C", {"C": 1, "H": 4}, 0, 0, 0, 0, 1.0, 0.0),
    ("CCO", {"C": 2, "H": 6, "O": 1}, 1, 1, 0, 0, 1.0, 20.23),
    ("c1ccccc1", {"C": 6, "H": 6}, 0, 0, 0, 1, 0.0, 0.0),
    ("c1ccc2ccccc2c1", {"C": 10, "H": 8}, 0, 0, 0, 2, 0.0, 0.0),
    ("C1CCCCC1", {"C": 6, "H": 12}, 0, 0, 0, 0, 1.0, 0.0),
    ("Cc1ccccc1", {"C": 7, "H": 8}, 0, 0, 0, 1, 1 / 7, 0.0),
    ("Oc1ccccc1", {"C": 6, "H": 6, "O": 1}, 1, 1, 0, 1, 0.0, 20.23),
    ("Nc1ccccc1", {"C": 6, "H": 7, "N": 1}, 1, 1, 0, 1, 0.0, 26.02),
    ("c1ccncc1", {"C": 5, "H": 5, "N": 1}, 1, 0, 0, 1, 0.0, 12.89),
]


def main():
    rows = []
    for smiles, formula, hba, hbd, rot, arom, fsp3, tpsa in HAND:
        m = Chem.MolFromSmiles(smiles)
        mass = sum(MASS[e] * n for e, n in formula.items())
        assert abs(mass - rd.CalcExactMolWt(m)) < 1e-4, smiles
        assert hba == rd.CalcNumLipinskiHBA(m), smiles
        assert hbd == sum(1 for a in m.GetAtoms() if a.GetSymbol() in ("N", "O") and a.GetTotalNumHs() > 0), smiles
        assert rot == rd.CalcNumRotatableBonds(m), smiles
        assert arom == rd.CalcNumAromaticRings(m), smiles
        assert abs(fsp3 - rd.CalcFractionCSP3(m)) < 1e-9, smiles
        assert abs(tpsa - rd.CalcTPSA(m)) < 1e-6, smiles
        rows.append({
            "smiles": smiles,
            "ExactMolWt": round(mass, 6),
            "NumHBA": hba,
            "NumHBD": hbd,
            "NumRotatableBonds": rot,
            "NumAromaticRings": arom,
            "FractionCSP3": round(fsp3, 6),
            "TPSA": tpsa,
            "logP": round(Crippen.MolLogP(m), 6),
            "QED": round(QED.qed(m), 6),
            "SA": round(sascorer.calculateScore(m), 6),
        })
    out = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "tests", "fixtures", "descriptor_panel.json")
    with open(out, "w") as fh:
        json.dump({"tolerances": {"exact": 1e-3, "model": 0.02}, "molecules": rows}, fh, indent=1)
        fh.write("\n")


if __name__ == "__main__":
    main()
