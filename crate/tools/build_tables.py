"""Regenerate the bundled descriptor tables in crates/core/data.

Reads the Crippen atom-type file, the QED parameter module and the SA
fragment-score pickle from an RDKit installation and writes JSON (plus one
packed binary for the fragment scores) with a sha256 manifest.

    python3 tools/build_tables.py [--rdkit DIR] [--out crates/core/data]
"""
import argparse
import gzip
import hashlib
import json
import os
import pickle
import sys

sys.path.insert(0, os.path.dirname(__file__))
from tpsa_rules import FALLBACK, N_RULES, O_RULES  # noqa: E402

HALL_KIER = {
    # element: (sp, sp2, sp3); None falls back to the last non-null entry
    "Br": (None, None, 0.48),
    "C": (-0.22, -0.13, 0.0),
    "Cl": (None, None, 0.29),
    "F": (None, None, -0.07),
    "H": (0.0, 0.0, 0.0),
    "I": (None, None, 0.73),
    "N": (-0.29, -0.2, -0.04),
    "O": (None, -0.2, -0.04),
    "P": (None, 0.3, 0.43),
    "S": (None, 0.22, 0.35),
}
COVALENT_RADII = {
    "H": 0.33, "Li": 1.23, "B": 0.82, "C": 0.77, "N": 0.7, "O": 0.66, "F": 0.611, "Na": 1.54,
    "Mg": 1.36, "Si": 0.937, "P": 0.89, "S": 1.04, "Cl": 0.997, "K": 2.03, "Ca": 1.74,
    "Fe": 1.17, "Zn": 1.25, "Se": 1.17, "Br": 1.167, "I": 1.387,
}

NORMALIZATION = [
    # property, lower, upper, reversed
    ("SA", 1.0, 10.0, False),
    ("QED", 0.0, 1.0, False),
    ("ExactMolWt", 0.0, 1000.0, False),
    ("NumAromaticRings", 0.0, 6.0, False),
    ("NumHBA", 0.0, 15.0, False),
    ("NumHBD", 0.0, 10.0, False),
    ("NumRotatableBonds", 0.0, 15.0, False),
    ("FractionCSP3", 0.0, 1.0, False),
    ("TPSA", 0.0, 250.0, False),
    ("HallKierAlpha", -10.0, 2.0, False),
    ("Phi", 0.0, 15.0, False),
    ("logP", -5.0, 10.0, False),
    ("DockingLookup", -14.0, 0.0, True),
]


# The compiled-in copy of the table that MolLogP actually uses writes these
# two hydrogen rules with atomic numbers, so aromatic N/O/C neighbours are
# excluded as well; the text data file has the aliphatic-only form.
CRIPPEN_OVERRIDES = {
    "[#1]O[!C;!N;!O;!S]": "[#1]O[!#6;!#7;!#8;!#16]",
    "[#1][!C;!N;!O]": "[#1][!#6;!#7;!#8]",
}


def crippen(rdkit_dir):
    rules = []
    with open(os.path.join(rdkit_dir, "Data", "Crippen.txt")) as fh:
        for line in fh:
            if line.startswith("#") or not line.strip():
                continue
            cols = line.rstrip("\n").split("\t")
            rules.append({"type": cols[0], "smarts": CRIPPEN_OVERRIDES.get(cols[1], cols[1]), "logp": float(cols[2])})
    return {"version": 1, "description": "Wildman-Crippen atom-type logP contributions; first match wins, hydrogens typed on the explicit-H graph", "rules": rules}


def qed(rdkit_dir):
    sys.path.insert(0, os.path.dirname(rdkit_dir))
    from rdkit.Chem import QED

    ads = {k: dict(v._asdict()) for k, v in QED.adsParameters.items()}
    return {
        "version": 1,
        "description": "desirability functions d(x) = (A + B / (1 + exp(-(x - C + D/2) / E)) * (1 - 1 / (1 + exp(-(x - C - D/2) / F)))) / DMAX, combined by weighted geometric mean",
        "properties": list(QED.QEDproperties._fields),
        "weights": list(QED.WEIGHT_MEAN),
        "ads": ads,
        "acceptors": QED.AcceptorSmarts,
        "donors": "[N&!H0&v3,N&!H0&+1&v4,O&H1&+0,S&H1&+0,n&H1&+0]",
        "rotatable": "[!$(*#*)&!D1&!$(C(F)(F)F)&!$(C(Cl)(Cl)Cl)&!$(C(Br)(Br)Br)&!$(C([CH3])([CH3])[CH3])&!$([CD3](=[N,O,S])-!@[#7,O,S!D1])&!$([#7,O,S!D1]-!@[CD3]=[N,O,S])&!$([CD3](=[N+])-!@[#7!D1])&!$([#7!D1]-!@[CD3]=[N+])]-,:;!@[!$(*#*)&!D1&!$(C(F)(F)F)&!$(C(Cl)(Cl)Cl)&!$(C(Br)(Br)Br)&!$(C([CH3])([CH3])[CH3])]",
        "aliphatic_ring_exit": "[$([A;R][!a])]",
        "alerts": QED.StructuralAlertSmarts,
    }


def tpsa():
    cols = ["charge", "degree", "h", "single", "double", "triple", "aromatic", "in_3ring", "value"]
    rows = []
    for element, table in (("N", N_RULES), ("O", O_RULES)):
        for r in table:
            row = dict(zip(cols, r))
            row["element"] = element
            rows.append(row)
    fallback = {e: {"base": b, "per_neighbor": n, "per_h": h} for e, (b, n, h) in FALLBACK.items()}
    return {"version": 1, "description": "polar surface area contributions of N and O by local environment; first match wins, otherwise base - per_neighbor*degree + per_h*h floored at 0", "rules": rows, "fallback": fallback}


def hall_kier():
    return {
        "version": 1,
        "description": "alpha_i = table value by hybridization, else r_i / r_C - 1; kappa1 = (A+a)(A+a-1)^2/(P1+a)^2, kappa2 = (A+a-1)(A+a-2)^2/(P2+a)^2, Phi = kappa1*kappa2/A (A heavy atoms, P1 bonds, P2 two-bond paths)",
        "alphas": {e: {"sp": v[0], "sp2": v[1], "sp3": v[2]} for e, v in HALL_KIER.items()},
        "covalent_radii": COVALENT_RADII,
    }


def varint(x):
    out = bytearray()
    while True:
        b = x & 0x7F
        x >>= 7
        if x:
            out.append(b | 0x80)
        else:
            out.append(b)
            return out


def sa(rdkit_dir):
    data = pickle.load(gzip.open(os.path.join(rdkit_dir, "Contrib", "SA_Score", "fpscores.pkl.gz")))
    blob = bytearray()
    groups = []
    for entry in data:
        ids = sorted(int(i) for i in entry[1:])
        prev = 0
        for i in ids:
            blob += varint(i - prev)
            prev = i
        groups.append([float(entry[0]), len(ids)])
    meta = {
        "version": 1,
        "description": "fragment scores keyed by radius-2 Morgan environment ids (32-bit, boost-style hash_combine); ids stored per score group as sorted LEB128 deltas in sa_fragments.bin",
        "missing_score": -4.0,
        "min_raw": -4.0,
        "max_raw": 2.5,
        "macrocycle_size": 8,
        "groups": groups,
    }
    return meta, bytes(blob)


def normalization():
    return {
        "version": 1,
        "description": "linear clamp maps onto [0,1]; reversed maps send the lower bound to 1",
        "maps": [{"property": p, "lower": lo, "upper": hi, "reversed": rev} for p, lo, hi, rev in NORMALIZATION],
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--rdkit", default="/usr/local/lib/python3.10/dist-packages/rdkit")
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "crates", "core", "data"))
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    sa_meta, sa_blob = sa(args.rdkit)
    files = {
        "crippen.json": json.dumps(crippen(args.rdkit), indent=1).encode(),
        "qed.json": json.dumps(qed(args.rdkit), indent=1).encode(),
        "tpsa.json": json.dumps(tpsa(), indent=1).encode(),
        "hall_kier.json": json.dumps(hall_kier(), indent=1).encode(),
        "sa.json": json.dumps(sa_meta, indent=1).encode(),
        "sa_fragments.bin": sa_blob,
        "normalization.json": json.dumps(normalization(), indent=1).encode(),
    }
    manifest = {}
    for name, content in files.items():
        with open(os.path.join(args.out, name), "wb") as fh:
            fh.write(content)
        manifest[name] = hashlib.sha256(content).hexdigest()
    with open(os.path.join(args.out, "manifest.json"), "w") as fh:
        json.dump({"version": 1, "sha256": manifest}, fh, indent=1)
        fh.write("\n")


if __name__ == "__main__":
    main()
