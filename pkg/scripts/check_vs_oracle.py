#!/usr/bin/env python3
"""Development aid: compare the chem stack against the committed oracle CSV."""

import csv
import sys

import numpy as np

from qmolgen.chem import FragmentTable, compute_descriptors, crippen_logp, qed_score, sa_score
from qmolgen.smiles import parse


def spearman(a, b):
    ra = np.argsort(np.argsort(a))
    rb = np.argsort(np.argsort(b))
    return float(np.corrcoef(ra, rb)[0, 1])


def main() -> int:
    path = sys.argv[1] if len(sys.argv) > 1 else "tests/fixtures/oracle_fixtures.csv"
    rows = list(csv.DictReader(open(path)))
    table = FragmentTable.load_default()

    logp_err, qed_pairs, sa_pairs = [], [], []
    tpsa_err, hbd_mism, rotb_mism, arom_mism = [], [], [], []
    worst = []
    for r in rows:
        g = parse(r["smiles"])
        d = compute_descriptors(g)
        dlogp = abs(d.logp - float(r["logp"]))
        logp_err.append(dlogp)
        if dlogp > 1e-3:
            worst.append((dlogp, r["smiles"], d.logp, float(r["logp"])))
        qed_pairs.append((qed_score(d), float(r["qed"])))
        sa_pairs.append((sa_score(g, table), float(r["sa"])))
        tpsa_err.append(abs(d.tpsa - float(r["tpsa"])))
        if d.hbd != int(r["hbd"]):
            hbd_mism.append((r["smiles"], d.hbd, r["hbd"]))
        if d.rotb != int(r["rotb"]):
            rotb_mism.append((r["smiles"], d.rotb, r["rotb"]))
        if d.aromatic_rings != int(r["arom"]):
            arom_mism.append((r["smiles"], d.aromatic_rings, r["arom"]))

    logp_err = np.array(logp_err)
    print(f"molecules: {len(rows)}")
    print(f"crippen: MAE={logp_err.mean():.5f} max={logp_err.max():.5f} n>1e-3: {(logp_err > 1e-3).sum()}")
    for w in sorted(worst, reverse=True)[:12]:
        print(f"  {w[1]}: mine={w[2]:.4f} oracle={w[3]:.4f} d={w[0]:.4f}")
    q = np.array(qed_pairs)
    s = np.array(sa_pairs)
    print(f"qed spearman: {spearman(q[:, 0], q[:, 1]):.4f}")
    print(f"sa  spearman: {spearman(s[:, 0], s[:, 1]):.4f}")
    print(f"tpsa: MAE={np.mean(tpsa_err):.4f} max={np.max(tpsa_err):.4f}")
    print(f"hbd mismatches: {len(hbd_mism)} {hbd_mism[:5]}")
    print(f"rotb mismatches: {len(rotb_mism)} {rotb_mism[:5]}")
    print(f"arom mismatches: {len(arom_mism)} {arom_mism[:5]}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
