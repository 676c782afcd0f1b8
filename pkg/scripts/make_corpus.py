#!/usr/bin/env python3
"""Generate the bundled molecule corpus (seeded, deduplicated canonical SMILES).

Usage: make_corpus.py --out data/corpus.smi --count 4000 --seed 20240901
"""

import argparse
import sys

import numpy as np

from qmolgen.datagen import random_molecule
from qmolgen.smiles import canonical_smiles


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", required=True)
    ap.add_argument("--count", type=int, default=4000)
    ap.add_argument("--seed", type=int, default=20240901)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    seen: set[str] = set()
    rows: list[str] = []
    attempts = 0
    while len(rows) < args.count and attempts < args.count * 60:
        attempts += 1
        g = random_molecule(rng)
        if g is None:
            continue
        smi = canonical_smiles(g)
        if smi in seen:
            continue
        seen.add(smi)
        rows.append(smi)

    with open(args.out, "w") as fh:
        fh.write("# generated corpus: <=9 heavy atoms, C/N/O/F, neutral\n")
        fh.write(f"# seed={args.seed} count={len(rows)}\n")
        fh.write("\n".join(rows) + "\n")
    print(f"wrote {len(rows)} molecules to {args.out} ({attempts} attempts)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
