#!/usr/bin/env python3
"""Build the shipped SA fragment-frequency table from a molecule corpus."""

import argparse
import sys

from qmolgen.chem.envsig import environment_signatures
from qmolgen.smiles import parse


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--corpus", default="data/corpus_9atom.smi")
    ap.add_argument("--out", default="src/qmolgen/chem/data/sa_fragments.tsv")
    args = ap.parse_args()

    counts: dict[str, int] = {}
    n = 0
    with open(args.corpus) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            g = parse(line)
            n += 1
            for sig in set(environment_signatures(g)):
                counts[sig] = counts.get(sig, 0) + 1

    with open(args.out, "w") as fh:
        fh.write("# SA fragment table: radius<=2 atom-environment signatures and the\n")
        fh.write(f"# number of corpus molecules containing each ({n} molecules).\n")
        for sig in sorted(counts):
            fh.write(f"{sig}\t{counts[sig]}\n")
    print(f"wrote {len(counts)} fragments from {n} molecules to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
