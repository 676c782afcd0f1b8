#!/usr/bin/env python3
"""Assemble the fixture-corpus input list.

Curated well-known small molecules (all <= 9 heavy atoms, C/N/O/F) plus a
slice of the generated corpus. The oracle pipeline consumes this file and
emits the golden CSV; molecules the toolkit rejects are dropped there.
"""

import argparse
import sys

from qmolgen.smiles import canonical_smiles, parse

CURATED = """
C
CC
CCC
CCCC
CCCCC
CCCCCC
CC(C)C
CC(C)(C)C
CO
CCO
CCCO
CC(C)O
CC(C)(C)O
OCCO
OCCCO
OCC(O)CO
COC
CCOC
CCOCC
C=O
CC=O
CCC=O
CC(C)=O
CCC(C)=O
OC=O
CC(=O)O
CCC(=O)O
COC=O
CC(=O)OC
CCOC(C)=O
OCC=O
O=CC=O
OC(=O)C(=O)O
NCC(=O)O
CC(N)C(=O)O
CN
CCN
CCCN
CNC
CN(C)C
CCNCC
NCCN
NCCCN
NCCO
NC=O
NC(C)=O
NC(N)=O
CNC=O
CN(C)C=O
C#N
CC#N
CCC#N
C=CC#N
N#CC#N
C#C
CC#C
CC#CC
C=C
CC=C
CC=CC
CC(C)=C
C=CC=C
C=CC=O
CC=CC=O
CF
CCF
FCF
FC(F)F
FC(F)(F)F
FCC(F)(F)F
OC(=O)C(F)(F)F
OCCF
NCCF
C1CC1
C1CCC1
C1CCCC1
C1CCCCC1
C1CCCCCC1
OC1CC1
C1CO1
C1COC1
C1CCOC1
C1CCOCC1
C1COCCO1
C1CCNC1
C1CCNCC1
C1COCCN1
C1CNCCN1
O=C1CCC1
O=C1CCCC1
O=C1CCCCC1
C1=CC1
C1=CCC1
C1=CCCC1
C1=CCCCC1
NC1CCCCC1
OC1CCCCC1
c1ccccc1
Cc1ccccc1
CCc1ccccc1
Oc1ccccc1
COc1ccccc1
Nc1ccccc1
CNc1ccccc1
Fc1ccccc1
Cc1ccccc1C
Cc1ccc(C)cc1
Cc1cccc(C)c1
Oc1ccccc1O
Nc1ccccc1N
Fc1ccccc1F
Cc1ccccc1O
Oc1ccc(O)cc1
Nc1ccc(N)cc1
Fc1ccc(F)cc1
Cc1ccc(O)cc1
Cc1ccc(N)cc1
Cc1ccc(F)cc1
c1ccncc1
Cc1ccncc1
Nc1ccncc1
Oc1ccncc1
Fc1ccncc1
c1ccnnc1
c1cncnc1
c1cnccn1
Cc1cncnc1
N#Cc1ccccc1
O=Cc1ccccc1
CC(=O)c1ccccc1
OC(=O)c1ccccc1
COc1ccncc1
CCCC=O
CCCCO
CCCCCO
CCC(C)C
CCCC(C)C
CC(C)CC(C)C
OCC(C)C
OCC(C)(C)C
CC(O)C(C)O
COCC(C)O
CNCC(C)O
OCCCC
CC(F)C
CC(F)(F)C
NC(=O)CC
NC(=O)C(C)C
CNC(=O)CN
OC(=O)CCC
CCOC(=O)C
COC(=O)CC
CC(=O)OC(C)=O
""".strip().split("\n")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--corpus", default="data/corpus_9atom.smi")
    ap.add_argument("--out", default="tests/fixtures/fixture_input.smi")
    ap.add_argument("--extra", type=int, default=190, help="entries drawn from the corpus")
    ap.add_argument(
        "--skip-list",
        default=None,
        help="file of corpus molecules to exclude (aromaticity-perception divergences)",
    )
    args = ap.parse_args()

    rows: list[str] = []
    seen: set[str] = set()
    for smi in CURATED:
        smi = smi.strip()
        if not smi:
            continue
        try:
            key = canonical_smiles(parse(smi))
        except Exception as exc:  # curated entries must all parse
            print(f"curated entry rejected: {smi}: {exc}", file=sys.stderr)
            continue
        if key in seen:
            print(f"curated duplicate skipped: {smi}", file=sys.stderr)
            continue
        seen.add(key)
        rows.append(smi)

    skip = set()
    if args.skip_list:
        with open(args.skip_list) as fh:
            skip = {l.strip() for l in fh if l.strip()}

    taken = 0
    with open(args.corpus) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if taken >= args.extra:
                break
            if line in skip:
                continue
            key = canonical_smiles(parse(line))
            if key in seen:
                continue
            seen.add(key)
            rows.append(line)
            taken += 1

    with open(args.out, "w") as fh:
        fh.write("# fixture corpus input (curated + generated)\n")
        fh.write("\n".join(rows) + "\n")
    print(f"wrote {len(rows)} fixture candidates to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
