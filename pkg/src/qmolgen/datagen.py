"""Seeded random generation of valid molecular graphs.

Used to build the bundled corpus and as a fuzz source in tests. Aromatic
systems are restricted to six-membered rings with at most two nitrogens so
every emitted molecule is also digestible by mainstream toolkits.
"""

from __future__ import annotations

import numpy as np

from .graphs import (
    BOND_AROMATIC,
    BOND_DOUBLE,
    BOND_SINGLE,
    BOND_TRIPLE,
    MAX_VALENCE,
    MolecularGraph,
    valence_valid,
)

ELEMENT_IDX = {"C": 0, "N": 1, "O": 2, "F": 3}
ELEMENT_POOL = ["C"] * 62 + ["N"] * 13 + ["O"] * 18 + ["F"] * 7


def random_molecule(rng: np.random.Generator) -> MolecularGraph | None:
    if rng.random() < 0.18:
        return aromatic_molecule(rng)
    n = int(rng.integers(2, 10))
    elements = [str(rng.choice(ELEMENT_POOL)) for _ in range(n)]
    if all(e == "F" for e in elements):
        elements[0] = "C"
    capacity = [MAX_VALENCE[e] for e in elements]
    bonds: list[tuple[int, int, int]] = []
    used = [0.0] * n

    # spanning tree
    for i in range(1, n):
        candidates = [j for j in range(i) if used[j] < capacity[j]]
        if not candidates:
            return None
        j = int(rng.choice(candidates))
        bonds.append((j, i, BOND_SINGLE))
        used[j] += 1
        used[i] += 1

    # occasional ring edge
    if n >= 3 and rng.random() < 0.45:
        bonded = {(min(a, b), max(a, b)) for a, b, _ in bonds}
        open_atoms = [i for i in range(n) if used[i] < capacity[i]]
        rng.shuffle(open_atoms)
        for a in open_atoms:
            partners = [
                b
                for b in open_atoms
                if b > a and (a, b) not in bonded and abs(b - a) >= 2 and used[b] < capacity[b]
            ]
            if partners:
                b = int(rng.choice(partners))
                bonds.append((a, b, BOND_SINGLE))
                used[a] += 1
                used[b] += 1
                break

    # upgrade some bonds to double/triple where capacity allows
    order_value = {BOND_SINGLE: 1, BOND_DOUBLE: 2, BOND_TRIPLE: 3}
    for idx, (a, b, kind) in enumerate(bonds):
        if rng.random() < 0.3:
            room = min(capacity[a] - used[a], capacity[b] - used[b])
            if room >= 2 and rng.random() < 0.25:
                bonds[idx] = (a, b, BOND_TRIPLE)
            elif room >= 1:
                bonds[idx] = (a, b, BOND_DOUBLE)
            added = order_value[bonds[idx][2]] - 1
            used[a] += added
            used[b] += added

    g = MolecularGraph.from_types([ELEMENT_IDX[e] for e in elements], bonds)
    return g if valence_valid(g).valid else None


def aromatic_molecule(rng: np.random.Generator) -> MolecularGraph | None:
    """Benzene-like core (0-2 ring nitrogens) with up to 3 substituents."""
    n_ring_n = int(rng.integers(0, 3))
    ring_elems = ["C"] * 6
    for pos in rng.choice(6, size=n_ring_n, replace=False):
        ring_elems[pos] = "N"
    elements = list(ring_elems)
    bonds = [(i, (i + 1) % 6, BOND_AROMATIC) for i in range(6)]
    n_sub = int(rng.integers(0, 4)) if n_ring_n == 0 else int(rng.integers(0, 3))
    carbon_slots = [i for i, e in enumerate(ring_elems) if e == "C"]
    rng.shuffle(carbon_slots)
    for slot in carbon_slots[:n_sub]:
        if len(elements) >= 9:
            break
        sub = str(rng.choice(["C", "N", "O", "F", "C", "O"]))
        elements.append(sub)
        bonds.append((slot, len(elements) - 1, BOND_SINGLE))
        # occasionally extend a carbon substituent by one more atom
        if sub == "C" and len(elements) < 9 and rng.random() < 0.4:
            tail = str(rng.choice(["C", "N", "O", "F"]))
            elements.append(tail)
            kind = BOND_DOUBLE if tail == "O" and rng.random() < 0.4 else BOND_SINGLE
            bonds.append((len(elements) - 2, len(elements) - 1, kind))
    g = MolecularGraph.from_types([ELEMENT_IDX[e] for e in elements], bonds)
    return g if valence_valid(g).valid else None


