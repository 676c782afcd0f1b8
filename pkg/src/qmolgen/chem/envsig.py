"""Atom-environment signatures shared by the SA table and diversity metric.

sig_0 = element (lowercase when aromatic); sig_r = sig_{r-1} plus the sorted
list of (bond char, neighbor sig_{r-1}). Radii above zero exist only for
atoms with at least one neighbor.
"""

from __future__ import annotations

from ..graphs import BOND_AROMATIC, BOND_DOUBLE, BOND_TRIPLE, MolecularGraph

_BOND_CHAR = {1: "-", 2: "=", 3: "#", BOND_AROMATIC: ":"}


def bond_char(kind: int) -> str:
    return _BOND_CHAR.get(kind, "-")


def environment_signatures(g: MolecularGraph, max_radius: int = 2) -> list[str]:
    """Multiset of signatures over all heavy atoms and radii 0..max_radius."""
    heavy = g.heavy_atoms()
    sig: dict[int, dict[int, str]] = {0: {}}
    for i in heavy:
        el = g.element(i)
        sig[0][i] = el.lower() if g.is_aromatic_atom(i) else el
    for r in range(1, max_radius + 1):
        sig[r] = {}
        for i in heavy:
            nbrs = g.neighbors(i)
            if not nbrs:
                continue
            parts = sorted(bond_char(k) + sig[r - 1][j] for j, k in nbrs)
            sig[r][i] = f"{sig[r - 1][i]}({','.join(parts)})"
    out: list[str] = []
    for i in heavy:
        out.append(sig[0][i])
        for r in range(1, max_radius + 1):
            if i in sig[r]:
                out.append(sig[r][i])
    return out


def fingerprint(g: MolecularGraph, max_radius: int = 2) -> frozenset[str]:
    """Unique environment set; Tanimoto over these drives the diversity metric."""
    return frozenset(environment_signatures(g, max_radius))


def tanimoto(a: frozenset[str], b: frozenset[str]) -> float:
    if not a and not b:
        return 1.0
    union = len(a | b)
    return len(a & b) / union if union else 1.0
