"""Molecular descriptors feeding the drug-likeness score."""

from __future__ import annotations

from dataclasses import dataclass

from ..graphs import (
    BOND_AROMATIC,
    BOND_SINGLE,
    MolecularGraph,
)
from .alerts import alert_count
from .crippen import crippen_logp
from .perceive import aromatic_ring_count, in_three_ring, perceive, ring_stats
from .tables import load_tpsa

ATOMIC_MASS = {"C": 12.011, "N": 14.007, "O": 15.999, "F": 18.998, "H": 1.008}


@dataclass
class DescriptorSet:
    mw: float
    logp: float
    hba: int
    hbd: int
    tpsa: float
    rotb: int
    aromatic_rings: int
    alerts: int


def molecular_weight(g: MolecularGraph) -> float:
    total = 0.0
    for i in g.heavy_atoms():
        total += ATOMIC_MASS[g.element(i)] + ATOMIC_MASS["H"] * g.implicit_hydrogens(i)
    return total


def hbond_acceptors(g: MolecularGraph) -> int:
    """Count of nitrogen and oxygen atoms."""
    return sum(1 for i in g.heavy_atoms() if g.element(i) in ("N", "O"))


def hbond_donors(g: MolecularGraph) -> int:
    """Count of N/O atoms carrying at least one implicit hydrogen."""
    return sum(
        1
        for i in g.heavy_atoms()
        if g.element(i) in ("N", "O") and g.implicit_hydrogens(i) > 0
    )


_TPSA: dict[str, float] | None = None


def _tpsa_table() -> dict[str, float]:
    global _TPSA
    if _TPSA is None:
        _TPSA = load_tpsa()
    return _TPSA


def tpsa(g: MolecularGraph) -> float:
    """Ertl fragment TPSA over N/O environments; unmatched environments add 0."""
    table = _tpsa_table()
    total = 0.0
    for av in perceive(g):
        if av.element not in ("N", "O"):
            continue
        if av.aromatic:
            key = f"{av.element.lower()},1,{av.h},2ar,0"
        else:
            s = av.count(BOND_SINGLE)
            d = av.count(2)
            t = av.count(3)
            ring3 = 1 if in_three_ring(g, av.index) else 0
            if t:
                bondkey = f"{t}t"
            elif d and s:
                bondkey = f"{s}s{d}d"
            elif d:
                bondkey = f"{d}d"
            else:
                bondkey = f"{s}s"
            key = f"{av.element},0,{av.h},{bondkey},{ring3}"
            if key not in table and ring3:
                key = f"{av.element},0,{av.h},{bondkey},0"
        total += table.get(key, 0.0)
    return total


def rotatable_bonds(g: MolecularGraph) -> int:
    """Non-ring single bonds between heavy atoms of degree >= 2."""
    _, ring_sizes = ring_stats(g)
    ring_edges = _ring_edge_set(g)
    count = 0
    heavy = g.heavy_atoms()
    for i in heavy:
        for j, kind in g.neighbors(i):
            if j <= i or kind != BOND_SINGLE:
                continue
            if (i, j) in ring_edges:
                continue
            if g.degree(i) >= 2 and g.degree(j) >= 2:
                count += 1
    return count


def _ring_edge_set(g: MolecularGraph) -> set[tuple[int, int]]:
    """Edges on some cycle: iteratively strip degree-1 vertices."""
    heavy = set(g.heavy_atoms())
    adj = {i: {j for j, _ in g.neighbors(i)} for i in heavy}
    changed = True
    while changed:
        changed = False
        for i in list(heavy):
            if i in adj and len(adj[i]) <= 1:
                for j in adj[i]:
                    adj[j].discard(i)
                del adj[i]
                heavy.discard(i)
                changed = True
    edges = set()
    for i in adj:
        for j in adj[i]:
            edges.add((min(i, j), max(i, j)))
    return edges


def compute_descriptors(g: MolecularGraph) -> DescriptorSet:
    return DescriptorSet(
        mw=molecular_weight(g),
        logp=crippen_logp(g),
        hba=hbond_acceptors(g),
        hbd=hbond_donors(g),
        tpsa=tpsa(g),
        rotb=rotatable_bonds(g),
        aromatic_rings=aromatic_ring_count(g),
        alerts=alert_count(g),
    )
