"""Per-atom perception view used by the property calculators."""

from __future__ import annotations

from dataclasses import dataclass

from ..graphs import (
    BOND_AROMATIC,
    BOND_DOUBLE,
    BOND_SINGLE,
    BOND_TRIPLE,
    MolecularGraph,
)


@dataclass
class Neighbor:
    index: int
    element: str
    bond: int
    aromatic_atom: bool


@dataclass
class AtomView:
    index: int
    element: str
    aromatic: bool
    h: int  # implicit hydrogens
    neighbors: list[Neighbor]

    @property
    def degree(self) -> int:
        return len(self.neighbors)

    @property
    def connections(self) -> int:
        """Total connections including implicit hydrogens (SMARTS X count)."""
        return self.degree + self.h

    def bonds_of(self, kind: int) -> list[Neighbor]:
        return [n for n in self.neighbors if n.bond == kind]

    def count(self, kind: int) -> int:
        return sum(1 for n in self.neighbors if n.bond == kind)


def perceive(g: MolecularGraph) -> list[AtomView]:
    """AtomViews for heavy atoms, indexed by position in heavy_atoms()."""
    heavy = g.heavy_atoms()
    views = []
    for i in heavy:
        views.append(
            AtomView(
                index=i,
                element=g.element(i),
                aromatic=g.is_aromatic_atom(i),
                h=g.implicit_hydrogens(i),
                neighbors=[
                    Neighbor(j, g.element(j), k, g.is_aromatic_atom(j)) for j, k in g.neighbors(i)
                ],
            )
        )
    return views


def in_three_ring(g: MolecularGraph, i: int) -> bool:
    nbrs = [j for j, _ in g.neighbors(i)]
    for a in range(len(nbrs)):
        for b in range(a + 1, len(nbrs)):
            if g.bond(nbrs[a], nbrs[b]) != 0:
                return True
    return False


def ring_stats(g: MolecularGraph) -> tuple[int, list[int]]:
    """(cycle count, per-ring sizes) via shortest cycles through non-tree edges."""
    heavy = g.heavy_atoms()
    if not heavy:
        return 0, []
    adj = {i: [j for j, _ in g.neighbors(i)] for i in heavy}
    seen: set[int] = set()
    tree: set[tuple[int, int]] = set()
    extra: list[tuple[int, int]] = []
    for root in heavy:
        if root in seen:
            continue
        seen.add(root)
        frontier = [root]
        while frontier:
            u = frontier.pop()
            for v in adj[u]:
                key = (min(u, v), max(u, v))
                if v not in seen:
                    seen.add(v)
                    tree.add(key)
                    frontier.append(v)
                elif key not in tree and key not in extra:
                    extra.append(key)
    sizes = []
    for u, v in extra:
        sizes.append(_shortest_cycle(adj, u, v))
    return len(extra), sizes


def _shortest_cycle(adj: dict[int, list[int]], u: int, v: int) -> int:
    # BFS from u to v avoiding the direct edge
    dist = {u: 0}
    queue = [u]
    while queue:
        x = queue.pop(0)
        for y in adj[x]:
            if x == u and y == v:
                continue
            if y not in dist:
                dist[y] = dist[x] + 1
                if y == v:
                    return dist[y] + 1
                queue.append(y)
    return len(adj)  # fallback: treat as large ring


def aromatic_ring_count(g: MolecularGraph) -> int:
    """Connected components of the aromatic-bond subgraph."""
    heavy = g.heavy_atoms()
    arom_adj: dict[int, list[int]] = {}
    for i in heavy:
        nbrs = [j for j, k in g.neighbors(i) if k == BOND_AROMATIC]
        if nbrs:
            arom_adj[i] = nbrs
    seen: set[int] = set()
    components = 0
    for start in arom_adj:
        if start in seen:
            continue
        components += 1
        stack = [start]
        seen.add(start)
        while stack:
            u = stack.pop()
            for v in arom_adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
    return components
