"""Synthetic-accessibility estimate: fragment rarity + complexity penalties.

The fragment table maps radius<=2 atom-environment signatures to the number
of training molecules containing them. Rarity of a molecule is the mean
log10 relative frequency of its environments (clipped below); complexity
adds size, cycle, and strained-ring penalties. The result is mapped
affinely to [1, 10], 1 = easy to synthesize.
"""

from __future__ import annotations

import math

from ..graphs import MolecularGraph
from .envsig import environment_signatures
from .perceive import ring_stats
from .tables import load_sa_fragments

RARITY_FLOOR = -4.0


class FragmentTable:
    def __init__(self, counts: dict[str, int], max_count: int | None = None):
        if not counts:
            raise ValueError("empty fragment table")
        self.counts = counts
        self.max_count = max_count if max_count is not None else max(counts.values())

    @classmethod
    def from_graphs(cls, graphs) -> "FragmentTable":
        counts: dict[str, int] = {}
        for g in graphs:
            for sig in set(environment_signatures(g)):
                counts[sig] = counts.get(sig, 0) + 1
        return cls(counts)

    @classmethod
    def load_default(cls) -> "FragmentTable":
        counts, max_count = load_sa_fragments()
        return cls(counts, max_count)

    def rarity(self, sig: str) -> float:
        c = self.counts.get(sig)
        if not c:
            return RARITY_FLOOR
        return max(math.log10(c / self.max_count), RARITY_FLOOR)


def sa_score(g: MolecularGraph, table: FragmentTable) -> float:
    sigs = environment_signatures(g)
    fragment_score = sum(table.rarity(s) for s in sigs) / len(sigs) if sigs else 0.0

    n = len(g.heavy_atoms())
    n_cycles, sizes = ring_stats(g)
    size_penalty = n**1.005 - n
    cycle_penalty = math.log10(n_cycles + 1)
    strain_penalty = 0.5 * sum(1 for s in sizes if s <= 4)
    macro_penalty = math.log10(2) if any(s >= 9 for s in sizes) else 0.0
    penalty = size_penalty + cycle_penalty + strain_penalty + macro_penalty

    raw = fragment_score - 0.25 * penalty
    score = 1.0 + 9.0 * (-raw) / 4.0
    return min(max(score, 1.0), 10.0)
