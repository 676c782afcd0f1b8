"""Octanol-water partition coefficient by atom-contribution summation.

Each heavy atom is assigned the first matching type from the published
contribution scheme (restricted to C/N/O/F/H chemistry); implicit hydrogens
contribute through the type of their host atom.
"""

from __future__ import annotations

from ..graphs import (
    BOND_AROMATIC,
    BOND_DOUBLE,
    BOND_SINGLE,
    BOND_TRIPLE,
    MolecularGraph,
)
from .perceive import AtomView, Neighbor, perceive
from .tables import load_crippen


class AtomTypeError(ValueError):
    """An atom environment matched no contribution row."""


_HETERO = {"N", "O", "F"}


def _aliphatic(n: Neighbor) -> bool:
    return not n.aromatic_atom


def _aliphatic_c(n: Neighbor) -> bool:
    return n.element == "C" and not n.aromatic_atom


def _aliphatic_hetero(n: Neighbor) -> bool:
    return n.element in _HETERO and not n.aromatic_atom


def _carbon_type(av: AtomView) -> str:
    ns = av.neighbors
    if not av.aromatic:
        if av.h == 4:
            return "C1"
        if av.h == 3 and av.degree == 1:
            n = ns[0]
            if _aliphatic_c(n):
                return "C1"
            if _aliphatic_hetero(n):
                return "C3"
            if n.aromatic_atom and n.element == "C":
                return "C8"
            if n.aromatic_atom:
                return "C9"
        if av.h == 2 and av.degree == 2 and all(_aliphatic_c(n) for n in ns):
            return "C1"
        if av.h == 1 and av.degree == 3 and all(_aliphatic_c(n) for n in ns):
            return "C2"
        if av.h == 0 and av.degree == 4 and all(_aliphatic_c(n) for n in ns):
            return "C2"
        if av.connections == 4:  # sp3 with heteroatoms or aromatic neighbors
            if (
                av.h == 2
                and any(_aliphatic_hetero(n) for n in ns)
                and all(_aliphatic(n) for n in ns)
            ):
                return "C3"
            if (
                av.h in (0, 1)
                and any(_aliphatic_hetero(n) for n in ns)
                and all(_aliphatic(n) for n in ns)
            ):
                return "C4"
        if any(n.bond == BOND_DOUBLE and n.element != "C" and _aliphatic(n) for n in ns):
            return "C5"
        dbl_c = [n for n in ns if n.bond == BOND_DOUBLE and _aliphatic_c(n)]
        if dbl_c:
            others = [n for n in ns if n.bond != BOND_DOUBLE or not _aliphatic_c(n)]
            if av.h == 2:
                return "C6"
            if len(dbl_c) == 2 and av.h == 0:
                return "C6"
            if av.h in (0, 1) and all(_aliphatic(n) for n in others):
                return "C6"
            # vinyl carbon with an aromatic substituent
            if any(n.aromatic_atom for n in others):
                return "C26"
        if any(n.bond == BOND_DOUBLE and n.aromatic_atom for n in ns):
            return "C26"
        if av.connections == 2 and any(n.bond == BOND_TRIPLE and _aliphatic(n) for n in ns):
            return "C7"
        if av.connections == 4:
            if av.h == 2 and any(n.aromatic_atom for n in ns):
                return "C10"
            if av.h == 1 and any(n.aromatic_atom for n in ns):
                return "C11"
            if av.h == 0 and any(n.aromatic_atom for n in ns):
                return "C12"
        return "CS"
    # aromatic carbon
    if any(n.element == "F" for n in ns):
        return "C14"
    if av.h == 1:
        return "C18"
    if av.count(BOND_AROMATIC) == 3:
        return "C19"
    subst = [n for n in ns if n.bond != BOND_AROMATIC]
    for n in subst:
        if n.bond == BOND_SINGLE and n.aromatic_atom:
            return "C20"
        if n.bond == BOND_SINGLE and _aliphatic_c(n):
            return "C21"
        if n.bond == BOND_SINGLE and n.element == "N" and _aliphatic(n):
            return "C22"
        if n.bond == BOND_SINGLE and n.element == "O" and _aliphatic(n):
            return "C23"
        if n.bond == BOND_DOUBLE and n.element in ("C", "N", "O"):
            return "C25"
    return "CS"


def _nitrogen_type(av: AtomView) -> str:
    if av.aromatic:
        return "N11"
    ns = av.neighbors
    if av.h == 2 and av.degree == 1:
        if _aliphatic(ns[0]):
            return "N1"
        if ns[0].aromatic_atom:
            return "N3"
    if av.h == 1 and av.degree == 2:
        if all(_aliphatic(n) for n in ns):
            return "N2"
        if any(n.aromatic_atom for n in ns):
            return "N4"
    if av.h == 1 and any(n.bond == BOND_DOUBLE for n in ns):
        return "N5"
    if av.h == 0 and any(n.bond == BOND_DOUBLE for n in ns) and av.degree >= 2:
        return "N6"
    if av.h == 0 and av.degree == 3:
        if all(_aliphatic(n) for n in ns):
            return "N7"
        if any(n.aromatic_atom for n in ns):
            return "N8"
    if av.h == 0 and any(n.bond == BOND_TRIPLE and _aliphatic(n) for n in ns):
        return "N9"
    return "NS"


def _oxygen_type(av: AtomView, atoms_by_index: dict[int, AtomView]) -> str:
    if av.aromatic:
        return "O1"
    ns = av.neighbors
    if av.h >= 1:
        return "O2"
    if av.degree == 2 and all(_aliphatic(n) for n in ns):
        return "O3"
    if av.degree == 2 and any(n.aromatic_atom for n in ns):
        return "O4"
    dbl = [n for n in ns if n.bond == BOND_DOUBLE]
    if dbl:
        partner = dbl[0]
        if partner.element in ("N", "O"):
            return "O5"
        if partner.aromatic_atom:
            return "O8"
        if partner.element == "C":
            cc = atoms_by_index[partner.index]
            others = [n for n in cc.neighbors if n.index != av.index]
            if cc.h == 2 and not others:
                return "O9"  # formaldehyde
            if cc.h == 1 and len(others) == 1:
                o = others[0]
                if _aliphatic_c(o):
                    return "O9"
                if o.element in ("N", "O") and _aliphatic(o):
                    return "O9"
                if o.aromatic_atom and o.element == "C":
                    return "O10"
            if cc.h == 0 and len(others) == 2:
                if others[0].bond == BOND_DOUBLE and others[0].element == "O":
                    return "O9"  # O=C=O
                if others[1].bond == BOND_DOUBLE and others[1].element == "O":
                    return "O9"
                has_aliph_c = any(_aliphatic_c(o) for o in others)
                all_aliph = all(_aliphatic(o) for o in others)
                if has_aliph_c and all_aliph:
                    return "O9"
                if any(o.element == "C" for o in others) and any(o.aromatic_atom for o in others):
                    return "O10"
                if any(o.aromatic_atom and o.element == "C" for o in others) and all(
                    not o.aromatic_atom or o.element == "C" for o in others
                ):
                    return "O10"
                if all(o.element not in ("C",) for o in others):
                    return "O11"
    return "OS"


def _hydrogen_type(av: AtomView, atoms_by_index: dict[int, AtomView]) -> str:
    if av.element == "C":
        return "H1"
    if av.element == "N":
        return "H3"
    if av.element == "O":
        if av.degree == 0:
            return "HS"
        n = av.neighbors[0]
        if n.element == "C":
            host = atoms_by_index[n.index]
            if host.aromatic or host.connections == 4:
                return "H2"
            if any(
                m.bond == BOND_DOUBLE and m.element in ("C", "N", "O") for m in host.neighbors
            ):
                return "H4"
            return "HS"
        if n.element == "N":
            return "H3"
        if n.element == "O":
            return "H4"
        return "H2"
    return "HS"


def atom_types(g: MolecularGraph) -> dict[int, str]:
    """Contribution type per heavy atom index."""
    views = perceive(g)
    by_index = {v.index: v for v in views}
    out: dict[int, str] = {}
    for av in views:
        if av.element == "C":
            out[av.index] = _carbon_type(av)
        elif av.element == "N":
            out[av.index] = _nitrogen_type(av)
        elif av.element == "O":
            out[av.index] = _oxygen_type(av, by_index)
        elif av.element == "F":
            out[av.index] = "F"
        else:
            raise AtomTypeError(f"unsupported element {av.element}")
    return out


_TABLE: dict[str, float] | None = None


def _table() -> dict[str, float]:
    global _TABLE
    if _TABLE is None:
        _TABLE = load_crippen()
    return _TABLE


def crippen_logp(g: MolecularGraph) -> float:
    """Sum of heavy-atom and implicit-hydrogen contributions."""
    table = _table()
    views = perceive(g)
    by_index = {v.index: v for v in views}
    total = 0.0
    for i, t in atom_types(g).items():
        if t not in table:
            raise AtomTypeError(f"no contribution for type {t} (atom {i})")
        total += table[t]
    for av in views:
        if av.h:
            ht = _hydrogen_type(av, by_index)
            total += av.h * table[ht]
    return total
