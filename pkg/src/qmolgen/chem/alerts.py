"""Structural alert predicates over molecular graphs.

Each named predicate mirrors one motif from the shipped alert list; the
alert count used by the drug-likeness score is the number of motifs present
at least once.
"""

from __future__ import annotations

from typing import Callable

from ..graphs import (
    BOND_DOUBLE,
    BOND_SINGLE,
    BOND_TRIPLE,
    MolecularGraph,
)
from .perceive import AtomView, in_three_ring, perceive
from .tables import load_alert_names


def _pairs(views, elem_a, elem_b, kind):
    for av in views:
        if av.element != elem_a or av.aromatic:
            continue
        for n in av.neighbors:
            if n.element == elem_b and n.bond == kind and not n.aromatic_atom:
                yield av, n


def _has_pair(views, elem_a, elem_b, kind) -> bool:
    return any(True for _ in _pairs(views, elem_a, elem_b, kind))


def _m_peroxide(g, views):
    return _has_pair(views, "O", "O", BOND_SINGLE)


def _m_hydrazine(g, views):
    return _has_pair(views, "N", "N", BOND_SINGLE)


def _m_azo(g, views):
    return _has_pair(views, "N", "N", BOND_DOUBLE)


def _m_n_o_single(g, views):
    return _has_pair(views, "N", "O", BOND_SINGLE)


def _m_aldehyde(g, views):
    for av in views:
        if av.element == "C" and not av.aromatic and av.h == 1:
            has_carbonyl = any(n.element == "O" and n.bond == BOND_DOUBLE for n in av.neighbors)
            has_c = any(n.element == "C" for n in av.neighbors)
            if has_carbonyl and has_c:
                return True
    return False


def _m_formaldehyde_like(g, views):
    return any(
        av.element == "C"
        and not av.aromatic
        and av.h == 2
        and any(n.element == "O" and n.bond == BOND_DOUBLE for n in av.neighbors)
        for av in views
    )


def _m_dicarbonyl_1_2(g, views):
    carbonyl = {
        av.index
        for av in views
        if av.element == "C"
        and not av.aromatic
        and any(n.element == "O" and n.bond == BOND_DOUBLE for n in av.neighbors)
    }
    for av in views:
        if av.index in carbonyl:
            for n in av.neighbors:
                if n.index in carbonyl and n.bond == BOND_SINGLE:
                    return True
    return False


def _cumulated(views, left_elem, right_elem):
    for av in views:
        if av.element != "C" or av.aromatic or av.h != 0:
            continue
        doubles = [n for n in av.neighbors if n.bond == BOND_DOUBLE]
        if len(doubles) == 2:
            elems = sorted(n.element for n in doubles)
            if elems == sorted([left_elem, right_elem]):
                return True
    return False


def _m_isocyanate(g, views):
    return _cumulated(views, "N", "O")


def _m_carbodiimide(g, views):
    return _cumulated(views, "N", "N")


def _m_allene(g, views):
    return _cumulated(views, "C", "C")


def _m_alkyne(g, views):
    return _has_pair(views, "C", "C", BOND_TRIPLE)


def _m_imine(g, views):
    return _has_pair(views, "C", "N", BOND_DOUBLE)


def _m_epoxide(g, views):
    return any(av.element == "O" and not av.aromatic and in_three_ring(g, av.index) for av in views)


def _m_aziridine(g, views):
    return any(av.element == "N" and not av.aromatic and in_three_ring(g, av.index) for av in views)


def _m_acyclic_diene(g, views):
    vinyl = {
        av.index: [n.index for n in av.neighbors if n.element == "C" and n.bond == BOND_DOUBLE and not n.aromatic_atom]
        for av in views
        if av.element == "C" and not av.aromatic
    }
    for av in views:
        if av.index not in vinyl or not vinyl[av.index]:
            continue
        for n in av.neighbors:
            if n.bond == BOND_SINGLE and n.index in vinyl and vinyl[n.index]:
                if set(vinyl[av.index]) != {n.index} and set(vinyl[n.index]) != {av.index}:
                    return True
    return False


def _m_enol_ether(g, views):
    for av, n in _pairs(views, "O", "C", BOND_SINGLE):
        carbon = next(v for v in views if v.index == n.index)
        if any(m.element == "C" and m.bond == BOND_DOUBLE and not m.aromatic_atom for m in carbon.neighbors):
            return True
    return False


def _m_gem_dioxy(g, views):
    for av in views:
        if av.element == "C" and not av.aromatic and av.connections == 4:
            n_o = sum(1 for n in av.neighbors if n.element == "O" and n.bond == BOND_SINGLE)
            if n_o >= 2:
                return True
    return False


def _m_cyclopropene(g, views):
    for av in views:
        if (
            av.element == "C"
            and not av.aromatic
            and av.connections == 3
            and any(n.bond == BOND_DOUBLE for n in av.neighbors)
            and in_three_ring(g, av.index)
        ):
            return True
    return False


_PREDICATES: dict[str, Callable] = {
    "peroxide": _m_peroxide,
    "hydrazine": _m_hydrazine,
    "azo": _m_azo,
    "n_o_single": _m_n_o_single,
    "aldehyde": _m_aldehyde,
    "formaldehyde_like": _m_formaldehyde_like,
    "dicarbonyl_1_2": _m_dicarbonyl_1_2,
    "isocyanate": _m_isocyanate,
    "carbodiimide": _m_carbodiimide,
    "allene": _m_allene,
    "alkyne": _m_alkyne,
    "imine": _m_imine,
    "epoxide": _m_epoxide,
    "aziridine": _m_aziridine,
    "acyclic_diene": _m_acyclic_diene,
    "enol_ether": _m_enol_ether,
    "gem_dioxy": _m_gem_dioxy,
    "cyclopropene": _m_cyclopropene,
}

_ACTIVE: list[str] | None = None


def active_alerts() -> list[str]:
    global _ACTIVE
    if _ACTIVE is None:
        names = load_alert_names()
        unknown = [n for n in names if n not in _PREDICATES]
        if unknown:
            raise ValueError(f"alert list names unknown patterns: {unknown}")
        _ACTIVE = names
    return _ACTIVE


def alert_count(g: MolecularGraph) -> int:
    """Number of active alert motifs present in the molecule."""
    views = perceive(g)
    return sum(1 for name in active_alerts() if _PREDICATES[name](g, views))
