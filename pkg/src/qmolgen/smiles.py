"""SMILES subset parser and writer for up-to-nine-atom C/N/O/F molecules.

Supported grammar: atoms C N O F (aromatic c n o), bonds - = # :, branches,
single-digit ring closures (optionally preceded by a bond symbol at either
end). Hydrogens stay implicit. Everything else is a structured parse error
carrying the character offset.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import (
    BOND_AROMATIC,
    BOND_DOUBLE,
    BOND_NONE,
    BOND_SINGLE,
    BOND_SYMBOL,
    BOND_TRIPLE,
    ELEMENTS,
    MAX_NODES,
    MolecularGraph,
    canonical_ranks,
    valence_valid,
)


class SmilesError(ValueError):
    """Parse or write failure with the offending character offset."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        suffix = f" (at position {offset})" if offset is not None else ""
        super().__init__(message + suffix)


_BOND_CHARS = {"-": BOND_SINGLE, "=": BOND_DOUBLE, "#": BOND_TRIPLE, ":": BOND_AROMATIC}
_ELEMENT_INDEX = {sym: i for i, sym in enumerate(ELEMENTS)}
_AROMATIC_OK = {"C", "N", "O"}


@dataclass
class _Atom:
    element: str
    aromatic: bool
    offset: int


def parse(s: str) -> MolecularGraph:
    """Parse a SMILES string into a molecular graph."""
    if not isinstance(s, str) or len(s) == 0:
        raise SmilesError("empty SMILES string", 0)

    atoms: list[_Atom] = []
    bonds: dict[tuple[int, int], int] = {}
    prev: int | None = None
    pending_bond: int | None = None
    branch_stack: list[int] = []
    open_rings: dict[str, tuple[int, int | None, int]] = {}  # digit -> (atom, bond, offset)

    def add_bond(i: int, j: int, kind: int, offset: int) -> None:
        if i == j:
            raise SmilesError("self bond", offset)
        key = (min(i, j), max(i, j))
        if key in bonds:
            raise SmilesError("duplicate bond between atoms", offset)
        bonds[key] = kind

    for pos, ch in enumerate(s):
        if ch in ("C", "N", "O", "F", "c", "n", "o"):
            aromatic = ch.islower()
            element = ch.upper()
            if aromatic and element not in _AROMATIC_OK:
                raise SmilesError(f"element {element} cannot be aromatic", pos)
            if len(atoms) >= MAX_NODES:
                raise SmilesError(f"more than {MAX_NODES} heavy atoms", pos)
            atoms.append(_Atom(element, aromatic, pos))
            idx = len(atoms) - 1
            if prev is not None:
                kind = pending_bond
                if kind is None:
                    kind = BOND_AROMATIC if (atoms[prev].aromatic and aromatic) else BOND_SINGLE
                add_bond(prev, idx, kind, pos)
            prev = idx
            pending_bond = None
        elif ch in _BOND_CHARS:
            if pending_bond is not None:
                raise SmilesError("two consecutive bond symbols", pos)
            if prev is None:
                raise SmilesError("bond symbol before any atom", pos)
            pending_bond = _BOND_CHARS[ch]
        elif ch == "(":
            if prev is None:
                raise SmilesError("branch before any atom", pos)
            if pending_bond is not None:
                raise SmilesError("dangling bond before branch", pos)
            branch_stack.append(prev)
        elif ch == ")":
            if not branch_stack:
                raise SmilesError("unmatched closing parenthesis", pos)
            if pending_bond is not None:
                raise SmilesError("dangling bond before closing parenthesis", pos)
            prev = branch_stack.pop()
        elif ch.isdigit():
            if ch == "0":
                raise SmilesError("ring closure digit 0 is not allowed", pos)
            if prev is None:
                raise SmilesError("ring closure before any atom", pos)
            if ch in open_rings:
                other, opened_bond, _ = open_rings.pop(ch)
                if other == prev:
                    raise SmilesError("ring closure to the same atom", pos)
                kind = pending_bond
                if kind is not None and opened_bond is not None and kind != opened_bond:
                    raise SmilesError("conflicting ring closure bonds", pos)
                if kind is None:
                    kind = opened_bond
                if kind is None:
                    kind = (
                        BOND_AROMATIC
                        if (atoms[other].aromatic and atoms[prev].aromatic)
                        else BOND_SINGLE
                    )
                add_bond(other, prev, kind, pos)
            else:
                open_rings[ch] = (prev, pending_bond, pos)
            pending_bond = None
        else:
            raise SmilesError(f"unsupported element or character {ch!r}", pos)

    if branch_stack:
        raise SmilesError("unclosed parenthesis", len(s) - 1)
    if pending_bond is not None:
        raise SmilesError("dangling bond at end of string", len(s) - 1)
    if open_rings:
        digit, (_, _, where) = sorted(open_rings.items())[0]
        raise SmilesError(f"unmatched ring closure digit {digit}", where)

    g = MolecularGraph.from_types(
        [_ELEMENT_INDEX[a.element] for a in atoms],
        [(i, j, k) for (i, j), k in bonds.items()],
    )

    # lowercase atoms must sit in an aromatic ring once bonds are known
    arom_counts = [0] * len(atoms)
    for (i, j), k in bonds.items():
        if k == BOND_AROMATIC:
            arom_counts[i] += 1
            arom_counts[j] += 1
    for idx, atom in enumerate(atoms):
        if atom.aromatic and arom_counts[idx] != 2:
            raise SmilesError("aromatic atom outside an aromatic ring", atom.offset)
        if not atom.aromatic and arom_counts[idx] > 0:
            raise SmilesError("aromatic bond on a non-aromatic atom", atom.offset)

    report = valence_valid(g)
    if not report.valid:
        bad = min(report.atom_diagnostics) if report.atom_diagnostics else 0
        offset = atoms[bad].offset if bad < len(atoms) else 0
        raise SmilesError(f"valence violation: {report.reasons[0]}", offset)
    return g


def write(g: MolecularGraph, order: list[int] | None = None) -> str:
    """Emit SMILES by depth-first traversal following the given atom order."""
    report = valence_valid(g)
    if not report.valid:
        raise ValueError(f"cannot write invalid graph: {'; '.join(report.reasons)}")
    if order is None:
        order = g.heavy_atoms()
    priority = {atom: p for p, atom in enumerate(order)}

    # first pass: classify tree vs ring-closure edges along the emission DFS
    visited: set[int] = set()
    tree_children: dict[int, list[int]] = {a: [] for a in order}
    ring_bonds: list[tuple[int, int]] = []

    def explore(u: int) -> None:
        visited.add(u)
        for v, _ in sorted(g.neighbors(u), key=lambda t: priority[t[0]]):
            if v not in visited:
                tree_children[u].append(v)
                explore(v)
            elif all({u, v} != {a, b} for a, b in ring_bonds) and v not in tree_children.get(u, []) and u not in tree_children.get(v, []):
                ring_bonds.append((v, u))

    root = order[0]
    explore(root)

    digits: dict[tuple[int, int], str] = {}
    per_atom_rings: dict[int, list[tuple[str, int, bool]]] = {a: [] for a in order}
    next_digit = 1
    for v, u in ring_bonds:  # v was discovered first
        d = str(next_digit)
        next_digit += 1
        kind = g.bond(u, v)
        default = BOND_AROMATIC if (g.is_aromatic_atom(u) and g.is_aromatic_atom(v)) else BOND_SINGLE
        explicit = kind != default
        per_atom_rings[v].append((d, kind, explicit))
        per_atom_rings[u].append((d, kind, explicit))
        digits[(min(u, v), max(u, v))] = d

    out: list[str] = []

    def bond_text(kind: int, u: int, v: int) -> str:
        if kind == BOND_SINGLE:
            # single bond between two aromatic atoms must be explicit
            return "-" if (g.is_aromatic_atom(u) and g.is_aromatic_atom(v)) else ""
        if kind == BOND_AROMATIC:
            return ""
        return BOND_SYMBOL[kind]

    def emit(u: int) -> None:
        sym = g.element(u)
        out.append(sym.lower() if g.is_aromatic_atom(u) else sym)
        for d, kind, explicit in per_atom_rings[u]:
            if explicit:
                out.append(BOND_SYMBOL[kind])
            out.append(d)
        children = tree_children[u]
        for child in children[:-1]:
            out.append("(")
            out.append(bond_text(g.bond(u, child), u, child))
            emit(child)
            out.append(")")
        if children:
            child = children[-1]
            out.append(bond_text(g.bond(u, child), u, child))
            emit(child)

    emit(root)
    return "".join(out)


def canonical_smiles(g: MolecularGraph) -> str:
    """Order-invariant SMILES key used for uniqueness and novelty."""
    return write(g, canonical_ranks(g))
