"""Molecular graph data model: one-hot nodes/bonds, decoding, validity.

A molecule occupies up to MAX_NODES atom slots. Empty slots carry the PAD
node type and only NONE bonds. Aromatic bonds count 1.5 toward valence and
must give every aromatic atom exactly two aromatic neighbors (2-regular
aromatic subgraphs are disjoint simple cycles, so no separate cycle check
is needed).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MAX_NODES = 9

ELEMENTS = ("C", "N", "O", "F")
PAD = 4  # node-type index for "no atom"
N_NODE_TYPES = 5

BOND_NONE, BOND_SINGLE, BOND_DOUBLE, BOND_TRIPLE, BOND_AROMATIC = range(5)
N_BOND_TYPES = 5
BOND_ORDER = {BOND_NONE: 0.0, BOND_SINGLE: 1.0, BOND_DOUBLE: 2.0, BOND_TRIPLE: 3.0, BOND_AROMATIC: 1.5}
BOND_SYMBOL = {BOND_SINGLE: "-", BOND_DOUBLE: "=", BOND_TRIPLE: "#", BOND_AROMATIC: ":"}

MAX_VALENCE = {"C": 4, "N": 3, "O": 2, "F": 1}
ATOMIC_NUMBER = {"C": 6, "N": 7, "O": 8, "F": 9}


@dataclass
class DenseGraphLogits:
    """Pre-softmax generator outputs for one molecule."""

    x_logits: np.ndarray  # (MAX_NODES, N_NODE_TYPES)
    a_logits: np.ndarray  # (MAX_NODES, MAX_NODES, N_BOND_TYPES)

    def __post_init__(self):
        self.x_logits = np.asarray(self.x_logits, dtype=np.float64)
        self.a_logits = np.asarray(self.a_logits, dtype=np.float64)
        if self.x_logits.shape != (MAX_NODES, N_NODE_TYPES):
            raise ValueError(f"x_logits shape {self.x_logits.shape}")
        if self.a_logits.shape != (MAX_NODES, MAX_NODES, N_BOND_TYPES):
            raise ValueError(f"a_logits shape {self.a_logits.shape}")
        if not (np.isfinite(self.x_logits).all() and np.isfinite(self.a_logits).all()):
            raise ValueError("logits must be finite")


class MolecularGraph:
    """One-hot node matrix X and symmetric one-hot adjacency tensor A."""

    __slots__ = ("X", "A")

    def __init__(self, X: np.ndarray, A: np.ndarray):
        self.X = np.asarray(X, dtype=np.uint8)
        self.A = np.asarray(A, dtype=np.uint8)
        if self.X.shape != (MAX_NODES, N_NODE_TYPES) or self.A.shape != (MAX_NODES, MAX_NODES, N_BOND_TYPES):
            raise ValueError(f"bad graph shapes {self.X.shape}, {self.A.shape}")

    @classmethod
    def from_types(cls, node_types, bonds) -> "MolecularGraph":
        """Build from a list of node-type indices and (i, j, bond_type) triples."""
        X = np.zeros((MAX_NODES, N_NODE_TYPES), dtype=np.uint8)
        A = np.zeros((MAX_NODES, MAX_NODES, N_BOND_TYPES), dtype=np.uint8)
        types = list(node_types) + [PAD] * (MAX_NODES - len(node_types))
        for i, t in enumerate(types):
            X[i, t] = 1
        A[:, :, BOND_NONE] = 1
        for i, j, k in bonds:
            A[i, j] = 0
            A[j, i] = 0
            A[i, j, k] = 1
            A[j, i, k] = 1
        return cls(X, A)

    @property
    def node_types(self) -> np.ndarray:
        return self.X.argmax(axis=1)

    @property
    def bond_types(self) -> np.ndarray:
        return self.A.argmax(axis=2)

    def heavy_atoms(self) -> list[int]:
        return [i for i, t in enumerate(self.node_types) if t != PAD]

    def element(self, i: int) -> str:
        return ELEMENTS[self.node_types[i]]

    def bond(self, i: int, j: int) -> int:
        return int(self.bond_types[i, j])

    def neighbors(self, i: int) -> list[tuple[int, int]]:
        """(neighbor, bond_type) pairs over non-NONE bonds."""
        row = self.bond_types[i]
        return [(j, int(row[j])) for j in range(MAX_NODES) if j != i and row[j] != BOND_NONE]

    def degree(self, i: int) -> int:
        return len(self.neighbors(i))

    def bond_order_sum(self, i: int) -> float:
        return sum(BOND_ORDER[k] for _, k in self.neighbors(i))

    def is_aromatic_atom(self, i: int) -> bool:
        return any(k == BOND_AROMATIC for _, k in self.neighbors(i))

    def implicit_hydrogens(self, i: int) -> int:
        free = MAX_VALENCE[self.element(i)] - self.bond_order_sum(i)
        return int(round(free)) if free > 0 else 0

    def copy(self) -> "MolecularGraph":
        return MolecularGraph(self.X.copy(), self.A.copy())

    def __eq__(self, other) -> bool:
        return isinstance(other, MolecularGraph) and np.array_equal(self.X, other.X) and np.array_equal(self.A, other.A)

    def __hash__(self):
        return hash((self.X.tobytes(), self.A.tobytes()))


def check_well_formed(g: MolecularGraph) -> list[str]:
    """Structural invariant violations (empty list when well formed)."""
    problems = []
    if not ((g.X.sum(axis=1) == 1).all()):
        problems.append("node rows must be one-hot")
    if not ((g.A.sum(axis=2) == 1).all()):
        problems.append("bond fibers must be one-hot")
    if not np.array_equal(g.A, g.A.transpose(1, 0, 2)):
        problems.append("adjacency must be symmetric")
    if not (g.bond_types.diagonal() == BOND_NONE).all():
        problems.append("diagonal must be NONE")
    types = g.node_types
    for i in range(MAX_NODES):
        if types[i] == PAD and g.degree(i) > 0:
            problems.append(f"PAD slot {i} has incident bonds")
    return problems


def relax(logits: DenseGraphLogits) -> tuple[np.ndarray, np.ndarray]:
    """Softmax-normalized (not argmaxed) node and bond tensors.

    The adjacency logits are symmetrized by averaging transposed fibers
    before the softmax, matching what the decode path does.
    """
    x = _softmax(logits.x_logits)
    a_sym = 0.5 * (logits.a_logits + logits.a_logits.transpose(1, 0, 2))
    a = _softmax(a_sym)
    return x, a


def _softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def decode_logits(logits: DenseGraphLogits) -> MolecularGraph:
    """Argmax decode of relaxed tensors into a well-formed graph.

    Ties break toward the lowest index. Structural projection afterwards
    keeps the graph invariants: NONE diagonal and no bonds on PAD slots.
    """
    x_prob, a_prob = relax(logits)
    node_types = x_prob.argmax(axis=1)
    bond_types = a_prob.argmax(axis=2)

    X = np.zeros((MAX_NODES, N_NODE_TYPES), dtype=np.uint8)
    X[np.arange(MAX_NODES), node_types] = 1
    A = np.zeros((MAX_NODES, MAX_NODES, N_BOND_TYPES), dtype=np.uint8)
    for i in range(MAX_NODES):
        for j in range(MAX_NODES):
            k = bond_types[i, j]
            if i == j or node_types[i] == PAD or node_types[j] == PAD:
                k = BOND_NONE
            A[i, j, k] = 1
    return MolecularGraph(X, A)


@dataclass
class ValidityReport:
    valid: bool
    reasons: list[str] = field(default_factory=list)
    atom_diagnostics: dict[int, str] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.valid


def valence_valid(g: MolecularGraph, require_connected: bool = True) -> ValidityReport:
    """Chemical validity: valence caps, aromatic ring rule, connectivity."""
    report = ValidityReport(valid=True)
    heavy = g.heavy_atoms()
    if not heavy:
        report.valid = False
        report.reasons.append("no atoms")
        return report

    for i in heavy:
        elem = g.element(i)
        order = g.bond_order_sum(i)
        if order > MAX_VALENCE[elem] + 1e-9:
            report.valid = False
            msg = f"{elem} valence {order:g} exceeds {MAX_VALENCE[elem]}"
            report.reasons.append(f"atom {i}: {msg}")
            report.atom_diagnostics[i] = msg
        n_arom = sum(1 for _, k in g.neighbors(i) if k == BOND_AROMATIC)
        if n_arom not in (0, 2):
            report.valid = False
            msg = f"{n_arom} aromatic neighbors (need exactly 2)"
            report.reasons.append(f"atom {i}: {msg}")
            report.atom_diagnostics[i] = msg

    if require_connected and len(heavy) > 1:
        seen = {heavy[0]}
        frontier = [heavy[0]]
        while frontier:
            i = frontier.pop()
            for j, _ in g.neighbors(i):
                if j not in seen:
                    seen.add(j)
                    frontier.append(j)
        if len(seen) != len(heavy):
            report.valid = False
            report.reasons.append(f"disconnected: {len(seen)} of {len(heavy)} atoms reachable")
    return report


def random_permute(g: MolecularGraph, seed: int | np.random.Generator) -> MolecularGraph:
    """Relabel atom slots by a seeded permutation, consistently on X and A."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    perm = rng.permutation(MAX_NODES)
    return apply_permutation(g, perm)


def apply_permutation(g: MolecularGraph, perm: np.ndarray) -> MolecularGraph:
    """New graph whose slot p[i] holds what slot i held."""
    perm = np.asarray(perm)
    inv = np.argsort(perm)
    return MolecularGraph(g.X[inv], g.A[np.ix_(inv, inv)])


# ---------------------------------------------------------------------------
# canonical ordering (iterative refinement + individualization)


def _refine(heavy: list[int], g: MolecularGraph, seed_labels: dict[int, tuple]) -> dict[int, int]:
    labels = dict(seed_labels)
    ranks = _dense_ranks(labels)
    while True:
        new_labels = {
            i: (ranks[i], tuple(sorted((k, ranks[j]) for j, k in g.neighbors(i))))
            for i in heavy
        }
        new_ranks = _dense_ranks(new_labels)
        if new_ranks == ranks:
            return ranks
        ranks = new_ranks


def _dense_ranks(labels: dict[int, tuple]) -> dict[int, int]:
    distinct = sorted(set(labels.values()))
    index = {lab: r for r, lab in enumerate(distinct)}
    return {i: index[lab] for i, lab in labels.items()}


def _signature(g: MolecularGraph, order: list[int]) -> tuple:
    pos = {atom: p for p, atom in enumerate(order)}
    elems = tuple(g.node_types[a] for a in order)
    bonds = tuple(
        g.bond(order[i], order[j]) for i in range(len(order)) for j in range(i + 1, len(order))
    )
    del pos
    return elems + bonds


def canonical_ranks(g: MolecularGraph) -> list[int]:
    """Heavy-atom indices in canonical order, invariant to relabeling.

    Refined Morgan-style ranks; remaining ties are broken by trying each
    tied atom and keeping the ordering with the lexicographically smallest
    (element, bond) signature.
    """
    heavy = g.heavy_atoms()
    if not heavy:
        return []
    base = {
        i: (int(g.node_types[i]), g.degree(i), int(round(2 * g.bond_order_sum(i))), g.implicit_hydrogens(i))
        for i in heavy
    }

    best: tuple | None = None
    best_order: list[int] | None = None

    def descend(labels: dict[int, tuple]):
        nonlocal best, best_order
        ranks = _refine(heavy, g, labels)
        cells: dict[int, list[int]] = {}
        for atom, r in ranks.items():
            cells.setdefault(r, []).append(atom)
        tied = [c for c in sorted(cells) if len(cells[c]) > 1]
        if not tied:
            order = sorted(heavy, key=lambda a: ranks[a])
            sig = _signature(g, order)
            if best is None or sig < best:
                best, best_order = sig, order
            return
        cell = cells[tied[0]]
        for atom in cell:
            bumped = dict(labels)
            bumped[atom] = labels[atom] + (-1,)
            descend(bumped)

    descend(base)
    assert best_order is not None
    return best_order
