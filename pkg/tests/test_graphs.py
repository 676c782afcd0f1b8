import numpy as np
import pytest

from qmolgen import graphs as mg
from qmolgen.graphs import (
    BOND_AROMATIC,
    BOND_DOUBLE,
    BOND_NONE,
    BOND_SINGLE,
    BOND_TRIPLE,
    PAD,
    DenseGraphLogits,
    MolecularGraph,
    apply_permutation,
    canonical_ranks,
    check_well_formed,
    decode_logits,
    random_permute,
    relax,
    valence_valid,
)


def graph_from(elements: str, bonds) -> MolecularGraph:
    idx = {"C": 0, "N": 1, "O": 2, "F": 3}
    return MolecularGraph.from_types([idx[e] for e in elements], bonds)


def rand_logits(rng) -> DenseGraphLogits:
    return DenseGraphLogits(
        rng.normal(size=(mg.MAX_NODES, mg.N_NODE_TYPES)),
        rng.normal(size=(mg.MAX_NODES, mg.MAX_NODES, mg.N_BOND_TYPES)),
    )


class TestDecode:
    def test_argmax_picks_largest_logit(self):
        x = np.zeros((9, 5))
        x[0] = [2.0, -1.0, 0.1, 0.0, 0.0]
        x[1:, PAD] = 5.0
        logits = DenseGraphLogits(x, np.zeros((9, 9, 5)))
        g = decode_logits(logits)
        assert g.node_types[0] == 0

    def test_all_equal_logits_tie_break_lowest_index(self):
        logits = DenseGraphLogits(np.zeros((9, 5)), np.zeros((9, 9, 5)))
        g = decode_logits(logits)
        assert (g.node_types == 0).all()  # C is index 0

    def test_symmetric_decode(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            g = decode_logits(rand_logits(rng))
            bt = g.bond_types
            assert np.array_equal(bt, bt.T)

    def test_decode_output_always_well_formed(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            g = decode_logits(rand_logits(rng))
            assert check_well_formed(g) == []

    def test_relax_fibers_normalized(self):
        rng = np.random.default_rng(2)
        x, a = relax(rand_logits(rng))
        np.testing.assert_allclose(x.sum(axis=-1), 1.0, atol=1e-9)
        np.testing.assert_allclose(a.sum(axis=-1), 1.0, atol=1e-9)
        assert np.allclose(a, a.transpose(1, 0, 2))

    def test_relax_argmax_consistent_with_decode(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            logits = rand_logits(rng)
            x, a = relax(logits)
            g = decode_logits(logits)
            assert np.array_equal(x.argmax(axis=-1), g.node_types)
            nt = g.node_types
            bt = a.argmax(axis=-1)
            for i in range(9):
                for j in range(9):
                    if i != j and nt[i] != PAD and nt[j] != PAD:
                        assert bt[i, j] == g.bond_types[i, j]


class TestValence:
    def test_single_carbon_is_valid(self):
        g = graph_from("C", [])
        assert valence_valid(g).valid
        assert g.implicit_hydrogens(0) == 4

    def test_nitrogen_with_four_bonds_invalid(self):
        g = graph_from("NCCCC", [(0, 1, BOND_SINGLE), (0, 2, BOND_SINGLE), (0, 3, BOND_SINGLE), (0, 4, BOND_SINGLE)])
        report = valence_valid(g)
        assert not report.valid
        assert 0 in report.atom_diagnostics

    def test_carbon_dioxide_chain_valid(self):
        g = graph_from("OCO", [(0, 1, BOND_DOUBLE), (1, 2, BOND_DOUBLE)])
        assert valence_valid(g).valid
        assert g.implicit_hydrogens(1) == 0

    def test_disconnected_rejected_by_default(self):
        g = graph_from("CC", [])
        assert not valence_valid(g).valid
        assert valence_valid(g, require_connected=False).valid

    def test_empty_graph_invalid(self):
        g = MolecularGraph.from_types([], [])
        report = valence_valid(g)
        assert not report.valid
        assert "no atoms" in report.reasons[0]

    def test_aromatic_atom_needs_exactly_two_ring_neighbors(self):
        g = graph_from("CC", [(0, 1, BOND_AROMATIC)])
        assert not valence_valid(g).valid
        ring = graph_from("CCC", [(0, 1, BOND_AROMATIC), (1, 2, BOND_AROMATIC), (0, 2, BOND_AROMATIC)])
        assert valence_valid(ring).valid

    def test_permutation_invariance(self):
        g = graph_from("CNOF", [(0, 1, BOND_SINGLE), (1, 2, BOND_SINGLE), (2, 3, BOND_SINGLE)])
        for seed in range(30):
            assert valence_valid(random_permute(g, seed)).valid == valence_valid(g).valid
        bad = graph_from("FF", [(0, 1, BOND_DOUBLE)])
        for seed in range(30):
            assert not valence_valid(random_permute(bad, seed)).valid


class TestPermutation:
    def test_identity_permutation(self):
        g = graph_from("CCO", [(0, 1, BOND_SINGLE), (1, 2, BOND_SINGLE)])
        same = apply_permutation(g, np.arange(9))
        assert same == g

    def test_inverse_roundtrip(self):
        g = graph_from("CNO", [(0, 1, BOND_DOUBLE), (1, 2, BOND_SINGLE)])
        rng = np.random.default_rng(9)
        perm = rng.permutation(9)
        back = apply_permutation(apply_permutation(g, perm), np.argsort(perm))
        assert back == g


class TestCanonicalRanks:
    def test_linear_chain_terminals_distinct(self):
        g = graph_from("CCO", [(0, 1, BOND_SINGLE), (1, 2, BOND_SINGLE)])
        order = canonical_ranks(g)
        assert len(order) == 3
        assert set(order) == {0, 1, 2}

    def test_cyclopropane_deterministic(self):
        g = graph_from("CCC", [(0, 1, BOND_SINGLE), (1, 2, BOND_SINGLE), (0, 2, BOND_SINGLE)])
        assert canonical_ranks(g) == canonical_ranks(g.copy())

    def test_signature_invariant_under_relabeling(self):
        g = graph_from("CCNO", [(0, 1, BOND_SINGLE), (1, 2, BOND_DOUBLE), (1, 3, BOND_SINGLE)])
        base = mg._signature(g, canonical_ranks(g))
        for seed in range(40):
            h = random_permute(g, seed)
            assert mg._signature(h, canonical_ranks(h)) == base
