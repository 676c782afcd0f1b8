import numpy as np
import pytest

from qmolgen.graphs import (
    BOND_AROMATIC,
    BOND_DOUBLE,
    BOND_SINGLE,
    BOND_TRIPLE,
    random_permute,
    valence_valid,
)
from qmolgen.smiles import SmilesError, canonical_smiles, parse, write


def bond_set(g):
    heavy = g.heavy_atoms()
    return {(min(i, j), max(i, j), g.bond(i, j)) for i in heavy for j, _ in g.neighbors(i)}


class TestParse:
    def test_ethanol_topology(self):
        g = parse("CCO")
        assert [g.element(i) for i in g.heavy_atoms()] == ["C", "C", "O"]
        assert bond_set(g) == {(0, 1, BOND_SINGLE), (1, 2, BOND_SINGLE)}

    def test_triple_bond(self):
        g = parse("C#N")
        assert g.bond(0, 1) == BOND_TRIPLE

    def test_ring_closure(self):
        g = parse("C1CC1")
        assert bond_set(g) == {(0, 1, BOND_SINGLE), (1, 2, BOND_SINGLE), (0, 2, BOND_SINGLE)}

    def test_branches(self):
        g = parse("CC(=O)O")
        assert g.bond(1, 2) == BOND_DOUBLE
        assert g.bond(1, 3) == BOND_SINGLE
        assert g.degree(1) == 3

    def test_aromatic_ring(self):
        g = parse("c1ccccc1")
        assert all(g.bond(i, (i + 1) % 6) == BOND_AROMATIC for i in range(6))
        assert valence_valid(g).valid

    def test_explicit_single_between_aromatic_rings(self):
        g = parse("c1cc1-c1cc1")
        assert g.bond(2, 3) == BOND_SINGLE or g.bond(0, 3) == BOND_SINGLE

    def test_errors_carry_offsets(self):
        with pytest.raises(SmilesError) as e:
            parse("C1CC")
        assert e.value.offset == 1
        with pytest.raises(SmilesError) as e:
            parse("C(C")
        assert "parenthesis" in str(e.value)
        with pytest.raises(SmilesError) as e:
            parse("CCl")
        assert e.value.offset == 2
        with pytest.raises(SmilesError):
            parse("CCCCCCCCCC")  # ten atoms
        with pytest.raises(SmilesError, match="valence"):
            parse("FF(F)F")
        with pytest.raises(SmilesError):
            parse("")

    def test_aromatic_atom_outside_ring_rejected(self):
        with pytest.raises(SmilesError, match="aromatic"):
            parse("cC")

    def test_conflicting_ring_bonds_rejected(self):
        with pytest.raises(SmilesError, match="conflicting"):
            parse("C=1CCCC#1")


class TestWrite:
    def test_single_atom(self):
        assert write(parse("C")) == "C"
        assert write(parse("O")) == "O"

    def test_round_trip_ethanol(self):
        g = parse("CCO")
        assert canonical_smiles(parse(write(g))) == canonical_smiles(g)

    def test_cyclopropane_single_ring_digit(self):
        s = write(parse("C1CC1"))
        assert s.count("1") == 2
        assert canonical_smiles(parse(s)) == canonical_smiles(parse("C1CC1"))

    def test_invalid_graph_rejected(self):
        from qmolgen.graphs import MolecularGraph

        g = MolecularGraph.from_types([0, 0], [])  # disconnected carbons
        with pytest.raises(ValueError, match="invalid"):
            write(g)


class TestCanonical:
    def test_same_molecule_same_string(self):
        assert canonical_smiles(parse("CCO")) == canonical_smiles(parse("OCC"))

    def test_different_molecules_differ(self):
        assert canonical_smiles(parse("CCO")) != canonical_smiles(parse("CCC"))

    @pytest.mark.parametrize(
        "smi",
        ["CCO", "CC(=O)O", "c1ccccc1", "C1CCCCC1", "NC(=O)C", "FC(F)(F)C", "C1COC1", "c1ccncc1", "C#CC", "CC(C)(C)C"],
    )
    def test_invariant_under_permutation(self, smi):
        g = parse(smi)
        base = canonical_smiles(g)
        for seed in range(25):
            assert canonical_smiles(random_permute(g, seed)) == base

    def test_round_trips_through_own_output(self):
        for smi in ["CCO", "c1ccccc1", "CC(C)=O", "OC(=O)C(F)(F)F", "C1CC1C#N"]:
            c = canonical_smiles(parse(smi))
            assert canonical_smiles(parse(c)) == c


class TestFuzz:
    def test_random_strings_raise_only_structured_errors(self):
        rng = np.random.default_rng(0)
        alphabet = list("CNOFcnobB()=#-:123456789[]@+%. \t")
        for _ in range(3000):
            length = int(rng.integers(1, 30))
            s = "".join(rng.choice(alphabet) for _ in range(length))
            try:
                parse(s)
            except SmilesError:
                pass

    def test_random_bytes_never_crash(self):
        rng = np.random.default_rng(1)
        for _ in range(2000):
            length = int(rng.integers(1, 64))
            s = bytes(rng.integers(32, 127, size=length).tolist()).decode("ascii")
            try:
                parse(s)
            except SmilesError:
                pass
