"""Tests for planted instances."""

import sys
from pathlib import Path

import pytest

# Add the repository root to Python path for absolute imports
sys.path.insert(0, str(Path(__file__).resolve().parents[3]))

from src.core.errors import InputError
from src.decomp.classification import classify
from src.decomp.registry import AtomRegistry
from src.numeric.algebra import commutant_basis, is_irreducible
from src.oracle.planted import planted_tuple, random_irreducible, random_pair, random_planted
from src.symbolic.scalars import ExtScalar


@pytest.mark.unit
class TestPlanted:

    def test_random_irreducible(self):
        atom = random_irreducible(2, 3, seed=81)
        assert (atom.n, atom.dim) == (2, 3)
        assert is_irreducible(atom)

    def test_planted_tuple(self):
        p = random_irreducible(2, 2, seed=82)
        q = random_irreducible(2, 1, seed=83)
        inst = planted_tuple([(p, 3), (q, 2)], seed=84)
        assert inst.system.dim == 8
        assert inst.schur_dimension == 13
        assert len(commutant_basis(inst.system)) == 13

    def test_planted_class(self):
        p = random_irreducible(2, 2, seed=85)
        inst = planted_tuple([(p, 2), (p, 1)], rotate=False)
        assert inst.unitary is None
        registry = AtomRegistry()
        cls_ = inst.planted_class(registry)
        assert list(cls_.support)[0].id == "atom-0001"
        assert cls_[registry.label("atom-0001")] == ExtScalar.of(3)

    def test_needs_atoms(self):
        with pytest.raises(InputError):
            planted_tuple([])

    def test_random_planted_respects_max_dim(self):
        for seed in range(5):
            assert random_planted(2, seed=seed, max_dim=10).system.dim <= 10

    def test_random_pair_dims(self):
        a, b = random_pair(3, 2, equivalent=False, seed=86)
        assert (a.n, a.dim) == (b.n, b.dim) == (3, 2)


@pytest.mark.slow
def test_planted_round_trip():
    for seed in range(200):
        n = 1 + seed % 4
        inst = random_planted(n, seed=seed, max_dim=32)
        registry = AtomRegistry()
        assert classify(inst.system, registry) == inst.planted_class(registry)
        assert len(commutant_basis(inst.system)) == inst.schur_dimension
