"""Tests for classification of tuples against the atom registry."""

import sys
from pathlib import Path

import pytest

# Add the repository root to Python path for absolute imports
sys.path.insert(0, str(Path(__file__).resolve().parents[3]))

from src.core.errors import InputError
from src.decomp.classification import classify, relations
from src.decomp.registry import AtomRegistry
from src.numeric.matrices import random_tuple
from src.oracle.planted import planted_tuple, random_irreducible
from src.symbolic.classes import oplus


@pytest.fixture(scope="module")
def atoms():
    return random_irreducible(2, 2, seed=51), random_irreducible(2, 1, seed=52)


@pytest.mark.unit
class TestClassify:

    def test_planted_class_is_recovered(self, atoms):
        p, q = atoms
        inst = planted_tuple([(p, 2), (q, 3)], seed=53)
        registry = AtomRegistry()
        found = classify(inst.system, registry)
        assert found == inst.planted_class(registry)
        assert len(registry) == 2

    def test_classes_add_under_direct_sums(self, atoms):
        p, q = atoms
        registry = AtomRegistry()
        both = planted_tuple([(p, 1), (q, 1)], seed=54).system
        assert classify(both, registry) == oplus([classify(p, registry), classify(q, registry)])

    def test_relations(self, atoms):
        p, q = atoms
        registry = AtomRegistry()
        big = planted_tuple([(p, 2), (q, 1)], seed=55).system
        assert relations(p, big, registry) == frozenset({"leq", "covers"})
        assert "disjoint" in relations(p, q, registry)
        twin = planted_tuple([(p, 2), (q, 1)], seed=56).system
        assert {"equivalent", "leq", "geq", "leq_s"} <= relations(big, twin, registry)

    def test_length_mismatch(self, atoms):
        p, _ = atoms
        with pytest.raises(InputError):
            relations(p, random_tuple(3, 2, seed=1))
