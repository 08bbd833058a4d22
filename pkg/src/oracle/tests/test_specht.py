"""Tests for the trace-word equivalence oracle."""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add the repository root to Python path for absolute imports
sys.path.insert(0, str(Path(__file__).resolve().parents[3]))

from src.core.errors import DomainError, InputError
from src.decomp.equivalence import are_equivalent
from src.numeric.matrices import MatrixTuple, conjugate, random_tuple, random_unitary, zeros
from src.oracle.planted import random_pair
from src.oracle.specht import specht_equivalent


@pytest.mark.unit
class TestSpecht:

    def test_conjugate_tuples(self):
        a = random_tuple(2, 3, seed=71)
        assert specht_equivalent(a, conjugate(random_unitary(3, seed=72), a))

    def test_different_spectra(self):
        a = MatrixTuple.of(np.diag([1.0, 2.0]))
        b = MatrixTuple.of(np.diag([1.0, 3.0]))
        assert not specht_equivalent(a, b)

    def test_transpose_is_not_equivalent(self):
        a = random_tuple(2, 3, seed=73)
        b = MatrixTuple(np.transpose(a.matrices, (0, 2, 1)))
        assert not specht_equivalent(a, b)

    def test_limits(self):
        with pytest.raises(DomainError):
            specht_equivalent(zeros(1, 5), zeros(1, 5))
        with pytest.raises(InputError):
            specht_equivalent(zeros(1, 2), zeros(2, 2))
        assert not specht_equivalent(zeros(1, 2), zeros(1, 3))
        assert specht_equivalent(zeros(1, 0), zeros(1, 0))

    def test_agrees_with_decomposition(self):
        for seed in range(20):
            equivalent = seed % 2 == 0
            d = 1 + seed % 3
            a, b = random_pair(2, d, equivalent=equivalent, seed=seed)
            assert specht_equivalent(a, b) == are_equivalent(a, b) == equivalent


@pytest.mark.slow
def test_oracle_agreement_sweep():
    for seed in range(500):
        equivalent = seed % 5 == 0
        a, b = random_pair(1 + seed % 3, 1 + seed % 3, equivalent=equivalent, seed=seed)
        assert specht_equivalent(a, b) == are_equivalent(a, b)
