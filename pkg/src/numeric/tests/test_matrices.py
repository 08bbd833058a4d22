"""Tests for matrix tuples and their coordinatewise calculus."""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add the repository root to Python path for absolute imports
sys.path.insert(0, str(Path(__file__).resolve().parents[3]))

from src.core.config import config
from src.core.errors import DomainError, InputError
from src.core.schemas import TupleModel
from src.numeric.matrices import (
    MatrixTuple, absolute, adjoint, ampl, b_transform, compress, conjugate, direct_sum,
    identity, inverse_b_transform, is_contraction, is_normal, max_difference, polar_isometry,
    random_tuple, random_unitary, tuple_norm, zeros
)

J2 = np.array([[0, 1], [0, 0]], dtype=complex)


@pytest.fixture
def sample():
    return random_tuple(2, 3, seed=7)


@pytest.mark.unit
class TestMatrixTuple:

    def test_shape_checks(self):
        with pytest.raises(InputError):
            MatrixTuple(np.zeros((2, 2, 3)))
        with pytest.raises(InputError):
            MatrixTuple(np.zeros((0, 2, 2)))
        with pytest.raises(InputError):
            MatrixTuple.of(np.eye(2), np.eye(3))

    def test_entries_must_be_finite(self):
        bad = np.eye(2)
        bad[0, 1] = np.nan
        with pytest.raises(InputError):
            MatrixTuple.of(bad)

    def test_max_dim(self, monkeypatch):
        monkeypatch.setattr(config, "MAX_DIM", 2)
        with pytest.raises(InputError):
            zeros(1, 3)

    def test_read_only(self, sample):
        with pytest.raises(ValueError):
            sample.matrices[0, 0, 0] = 1.0

    def test_generators(self, sample):
        gens = sample.generators()
        assert len(gens) == 4
        np.testing.assert_allclose(gens[2], sample[0].conj().T)

    def test_dimension_zero(self):
        empty = MatrixTuple.from_model(TupleModel(n=2, dim=0, matrices=[[], []]))
        assert (empty.n, empty.dim) == (2, 0)
        assert empty.to_model().dim == 0

    def test_model_keeps_complex_entries(self):
        a = MatrixTuple.of(np.array([[1 + 2j, 0], [0.5, -1j]]))
        model = a.to_model()
        assert model.matrices[0][0][0] == (1.0, 2.0)
        np.testing.assert_array_equal(MatrixTuple.from_model(model).matrices, a.matrices)


@pytest.mark.unit
class TestStructure:

    def test_direct_sum(self, sample):
        b = random_tuple(2, 2, seed=1)
        s = direct_sum(sample, b)
        assert s.dim == 5
        np.testing.assert_array_equal(s.matrices[:, :3, :3], sample.matrices)
        np.testing.assert_array_equal(s.matrices[:, 3:, 3:], b.matrices)
        assert not np.any(s.matrices[:, :3, 3:])

    def test_direct_sum_needs_equal_lengths(self, sample):
        with pytest.raises(InputError):
            direct_sum(sample, random_tuple(3, 2, seed=1))

    def test_ampl_is_repeated_direct_sum(self, sample):
        np.testing.assert_array_equal(ampl(2, sample).matrices, direct_sum(sample, sample).matrices)
        with pytest.raises(InputError):
            ampl(0, sample)

    def test_conjugate_and_compress(self, sample):
        u = random_unitary(3, seed=3)
        np.testing.assert_allclose(u.conj().T @ u, np.eye(3), atol=1e-12)
        c = conjugate(u, sample)
        back = compress(c, u)
        assert max_difference(back, sample) < 1e-12

    def test_identity_and_zeros(self):
        assert tuple_norm(identity(2, 3)) == pytest.approx(1.0)
        assert tuple_norm(zeros(2, 3)) == 0.0


@pytest.mark.unit
class TestCalculus:

    def test_adjoint_and_absolute(self):
        a = MatrixTuple.of(np.diag([-2.0, 3j]))
        np.testing.assert_allclose(absolute(a)[0], np.diag([2.0, 3.0]), atol=1e-12)
        np.testing.assert_allclose(adjoint(a)[0], np.diag([-2.0, -3j]))

    def test_polar_isometry(self, sample):
        q = polar_isometry(sample)
        recon = q.matrices @ absolute(sample).matrices
        np.testing.assert_allclose(recon, sample.matrices, atol=1e-10)

    def test_polar_isometry_of_a_nilpotent(self):
        q = polar_isometry(MatrixTuple.of(J2))
        np.testing.assert_allclose(q[0], J2, atol=1e-12)

    def test_b_transform_scalar(self):
        t = b_transform(MatrixTuple.of(np.array([[3.0]])))
        assert t[0][0, 0] == pytest.approx(0.75)
        z = b_transform(MatrixTuple.of(np.array([[3j]])))
        assert z[0][0, 0] == pytest.approx(0.75j)

    def test_b_transform_is_a_strict_contraction(self, sample):
        big = MatrixTuple(100.0 * sample.matrices)
        assert is_contraction(b_transform(big), strict=True)

    def test_b_transform_inverts(self, sample):
        back = inverse_b_transform(b_transform(sample))
        assert max_difference(back, sample) < 1e-9

    def test_b_transform_commutes_with_adjoint(self, sample):
        lhs = b_transform(adjoint(sample))
        rhs = adjoint(b_transform(sample))
        assert max_difference(lhs, rhs) < 1e-10

    def test_inverse_b_transform_domain(self):
        with pytest.raises(DomainError):
            inverse_b_transform(identity(1, 2))

    def test_norms_and_predicates(self):
        a = MatrixTuple.of(np.diag([1.0, 2.0]), np.diag([3.0, 0.0]))
        assert tuple_norm(a) == pytest.approx(3.0)
        assert not is_contraction(a)
        assert is_normal(np.diag([1.0, 2j]))
        assert not is_normal(J2)


@pytest.mark.unit
class TestNilpotentExample:

    LOWER = np.array([[0, 0], [1, 0]], dtype=complex)

    def test_absolute(self):
        np.testing.assert_allclose(
            absolute(MatrixTuple.of(self.LOWER))[0], np.diag([1.0, 0.0]), atol=1e-12
        )

    def test_b_transform(self):
        expected = np.array([[0, 0], [0.5, 0]], dtype=complex)
        np.testing.assert_allclose(b_transform(MatrixTuple.of(self.LOWER))[0], expected, atol=1e-12)

    def test_norm(self):
        assert tuple_norm(MatrixTuple.of(self.LOWER)) == pytest.approx(1.0)


@pytest.mark.slow
class TestRandomCalculus:

    @staticmethod
    def draw(seed):
        return random_tuple(1 + seed % 3, 1 + seed % 5, seed=seed)

    @pytest.mark.parametrize("seed", range(100))
    def test_b_transform_identities(self, seed):
        a = self.draw(seed)
        t = b_transform(a)
        assert max_difference(b_transform(adjoint(a)), adjoint(t)) <= 1e-10
        assert max_difference(inverse_b_transform(t), a) <= 1e-10
        assert is_contraction(t, strict=True)

    @pytest.mark.parametrize("seed", range(100))
    def test_b_transform_keeps_polar_parts(self, seed):
        a = self.draw(seed)
        t = b_transform(a)
        assert max_difference(absolute(t), b_transform(absolute(a))) <= 1e-10
        assert max_difference(polar_isometry(t), polar_isometry(a)) <= 1e-8

    @pytest.mark.parametrize("seed", range(100))
    def test_b_transform_splits_over_direct_sums(self, seed):
        a = self.draw(seed)
        c = random_tuple(a.n, 2, seed=seed + 1000)
        lhs = b_transform(direct_sum(a, c))
        assert max_difference(lhs, direct_sum(b_transform(a), b_transform(c))) <= 1e-10

    @pytest.mark.parametrize("seed", range(100))
    def test_norm_is_unitarily_invariant(self, seed):
        a = self.draw(seed)
        u = random_unitary(a.dim, seed=seed + 2000)
        assert tuple_norm(conjugate(u, a)) == pytest.approx(tuple_norm(a), abs=1e-10)
