"""Commutants, centers and minimal central projections of matrix tuples.

The *-commutant W'(A) is the null space of T -> (T A_j - A_j T, T A_j* - A_j* T)_j.
It is computed one generator at a time: the null space for the first generator
is found on the full matrix space and every later generator only cuts down the
basis found so far.
"""

from __future__ import annotations

import dataclasses
from collections.abc import Callable, Sequence
from typing import List, Optional, TypeVar

import numpy as np
import tenacity
from jaxtyping import Complex

from ..core.config import config
from ..core.errors import InputError, ToleranceAmbiguityError
from ..core.logging import get_logger
from .linalg import cluster_eigenvalues, commutes, is_projection, null_space, span_projector
from .matrices import Matrix, MatrixTuple, Seed, as_rng

logger = get_logger(__name__)

T = TypeVar("T")


class BadDraw(Exception):
    """A randomized spectral step produced the wrong cluster structure."""


def randomized_retry(attempt: Callable[[], T], what: str) -> T:
    """Runs a randomized step until it succeeds, at most PROJECTION_RETRIES times.

    `attempt` signals a bad random draw by raising `BadDraw`. A
    `ToleranceAmbiguityError` raised inside `attempt` depends on the draw too and
    is retried the same way; the last one propagates unchanged.

    Raises:
      ToleranceAmbiguityError: if every attempt failed.
    """
    retrying = tenacity.Retrying(
        stop=tenacity.stop_after_attempt(config.PROJECTION_RETRIES),
        retry=tenacity.retry_if_exception_type((BadDraw, ToleranceAmbiguityError)),
        before_sleep=lambda state: logger.debug(
            f"{what}: attempt {state.attempt_number} failed, retrying"
        ),
        reraise=True,
    )
    try:
        return retrying(attempt)
    except BadDraw as e:
        raise ToleranceAmbiguityError(
            f"{what} failed after {config.PROJECTION_RETRIES} random draws: {e}"
        ) from e


@dataclasses.dataclass(frozen=True, eq=False)
class CommutantBasis:
    """Orthonormal (trace inner product) basis of a subspace of M_d.

    Attributes:
      dim: The ambient matrix size d.
      basis: Array of shape (k, d, d).
    """

    dim: int
    basis: Complex[np.ndarray, "k d d"]

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=complex).reshape(-1, self.dim, self.dim)
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)

    def __len__(self) -> int:
        return self.basis.shape[0]

    @property
    def vectors(self) -> Complex[np.ndarray, "k dd"]:
        """Row-major vectorizations of the basis elements, one per row."""
        return self.basis.reshape(len(self), self.dim * self.dim)

    def projector(self, tol: Optional[float] = None) -> Complex[np.ndarray, "dd dd"]:
        """Orthogonal projection of vec(M_d) onto the span."""
        return span_projector(self.vectors, config.TOL if tol is None else tol)

    def distance(self, x: Matrix) -> float:
        """Frobenius distance from x to the span."""
        v = np.asarray(x, dtype=complex).ravel()
        coeffs = self.vectors.conj() @ v
        return float(np.linalg.norm(v - coeffs @ self.vectors))

    def element(self, coeffs: np.ndarray) -> Matrix:
        return np.tensordot(coeffs, self.basis, axes=1)


@dataclasses.dataclass(frozen=True, eq=False)
class CentralProjectionSet:
    """Mutually orthogonal central projections summing to the identity.

    Attributes:
      projections: Array of shape (m, d, d).
      ranges: Column isometries onto the range of each projection.
    """

    projections: Complex[np.ndarray, "m d d"]
    ranges: tuple

    def __len__(self) -> int:
        return len(self.ranges)

    @property
    def ranks(self) -> List[int]:
        return [r.shape[1] for r in self.ranges]


def _reference_scale(generators: Sequence[Matrix]) -> float:
    """2 max ||X||, an upper bound on the norm of T -> TX - XT."""
    if not generators or generators[0].shape[0] == 0:
        return 0.0
    return 2.0 * max(float(np.linalg.norm(x, 2)) for x in generators)


def _intersect(
    basis: np.ndarray, generators: Sequence[Matrix], tol: float, scale: float
) -> np.ndarray:
    """Cuts `basis` down to the elements commuting with every generator."""
    for x in generators:
        if basis.shape[0] == 0:
            break
        images = basis @ x - x @ basis
        cols = images.reshape(basis.shape[0], -1).T
        coeffs, _ = null_space(cols, tol, scale)
        basis = np.tensordot(coeffs.T, basis, axes=1)
    return basis


def commutant_basis(a: MatrixTuple, tol: Optional[float] = None) -> CommutantBasis:
    """Orthonormal basis of W'(A).

    A singular value of the commutator map counts as zero when it is at most
    tol * d * 2 max ||A_j||.

    Raises:
      ToleranceAmbiguityError: when a rank decision falls inside the gap band.
    """
    tol = config.TOL if tol is None else tol
    d = a.dim
    scale = d * _reference_scale(list(a.matrices))
    basis = np.eye(d * d, dtype=complex).reshape(d * d, d, d)
    if scale > 0:
        # Hermitian coordinates need no adjoint step.
        generators = list(a.matrices) + [
            x.conj().T for x in a.matrices
            if not np.allclose(x, x.conj().T, rtol=0.0, atol=tol * scale)
        ]
        basis = _intersect(basis, generators, tol, scale)
    logger.debug(f"commutant of {a!r}: dimension {basis.shape[0]}")
    return CommutantBasis(dim=d, basis=basis)


def _generic_element(c: CommutantBasis, rng: np.random.Generator) -> Matrix:
    k = len(c)
    coeffs = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    return c.element(coeffs / np.sqrt(2 * k))


def center_basis(
    c: CommutantBasis, tol: Optional[float] = None, seed: Seed = None
) -> CommutantBasis:
    """Orthonormal basis of the center of the *-algebra spanned by `c`.

    Two generic elements of the algebra generate it as a *-algebra, so the
    center is the part of the span commuting with both and their adjoints.
    """
    tol = config.TOL if tol is None else tol
    d = c.dim
    if len(c) <= 1:
        return c
    rng = as_rng(seed)
    x1, x2 = _generic_element(c, rng), _generic_element(c, rng)
    generators = [x1, x2, x1.conj().T, x2.conj().T]
    scale = d * _reference_scale(generators)
    basis = _intersect(np.array(c.basis), generators, tol, scale)
    logger.debug(f"center: dimension {basis.shape[0]} inside an algebra of dimension {len(c)}")
    return CommutantBasis(dim=d, basis=basis)


def _random_hermitian(c: CommutantBasis, rng: np.random.Generator) -> Matrix:
    h = c.element(rng.standard_normal(len(c)))
    return (h + h.conj().T) / 2


def spectral_ranges(
    h: Matrix, tol: float
) -> List[Complex[np.ndarray, "d r"]]:
    """Eigenvector bases of the clustered eigenvalues of Hermitian h, ascending."""
    w, v = np.linalg.eigh(h)
    return [v[:, idx] for idx in cluster_eigenvalues(w, tol)]


def _canonical_order(ranges: List[np.ndarray]) -> List[np.ndarray]:
    """Orders ranges by rank, then by their rounded projector diagonals."""
    def key(r: np.ndarray):
        diag = np.real(np.einsum("ij,ij->i", r, r.conj()))
        return (r.shape[1], tuple(-np.round(diag, 6)))
    return sorted(ranges, key=key)


def minimal_central_projections(
    a: MatrixTuple,
    tol: Optional[float] = None,
    seed: Seed = None,
    commutant: Optional[CommutantBasis] = None,
) -> CentralProjectionSet:
    """The minimal central projections of W'(A).

    Spectral projections of a random Hermitian center element; the number of
    eigenvalue clusters must equal the dimension of the center, otherwise the
    center and the element are drawn afresh.

    Raises:
      ToleranceAmbiguityError: if no draw separates the clusters.
    """
    tol = config.TOL if tol is None else tol
    d = a.dim
    if d == 0:
        return CentralProjectionSet(projections=np.zeros((0, 0, 0), dtype=complex), ranges=())
    rng = as_rng(seed)
    c = commutant if commutant is not None else commutant_basis(a, tol)

    def attempt() -> List[np.ndarray]:
        z = center_basis(c, tol, rng)
        ranges = spectral_ranges(_random_hermitian(z, rng), tol)
        if len(ranges) != len(z):
            raise BadDraw(
                f"{len(ranges)} eigenvalue clusters for a center of dimension {len(z)}"
            )
        return ranges

    ranges = _canonical_order(randomized_retry(attempt, "minimal central projections"))
    projections = np.stack([r @ r.conj().T for r in ranges])
    logger.debug(f"central projections of {a!r}: ranks {[r.shape[1] for r in ranges]}")
    return CentralProjectionSet(projections=projections, ranges=tuple(ranges))


def is_irreducible(a: MatrixTuple, tol: Optional[float] = None) -> bool:
    """W'(A) is the scalars."""
    return a.dim >= 1 and len(commutant_basis(a, tol)) == 1


def is_factor(a: MatrixTuple, tol: Optional[float] = None, seed: Seed = None) -> bool:
    """W'(A) has trivial center."""
    if a.dim == 0:
        return False
    return len(center_basis(commutant_basis(a, tol), tol, seed)) == 1


def reduces(a: MatrixTuple, p: Matrix, tol: Optional[float] = None) -> bool:
    """Whether the range of the projection P reduces A.

    Raises:
      InputError: if P is not an orthogonal projection on the right space.
    """
    tol = config.TOL if tol is None else tol
    p = np.asarray(p, dtype=complex)
    if p.shape != (a.dim, a.dim):
        raise InputError(f"Projection of shape {p.shape} does not act on dimension {a.dim}.")
    if not is_projection(p, tol):
        raise InputError("P is not an orthogonal projection (P = P* = P^2 fails).")
    return all(commutes(p, x, tol) for x in a.generators())
