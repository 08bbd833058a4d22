"""N-tuples of complex d x d matrices and their coordinatewise calculus.

All operations return new read-only tuples; a `MatrixTuple` never changes after
construction.
"""

from __future__ import annotations

import dataclasses
from collections.abc import Iterator
from typing import Optional, Union

import numpy as np
import scipy.linalg
import scipy.stats
from jaxtyping import Complex

from ..core.config import config
from ..core.errors import DomainError, InputError
from ..core.schemas import MatrixRows, TupleModel
from .linalg import psd_sqrt

Matrix = Complex[np.ndarray, "d d"]
Seed = Union[int, np.random.Generator, None]


@dataclasses.dataclass(frozen=True, eq=False)
class MatrixTuple:
    """N complex matrices of a common size d.

    Attributes:
        matrices: Array of shape (N, d, d), complex128, read-only. d may be 0.
    """

    matrices: Complex[np.ndarray, "n d d"]

    def __post_init__(self):
        arr = np.array(self.matrices, dtype=np.complex128)
        if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
            raise InputError(f"Expected an (N, d, d) array, got shape {arr.shape}.")
        if arr.shape[0] < 1:
            raise InputError("A tuple needs at least one matrix.")
        if arr.shape[1] > config.MAX_DIM:
            raise InputError(
                f"Dimension {arr.shape[1]} exceeds the configured maximum {config.MAX_DIM}."
            )
        if not np.all(np.isfinite(arr)):
            raise InputError("Tuple entries must be finite (no NaN or Inf).")
        arr.setflags(write=False)
        object.__setattr__(self, "matrices", arr)

    @classmethod
    def of(cls, *matrices: np.ndarray) -> "MatrixTuple":
        """Builds a tuple from individual square matrices."""
        if not matrices:
            raise InputError("A tuple needs at least one matrix.")
        shapes = {np.shape(m) for m in matrices}
        if len(shapes) != 1:
            raise InputError(f"Matrices of a tuple must share one shape, got {sorted(shapes)}.")
        return cls(np.stack([np.asarray(m, dtype=np.complex128) for m in matrices]))

    @property
    def n(self) -> int:
        return self.matrices.shape[0]

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, j: int) -> Matrix:
        return self.matrices[j]

    def __iter__(self) -> Iterator[Matrix]:
        return iter(self.matrices)

    def __repr__(self) -> str:
        return f"MatrixTuple(n={self.n}, dim={self.dim})"

    def generators(self) -> list[Matrix]:
        """A_1, ..., A_N followed by A_1*, ..., A_N*."""
        return list(self.matrices) + [m.conj().T for m in self.matrices]

    def to_model(self) -> TupleModel:
        return TupleModel(
            n=self.n,
            dim=self.dim,
            matrices=[matrix_to_rows(m) for m in self.matrices],
        )

    @classmethod
    def from_model(cls, model: TupleModel) -> "MatrixTuple":
        if model.dim == 0:
            return zeros(model.n, 0)
        return cls(np.stack([rows_to_matrix(rows) for rows in model.matrices]))


def matrix_to_rows(m: np.ndarray) -> MatrixRows:
    """Row-major [re, im] encoding of a (possibly rectangular) matrix."""
    return [[(float(z.real), float(z.imag)) for z in row] for row in np.asarray(m)]


def rows_to_matrix(rows: MatrixRows) -> np.ndarray:
    arr = np.asarray(rows, dtype=float)
    if arr.size == 0:
        return np.zeros((len(rows), 0), dtype=complex)
    if arr.ndim != 3 or arr.shape[-1] != 2:
        raise InputError("Matrix entries must be [re, im] pairs.")
    return arr[..., 0] + 1j * arr[..., 1]


# Constructors ---------------------------------------------------------------


def zeros(n: int, d: int) -> MatrixTuple:
    return MatrixTuple(np.zeros((n, d, d), dtype=complex))


def identity(n: int, d: int) -> MatrixTuple:
    return MatrixTuple(np.broadcast_to(np.eye(d, dtype=complex), (n, d, d)))


def as_rng(seed: Seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(config.SEED if seed is None else seed)


def random_unitary(d: int, seed: Seed = None) -> Matrix:
    """Haar-random d x d unitary."""
    rng = as_rng(seed)
    if d == 0:
        return np.zeros((0, 0), dtype=complex)
    if d == 1:
        return np.exp(2j * np.pi * rng.random()).reshape(1, 1)
    return scipy.stats.unitary_group.rvs(d, random_state=rng)


def random_tuple(n: int, d: int, seed: Seed = None) -> MatrixTuple:
    """Complex Gaussian tuple with entries of unit variance."""
    rng = as_rng(seed)
    shape = (n, d, d)
    entries = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return MatrixTuple(entries / np.sqrt(2))


# Structure ------------------------------------------------------------------


def direct_sum(*tuples: MatrixTuple) -> MatrixTuple:
    """Blockwise direct sum, coordinate by coordinate.

    Raises:
        InputError: if the tuples have different lengths.
    """
    if not tuples:
        raise InputError("direct_sum needs at least one tuple.")
    lengths = {t.n for t in tuples}
    if len(lengths) != 1:
        raise InputError(f"Cannot add tuples of lengths {sorted(lengths)}.")
    n = tuples[0].n
    d = sum(t.dim for t in tuples)
    out = np.zeros((n, d, d), dtype=complex)
    offset = 0
    for t in tuples:
        out[:, offset:offset + t.dim, offset:offset + t.dim] = t.matrices
        offset += t.dim
    return MatrixTuple(out)


def ampl(m: int, a: MatrixTuple) -> MatrixTuple:
    """m-fold direct sum of A with itself, laid out as I_m (x) A_j."""
    if m < 1:
        raise InputError(f"Amplification needs m >= 1, got {m}.")
    eye = np.eye(m, dtype=complex)
    return MatrixTuple(np.stack([np.kron(eye, x) for x in a.matrices]))


def conjugate(u: Matrix, a: MatrixTuple) -> MatrixTuple:
    """U A U*."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (a.dim, a.dim):
        raise InputError(f"Unitary of shape {u.shape} does not act on dimension {a.dim}.")
    return MatrixTuple(u @ a.matrices @ u.conj().T)


def compress(a: MatrixTuple, v: Complex[np.ndarray, "d k"]) -> MatrixTuple:
    """V* A V for a column isometry V."""
    v = np.asarray(v, dtype=complex)
    if v.ndim != 2 or v.shape[0] != a.dim:
        raise InputError(f"Isometry of shape {v.shape} does not start in dimension {a.dim}.")
    return MatrixTuple(v.conj().T @ a.matrices @ v)


# Coordinatewise calculus ----------------------------------------------------


def adjoint(a: MatrixTuple) -> MatrixTuple:
    return MatrixTuple(np.conj(np.swapaxes(a.matrices, 1, 2)))


def absolute(a: MatrixTuple) -> MatrixTuple:
    """|A| = ((A_1* A_1)^(1/2), ..., (A_N* A_N)^(1/2))."""
    return MatrixTuple(np.stack([psd_sqrt(x.conj().T @ x) for x in a.matrices]))


def _polar_factor(x: Matrix, tol: float) -> Matrix:
    if x.shape[0] == 0:
        return x
    w, s, vh = scipy.linalg.svd(x)
    r = int(np.count_nonzero(s > tol * max(1.0, s[0])))
    return w[:, :r] @ vh[:r]


def polar_isometry(a: MatrixTuple, tol: Optional[float] = None) -> MatrixTuple:
    """Partial isometries Q_j with A_j = Q_j |A_j| and null(Q_j) = null(A_j)."""
    tol = config.TOL if tol is None else tol
    return MatrixTuple(np.stack([_polar_factor(x, tol) for x in a.matrices]))


def _right_solve(x: Matrix, h: Matrix) -> Matrix:
    """x h^-1 for Hermitian positive definite h."""
    if x.shape[0] == 0:
        return x
    return scipy.linalg.solve(h.T, x.T, assume_a="pos").T


def b_transform(a: MatrixTuple) -> MatrixTuple:
    """T (I + |T|)^-1 coordinatewise; every coordinate becomes a strict contraction."""
    eye = np.eye(a.dim, dtype=complex)
    return MatrixTuple(np.stack([
        _right_solve(x, eye + psd_sqrt(x.conj().T @ x)) for x in a.matrices
    ]))


def inverse_b_transform(s: MatrixTuple, margin: Optional[float] = None) -> MatrixTuple:
    """S (I - |S|)^-1 coordinatewise.

    Raises:
        DomainError: if some coordinate has norm >= 1 - margin.
    """
    margin = config.INVERSE_B_MARGIN if margin is None else margin
    for j, x in enumerate(s.matrices):
        norm = _spectral_norm(x)
        if norm >= 1.0 - margin:
            raise DomainError(
                f"Coordinate {j} has norm {norm:.17g}; the inverse B-transform needs norm < "
                f"1 - {margin:g}."
            )
    eye = np.eye(s.dim, dtype=complex)
    return MatrixTuple(np.stack([
        _right_solve(x, eye - psd_sqrt(x.conj().T @ x)) for x in s.matrices
    ]))


# Norms and predicates -------------------------------------------------------


def _spectral_norm(x: Matrix) -> float:
    if x.shape[0] == 0:
        return 0.0
    return float(np.linalg.norm(x, 2))


def tuple_norm(a: MatrixTuple) -> float:
    """max_j ||A_j|| (operator norm)."""
    return max(_spectral_norm(x) for x in a.matrices)


def frobenius_norm(a: MatrixTuple) -> float:
    return float(np.linalg.norm(a.matrices.ravel()))


def is_contraction(a: MatrixTuple, strict: bool = False, tol: Optional[float] = None) -> bool:
    tol = config.TOL if tol is None else tol
    norm = tuple_norm(a)
    return norm < 1.0 - tol if strict else norm <= 1.0 + tol


def is_normal(x: Matrix, tol: Optional[float] = None) -> bool:
    """X X* = X* X up to tol relative to ||X||^2."""
    tol = config.TOL if tol is None else tol
    xs = x.conj().T
    scale = max(1.0, float(np.linalg.norm(x)) ** 2)
    return float(np.linalg.norm(x @ xs - xs @ x)) <= tol * scale


def max_difference(a: MatrixTuple, b: MatrixTuple) -> float:
    """max_j ||A_j - B_j||_F."""
    if a.n != b.n or a.dim != b.dim:
        raise InputError(f"Cannot compare {a!r} with {b!r}.")
    if a.dim == 0:
        return 0.0
    return float(np.max(np.linalg.norm(a.matrices - b.matrices, axis=(1, 2))))
