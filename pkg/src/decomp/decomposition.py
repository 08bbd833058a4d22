"""Isotypic decomposition of matrix tuples.

Each minimal central projection of W'(A) cuts out one isotypic subspace. On it
the commutant is M_m (x) I_k for the multiplicity m and the atom dimension k.
A random Hermitian element of that block splits it into m spectral subspaces
of dimension k; matrix units between them (polar parts of compressions of a
random commutant element) align the m copies, and the first copy yields the
atom representative.
"""

from __future__ import annotations

import dataclasses
import math
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg
from jaxtyping import Complex

from ..core.config import config
from ..core.errors import InternalConsistencyError
from ..core.logging import get_logger
from ..core.schemas import BlockModel, ReportModel
from ..numeric.algebra import (
    CommutantBasis, BadDraw, commutant_basis, minimal_central_projections,
    randomized_retry, spectral_ranges
)
from ..numeric.linalg import numeric_rank
from ..numeric.matrices import (
    MatrixTuple, Seed, as_rng, compress, frobenius_norm, matrix_to_rows
)
from .invariants import InvariantKey, invariant_key

logger = get_logger(__name__)


@dataclasses.dataclass(frozen=True, eq=False)
class IsotypicBlock:
    """mult copies of one atom.

    Attributes:
      atom: Irreducible representative, of dimension k.
      multiplicity: Number of copies m.
      isometry: d x (m k) column isometry; column block i carries copy i.
      key: Trace-word fingerprint of the atom.
    """

    atom: MatrixTuple
    multiplicity: int
    isometry: Complex[np.ndarray, "d mk"]
    key: InvariantKey

    @property
    def projection(self) -> Complex[np.ndarray, "d d"]:
        return self.isometry @ self.isometry.conj().T

    @property
    def sort_key(self) -> tuple:
        return (self.atom.dim, -self.multiplicity, self.key.sort_key)

    def embedded(self) -> MatrixTuple:
        """V (I_m (x) atom) V* on the ambient space."""
        eye = np.eye(self.multiplicity, dtype=complex)
        v = self.isometry
        return MatrixTuple(np.stack([
            v @ np.kron(eye, x) @ v.conj().T for x in self.atom.matrices
        ]))

    def to_model(self) -> BlockModel:
        return BlockModel(
            atom=self.atom.to_model(),
            multiplicity=self.multiplicity,
            isometry=matrix_to_rows(self.isometry),
        )


@dataclasses.dataclass(frozen=True, eq=False)
class DecompositionReport:
    """Isotypic blocks of a tuple and the reconstruction residual."""

    n: int
    dim: int
    blocks: Tuple[IsotypicBlock, ...]
    residual: float

    def reconstruct(self) -> MatrixTuple:
        total = np.zeros((self.n, self.dim, self.dim), dtype=complex)
        for block in self.blocks:
            total += block.embedded().matrices
        return MatrixTuple(total)

    def to_model(self) -> ReportModel:
        return ReportModel(
            n=self.n,
            dim=self.dim,
            blocks=[b.to_model() for b in self.blocks],
            residual=self.residual,
        )


def _block_commutant(
    c: CommutantBasis, w: np.ndarray, tol: float
) -> CommutantBasis:
    """Orthonormal basis of the compressions W* C W of the commutant."""
    r = w.shape[1]
    compressed = w.conj().T @ c.basis @ w
    vecs = compressed.reshape(len(c), r * r)
    _, s, vh = scipy.linalg.svd(vecs, full_matrices=False)
    rank = numeric_rank(s, tol * r * max(1.0, float(s[0])))
    return CommutantBasis(dim=r, basis=vh[:rank].reshape(rank, r, r))


def _align_copies(
    block: CommutantBasis, mult: int, tol: float, rng: np.random.Generator
) -> np.ndarray:
    """Isometry [E_1, E_2 U_2, ..., E_m U_m] of the block onto m aligned copies."""
    r = block.dim
    k = r // mult

    def attempt() -> np.ndarray:
        h = block.element(rng.standard_normal(len(block)))
        ranges = spectral_ranges((h + h.conj().T) / 2, tol)
        sizes = [e.shape[1] for e in ranges]
        if sizes != [k] * mult:
            raise BadDraw(f"cluster sizes {sizes}, expected {mult} of size {k}")
        g = rng.standard_normal((2, len(block)))
        t = block.element(g[0] + 1j * g[1])
        first = ranges[0]
        columns = [first]
        for e in ranges[1:]:
            x = e.conj().T @ t @ first
            s = np.linalg.svd(x, compute_uv=False)
            # x is a multiple of a unitary; a tiny multiple means a bad draw.
            if s[-1] <= np.sqrt(tol) * max(1.0, s[0]) or s[-1] < 0.5 * s[0]:
                raise BadDraw(f"degenerate matrix unit, singular values {s}")
            u, _ = scipy.linalg.polar(x)
            columns.append(e @ u)
        return np.hstack(columns)

    return randomized_retry(attempt, "copy alignment")


def _decompose_range(
    a: MatrixTuple,
    c: CommutantBasis,
    w: np.ndarray,
    tol: float,
    rng: np.random.Generator,
) -> IsotypicBlock:
    r = w.shape[1]
    block = _block_commutant(c, w, tol)
    mult = math.isqrt(len(block))
    if mult * mult != len(block) or r % mult:
        raise InternalConsistencyError(
            f"Isotypic block of dimension {r} has a commutant of dimension {len(block)}, "
            "which is not m^2 with m dividing the block dimension; try a tighter --tol."
        )
    if mult == 1:
        v = w
    else:
        v = w @ _align_copies(block, mult, tol, rng)
    atom = compress(a, v[:, :r // mult])
    logger.debug(f"block of dimension {r}: atom dimension {atom.dim}, multiplicity {mult}")
    return IsotypicBlock(atom=atom, multiplicity=mult, isometry=v, key=invariant_key(atom))


def isotypic_decomposition(
    a: MatrixTuple,
    tol: Optional[float] = None,
    seed: Seed = None,
) -> DecompositionReport:
    """Splits A into isotypic blocks, each carrying copies of one atom.

    Raises:
      ToleranceAmbiguityError: when a rank or clustering decision is ambiguous.
      InternalConsistencyError: when a cross-check fails, typically because
        the tolerance is too loose.
    """
    tol = config.TOL if tol is None else tol
    if a.dim == 0:
        return DecompositionReport(n=a.n, dim=0, blocks=(), residual=0.0)
    rng = as_rng(seed)
    c = commutant_basis(a, tol)
    central = minimal_central_projections(a, tol, rng, commutant=c)

    blocks: List[IsotypicBlock] = [
        _decompose_range(a, c, w, tol, rng) for w in central.ranges
    ]
    schur = sum(b.multiplicity ** 2 for b in blocks)
    if schur != len(c):
        raise InternalConsistencyError(
            f"Commutant dimension {len(c)} differs from the sum of squared multiplicities {schur}."
        )
    blocks.sort(key=lambda b: b.sort_key)
    report = DecompositionReport(n=a.n, dim=a.dim, blocks=tuple(blocks), residual=0.0)

    recon = report.reconstruct()
    diff = a.matrices - recon.matrices
    residual = float(np.max(np.linalg.norm(diff, axis=(1, 2))))
    bound = tol * (1.0 + frobenius_norm(a))
    if residual > bound:
        raise InternalConsistencyError(
            f"Reconstruction residual {residual:.3e} exceeds {bound:.3e}."
        )
    logger.debug(f"decomposed {a!r} into {len(blocks)} block(s), residual {residual:.3e}")
    return dataclasses.replace(report, residual=residual)
