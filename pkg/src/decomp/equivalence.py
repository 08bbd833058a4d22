"""Unitary equivalence of matrix tuples."""

from __future__ import annotations

from typing import List, Optional

import numpy as np

from ..core.config import config
from ..core.errors import InputError, InternalConsistencyError
from ..core.logging import get_logger
from ..numeric.linalg import is_close, null_space
from ..numeric.matrices import Matrix, MatrixTuple, Seed, tuple_norm
from .decomposition import DecompositionReport, IsotypicBlock, isotypic_decomposition
from .invariants import invariant_key

logger = get_logger(__name__)


def intertwiners(x: MatrixTuple, y: MatrixTuple, tol: Optional[float] = None) -> np.ndarray:
    """Orthonormal basis of {T : T x_j = y_j T and T x_j* = y_j* T for all j}.

    Returns:
      Array of shape (r, k_y, k_x).
    """
    tol = config.TOL if tol is None else tol
    if x.n != y.n:
        raise InputError(f"Tuples of lengths {x.n} and {y.n} cannot be intertwined.")
    kx, ky = x.dim, y.dim
    rows = []
    # Row-major vec: vec(T X) = (I (x) X^T) vec T, vec(Y T) = (Y (x) I) vec T.
    for xj, yj in zip(x.generators(), y.generators()):
        rows.append(np.kron(np.eye(ky), xj.T) - np.kron(yj, np.eye(kx)))
    mat = np.vstack(rows)
    scale = max(kx, ky) * 2.0 * max(tuple_norm(x), tuple_norm(y))
    basis, _ = null_space(mat, tol, scale)
    return basis.T.reshape(-1, ky, kx)


def unitary_intertwiner(
    x: MatrixTuple, y: MatrixTuple, tol: Optional[float] = None
) -> Optional[Matrix]:
    """The unitary U with U x_j U* = y_j for irreducible x, y, or None.

    By Schur's lemma the intertwiner space of two irreducibles is zero or
    spanned by a multiple of a unitary.

    Raises:
      InternalConsistencyError: if the intertwiner space has dimension > 1,
        which cannot happen for irreducible inputs.
    """
    tol = config.TOL if tol is None else tol
    if x.dim != y.dim:
        return None
    if x.dim == 0:
        return np.zeros((0, 0), dtype=complex)
    space = intertwiners(x, y, tol)
    if len(space) == 0:
        return None
    if len(space) > 1:
        raise InternalConsistencyError(
            f"Intertwiner space of dimension {len(space)} between atoms; "
            "the atoms are not irreducible at this tolerance."
        )
    t = space[0]
    u = t * np.sqrt(x.dim / np.real(np.vdot(t, t)))
    loose = np.sqrt(tol)
    if not is_close(u.conj().T @ u, np.eye(x.dim), loose):
        return None
    if not all(is_close(u @ xj @ u.conj().T, yj, loose) for xj, yj in zip(x, y)):
        return None
    return u


def atoms_equivalent(x: MatrixTuple, y: MatrixTuple, tol: Optional[float] = None) -> bool:
    return unitary_intertwiner(x, y, tol) is not None


def keys_compatible(a: MatrixTuple, b: MatrixTuple) -> bool:
    """Cheap necessary condition: trace-word fingerprints agree."""
    return invariant_key(a).close_to(invariant_key(b))


def match_blocks(
    ra: DecompositionReport, rb: DecompositionReport, tol: Optional[float] = None
) -> Optional[List[int]]:
    """Pairs the blocks of two reports by equivalent atom and equal multiplicity.

    Returns:
      For each block of `ra`, the index of its partner in `rb`; None if the
      reports do not match.
    """
    if len(ra.blocks) != len(rb.blocks):
        return None
    used = set()
    pairing = []
    for block in ra.blocks:
        partner = _find_partner(block, rb.blocks, used, tol)
        if partner is None:
            return None
        used.add(partner)
        pairing.append(partner)
    return pairing


def _find_partner(
    block: IsotypicBlock, candidates, used: set, tol: Optional[float]
) -> Optional[int]:
    for i, other in enumerate(candidates):
        if i in used:
            continue
        if (other.multiplicity, other.atom.dim) != (block.multiplicity, block.atom.dim):
            continue
        if not block.key.close_to(other.key):
            continue
        if atoms_equivalent(block.atom, other.atom, tol):
            return i
    return None


def are_equivalent(
    a: MatrixTuple,
    b: MatrixTuple,
    tol: Optional[float] = None,
    seed: Seed = None,
) -> bool:
    """Whether U A_j U* = B_j for some unitary U and every j.

    Raises:
      InputError: if the tuples have different lengths.
    """
    if a.n != b.n:
        raise InputError(f"Cannot compare tuples of lengths {a.n} and {b.n}.")
    if a.dim != b.dim:
        return False
    if a.dim == 0:
        return True
    if not keys_compatible(a, b):
        logger.debug("are_equivalent: trace-word fingerprints differ")
        return False
    seed = config.SEED if seed is None else seed
    ra = isotypic_decomposition(a, tol, seed)
    rb = isotypic_decomposition(b, tol, seed)
    return match_blocks(ra, rb, tol) is not None
