"""Brute-force unitary equivalence by trace words.

Two tuples of the same size are unitarily equivalent iff tr w(A) = tr w(B) for
every word w in the letters A_j, A_j*. The words of A (+) B span the algebra
generated by the joint tuple, and w -> tr w(A) - tr w(B) is linear on it, so it
suffices to test a spanning set. The span is grown breadth first: a word is
extended only if it was linearly independent of everything found before it,
which reaches every word (of any length, in particular up to 2 d^2).
"""

from __future__ import annotations

from typing import List, Optional

import numpy as np

from ..core.config import config
from ..core.errors import DomainError, InputError
from ..core.logging import get_logger
from ..numeric.matrices import MatrixTuple

logger = get_logger(__name__)


def _joint_letters(a: MatrixTuple, b: MatrixTuple) -> List[tuple]:
    return list(zip(a.generators(), b.generators()))


def specht_equivalent(
    a: MatrixTuple, b: MatrixTuple, tol: Optional[float] = None
) -> bool:
    """Exhaustive trace-word comparison.

    Raises:
      InputError: for tuples of different lengths.
      DomainError: above SPECHT_MAX_DIM.
    """
    tol = config.SPECHT_TOL if tol is None else tol
    if a.n != b.n:
        raise InputError(f"Cannot compare tuples of lengths {a.n} and {b.n}.")
    if max(a.dim, b.dim) > config.SPECHT_MAX_DIM:
        raise DomainError(
            f"The trace-word oracle is limited to d <= {config.SPECHT_MAX_DIM}, "
            f"got {max(a.dim, b.dim)}."
        )
    if a.dim != b.dim:
        return False
    d = a.dim
    if d == 0:
        return True

    letters = _joint_letters(a, b)
    basis: List[np.ndarray] = []
    frontier = [(np.eye(d, dtype=complex), np.eye(d, dtype=complex))]
    words = 0
    while frontier:
        next_frontier = []
        for xa, xb in frontier:
            for la, lb in letters:
                wa, wb = xa @ la, xb @ lb
                words += 1
                vec = np.concatenate([wa.ravel(), wb.ravel()])
                norm = float(np.linalg.norm(vec))
                if norm == 0.0:
                    continue
                wa, wb, vec = wa / norm, wb / norm, vec / norm
                if abs(np.trace(wa) - np.trace(wb)) > tol * np.sqrt(d):
                    logger.debug(f"specht: traces differ after {words} word(s)")
                    return False
                residual = vec.copy()
                for q in basis:
                    residual -= np.vdot(q, residual) * q
                r = float(np.linalg.norm(residual))
                if r > tol:
                    basis.append(residual / r)
                    next_frontier.append((wa, wb))
        frontier = next_frontier
    logger.debug(f"specht: {words} word(s), span of dimension {len(basis)}")
    return True
