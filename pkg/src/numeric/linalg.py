"""Rank decisions, null spaces and spectral clustering with explicit tolerances."""

from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg
from jaxtyping import Complex, Float

from ..core.config import config
from ..core.errors import ToleranceAmbiguityError
from ..core.logging import get_logger

logger = get_logger(__name__)


def numeric_rank(
    singular_values: Float[np.ndarray, "k"],
    threshold: float,
    gap_factor: Optional[float] = None,
) -> int:
    """Counts singular values above `threshold`.

    Raises:
      ToleranceAmbiguityError: if some singular value falls inside the band
        (threshold / gap, threshold * gap], where the decision would flip under a
        modest change of tolerance.
    """
    gap = config.RANK_GAP_FACTOR if gap_factor is None else gap_factor
    s = np.asarray(singular_values, dtype=float)
    if s.size == 0 or threshold <= 0:
        return int(np.count_nonzero(s > 0))
    ambiguous = (s > threshold / gap) & (s <= threshold * gap)
    if np.any(ambiguous):
        logger.warning(
            f"Ambiguous rank: {int(ambiguous.sum())} singular value(s) near {threshold:.3e}"
        )
        raise ToleranceAmbiguityError(
            f"Rank decision is ambiguous at threshold {threshold:.3e}", spectrum=s
        )
    return int(np.count_nonzero(s > threshold))


def null_space(
    mat: Complex[np.ndarray, "m k"],
    tol: float,
    scale: float,
) -> Tuple[Complex[np.ndarray, "k r"], Float[np.ndarray, "s"]]:
    """Orthonormal basis of the numerical null space of `mat`.

    A singular value counts as zero when it is at most `tol * scale`.

    Args:
      mat: The linear map, as a matrix.
      tol: Relative tolerance.
      scale: Reference magnitude (typically sigma_max of the map times d).

    Returns:
      (basis, singular_values), basis columns orthonormal.
    """
    m, k = mat.shape
    if k == 0:
        return np.zeros((0, 0), dtype=complex), np.zeros(0)
    if m == 0 or scale == 0:
        return np.eye(k, dtype=complex), np.zeros(0)
    _, s, vh = scipy.linalg.svd(mat, full_matrices=True, lapack_driver="gesvd")
    rank = numeric_rank(s, tol * scale)
    logger.debug(f"null_space: {m}x{k}, rank {rank}, nullity {k - rank}")
    return vh[rank:].conj().T, s


def cluster_eigenvalues(
    values: Float[np.ndarray, "k"], tol: float
) -> List[np.ndarray]:
    """Groups ascending eigenvalues into clusters of numerically equal values.

    Consecutive values are split when their gap exceeds
    CLUSTER_GAP_FACTOR * tol * spread.

    Returns:
      Index arrays, one per cluster, in ascending order of eigenvalue.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return []
    spread = float(values[-1] - values[0])
    if spread <= tol * max(1.0, float(np.max(np.abs(values)))):
        return [np.arange(values.size)]
    cut = config.CLUSTER_GAP_FACTOR * tol * spread
    breaks = np.nonzero(np.diff(values) > cut)[0] + 1
    return np.split(np.arange(values.size), breaks)


def psd_sqrt(h: Complex[np.ndarray, "d d"]) -> Complex[np.ndarray, "d d"]:
    """Positive square root of a Hermitian PSD matrix, negative round-off clamped."""
    if h.shape[0] == 0:
        return h.astype(complex)
    w, v = np.linalg.eigh((h + h.conj().T) / 2)
    w = np.sqrt(np.clip(w, 0.0, None))
    return (v * w) @ v.conj().T


def is_close(x: np.ndarray, y: np.ndarray, tol: float) -> bool:
    """Frobenius-relative closeness."""
    scale = max(1.0, float(np.linalg.norm(x)), float(np.linalg.norm(y)))
    return float(np.linalg.norm(x - y)) <= tol * scale


def commutes(x: np.ndarray, y: np.ndarray, tol: float) -> bool:
    """Whether xy = yx up to tol relative to |x| |y|."""
    scale = max(1.0, float(np.linalg.norm(x)) * float(np.linalg.norm(y)))
    return float(np.linalg.norm(x @ y - y @ x)) <= tol * scale


def is_projection(p: np.ndarray, tol: float) -> bool:
    """P = P* = P^2 up to tol."""
    return is_close(p, p.conj().T, tol) and is_close(p @ p, p, tol)


def span_projector(vectors: Complex[np.ndarray, "m k"], tol: float) -> Complex[np.ndarray, "k k"]:
    """Orthogonal projection onto the span of the rows of `vectors`."""
    if vectors.shape[0] == 0:
        return np.zeros((vectors.shape[1],) * 2, dtype=complex)
    q = scipy.linalg.orth(vectors.T, rcond=tol)
    return q @ q.conj().T
