"""Ideal-relative splits of matrix tuples.

An ideal is given by a unitarily invariant predicate on atoms. The ideal part
of A lives on the sum of the isotypic subspaces whose atom satisfies the
predicate; the complement carries no atom of the ideal. Both subspaces are
ranges of central projections, so they reduce A.
"""

from __future__ import annotations

import dataclasses
import re
from collections.abc import Callable, Sequence
from typing import List, Optional

import numpy as np
from jaxtyping import Complex

from ..core.config import config
from ..core.errors import InputError, InternalConsistencyError
from ..core.logging import get_logger
from ..core.schemas import SplitModel
from ..numeric.matrices import MatrixTuple, Seed, compress, is_normal, matrix_to_rows, tuple_norm
from .decomposition import DecompositionReport, IsotypicBlock, isotypic_decomposition

logger = get_logger(__name__)


@dataclasses.dataclass(frozen=True)
class AtomPredicate:
    """A named, unitarily invariant property of atoms."""

    name: str
    test: Callable[[MatrixTuple], bool] = dataclasses.field(compare=False)

    def __call__(self, atom: MatrixTuple) -> bool:
        return bool(self.test(atom))


def _jointly_normal(atom: MatrixTuple) -> bool:
    return atom.dim == 1


def _separately_normal(atom: MatrixTuple) -> bool:
    return all(is_normal(x) for x in atom.matrices)


JOINTLY_NORMAL = AtomPredicate("jointly-normal", _jointly_normal)
SEPARATELY_NORMAL = AtomPredicate("separately-normal", _separately_normal)


def norm_at_most(r: float, tol: Optional[float] = None) -> AtomPredicate:
    """||atom|| <= r, with a relative slack of tol."""
    tol = config.TOL if tol is None else tol
    if r < 0:
        raise InputError(f"Norm bound must be non-negative, got {r}.")
    return AtomPredicate(f"norm<={r:g}", lambda atom: tuple_norm(atom) <= r + tol * max(1.0, r))


def norm_below_one(tol: Optional[float] = None) -> AtomPredicate:
    """||atom|| < 1 by more than tol."""
    tol = config.TOL if tol is None else tol
    return AtomPredicate("norm<1", lambda atom: tuple_norm(atom) < 1.0 - tol)


def _attains_norm(atom: MatrixTuple, tol: float) -> bool:
    """Some unit vector x has ||atom_j x|| = ||atom|| for some j."""
    norm = tuple_norm(atom)
    for x in atom.matrices:
        _, _, vh = np.linalg.svd(x)
        top = vh[0].conj()
        if abs(float(np.linalg.norm(x @ top)) - norm) <= tol * max(1.0, norm):
            return True
    return False


def norm_one_unattained(tol: Optional[float] = None) -> AtomPredicate:
    """The atom does not attain its norm. Never true in finite dimensions."""
    tol = config.TOL if tol is None else tol
    return AtomPredicate("norm=1-unattained", lambda atom: not _attains_norm(atom, tol))


_NUMBER = r"([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)"


@dataclasses.dataclass(frozen=True)
class PredicateFamily:
    """A named ideal as written on the command line, with its numeric parameters.

    Attributes:
      syntax: How the ideal is written, e.g. 'norm<=r'.
      pattern: Full-match regex; each group is a float argument of `make`.
      make: Builds the predicate from the parsed arguments and a tolerance.
    """

    syntax: str
    pattern: re.Pattern = dataclasses.field(compare=False)
    make: Callable[..., AtomPredicate] = dataclasses.field(compare=False)

    @classmethod
    def fixed(cls, predicate: AtomPredicate) -> "PredicateFamily":
        return cls(predicate.name, re.compile(re.escape(predicate.name)), lambda tol: predicate)

    def parse(self, text: str, tol: Optional[float] = None) -> Optional[AtomPredicate]:
        match = self.pattern.fullmatch(text)
        if match is None:
            return None
        return self.make(*(float(g) for g in match.groups()), tol=tol)


def builtin_predicates() -> dict[str, PredicateFamily]:
    """Every ideal `parse_predicate` accepts, keyed by its syntax."""
    families = [
        PredicateFamily.fixed(JOINTLY_NORMAL),
        PredicateFamily.fixed(SEPARATELY_NORMAL),
        PredicateFamily("norm<=r", re.compile(rf"norm\s*<=\s*{_NUMBER}"), norm_at_most),
        PredicateFamily("norm<1", re.compile(r"norm\s*<\s*1"), norm_below_one),
        PredicateFamily(
            "norm=1-unattained", re.compile(r"norm\s*=\s*1-unattained"), norm_one_unattained
        ),
    ]
    return {f.syntax: f for f in families}


def parse_predicate(spec: str, tol: Optional[float] = None) -> AtomPredicate:
    """Any syntax listed by `builtin_predicates`, e.g. 'jointly-normal' or 'norm<=0.5'."""
    text = spec.strip().lower().replace("_", "-")
    builtins = builtin_predicates()
    for family in builtins.values():
        predicate = family.parse(text, tol)
        if predicate is not None:
            return predicate
    raise InputError(f"Unknown ideal {spec!r}; expected one of {sorted(builtins)}.")


@dataclasses.dataclass(frozen=True, eq=False)
class TupleParts:
    """A reduced part of a tuple.

    Attributes:
      restricted: A restricted to the subspace, in the orthonormal basis `basis`.
      basis: d x r isometry onto the subspace.
    """

    restricted: MatrixTuple
    basis: Complex[np.ndarray, "d r"]

    @property
    def projection(self) -> Complex[np.ndarray, "d d"]:
        return self.basis @ self.basis.conj().T

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


@dataclasses.dataclass(frozen=True, eq=False)
class IdealSplit:
    ideal: str
    part: TupleParts
    complement: TupleParts

    def to_model(self) -> SplitModel:
        return SplitModel(
            ideal=self.ideal,
            part=self.part.restricted.to_model(),
            complement=self.complement.restricted.to_model(),
            part_projection=matrix_to_rows(self.part.projection),
            complement_projection=matrix_to_rows(self.complement.projection),
        )


def _parts(a: MatrixTuple, blocks: Sequence[IsotypicBlock]) -> TupleParts:
    if blocks:
        basis = np.hstack([b.isometry for b in blocks])
    else:
        basis = np.zeros((a.dim, 0), dtype=complex)
    return TupleParts(restricted=compress(a, basis), basis=basis)


def _report(a: MatrixTuple, report, tol, seed) -> DecompositionReport:
    if report is not None:
        return report
    return isotypic_decomposition(a, tol, config.SEED if seed is None else seed)


def ideal_split(
    a: MatrixTuple,
    predicate: AtomPredicate,
    tol: Optional[float] = None,
    seed: Seed = None,
    report: Optional[DecompositionReport] = None,
) -> IdealSplit:
    """Splits A into its ideal part and the completely non-ideal complement."""
    report = _report(a, report, tol, seed)
    inside = [b for b in report.blocks if predicate(b.atom)]
    outside = [b for b in report.blocks if not predicate(b.atom)]
    logger.debug(
        f"{predicate.name}: {len(inside)} block(s) inside, {len(outside)} outside"
    )
    return IdealSplit(ideal=predicate.name, part=_parts(a, inside), complement=_parts(a, outside))


def multi_split(
    a: MatrixTuple,
    predicates: Sequence[AtomPredicate],
    tol: Optional[float] = None,
    seed: Seed = None,
    report: Optional[DecompositionReport] = None,
) -> List[TupleParts]:
    """Ordered split along a chain of ideals.

    Part i holds the blocks whose atom first satisfies predicates[i]; the last
    part holds the blocks satisfying none. For nested ideals I_1 c I_2 c ...
    part i is the (I_i minus I_{i-1}) piece.
    """
    report = _report(a, report, tol, seed)
    groups: List[List[IsotypicBlock]] = [[] for _ in range(len(predicates) + 1)]
    for block in report.blocks:
        index = next(
            (i for i, p in enumerate(predicates) if p(block.atom)), len(predicates)
        )
        groups[index].append(block)
    return [_parts(a, g) for g in groups]


def normal_three_way_split(
    a: MatrixTuple, tol: Optional[float] = None, seed: Seed = None
) -> List[TupleParts]:
    """Jointly normal, purely separately normal, and not separately normal parts."""
    return multi_split(a, [JOINTLY_NORMAL, SEPARATELY_NORMAL], tol, seed)


def norm_filtration(
    a: MatrixTuple,
    radii: Sequence[float],
    tol: Optional[float] = None,
    seed: Seed = None,
) -> List[TupleParts]:
    """Parts with atom norms in [0, r_1], (r_1, r_2], ..., (r_k, inf)."""
    radii = sorted(radii)
    return multi_split(a, [norm_at_most(r, tol) for r in radii], tol, seed)


@dataclasses.dataclass(frozen=True, eq=False)
class ContractionSplit:
    """H0: atoms of norm < 1. H1: norm 1, not attained. H2: norm 1, attained."""

    h0: TupleParts
    h1: TupleParts
    h2: TupleParts


def contraction_split(
    a: MatrixTuple, tol: Optional[float] = None, seed: Seed = None
) -> ContractionSplit:
    """Three-way split of a contraction by the norms of its reduced parts.

    In finite dimensions every norm is attained, so H1 is always trivial.

    Raises:
      InputError: if A is not a contraction.
      InternalConsistencyError: if H1 comes out nontrivial.
    """
    tol = config.TOL if tol is None else tol
    if tuple_norm(a) > 1.0 + tol:
        raise InputError(f"contraction_split needs ||A|| <= 1, got {tuple_norm(a):.17g}.")
    h0, h1, h2 = multi_split(a, [norm_below_one(tol), norm_one_unattained(tol)], tol, seed)
    if h1.dim:
        raise InternalConsistencyError("A finite-dimensional contraction has a nontrivial H1.")
    return ContractionSplit(h0=h0, h1=h1, h2=h2)
