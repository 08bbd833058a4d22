"""Classes of matrix tuples and the orders between tuples."""

from __future__ import annotations

from typing import FrozenSet, Optional

from ..core.config import config
from ..core.errors import InputError
from ..core.logging import get_logger
from ..numeric.matrices import MatrixTuple, Seed
from ..symbolic.classes import TupleClass, covers, disjoint, leq, leq_s
from .decomposition import DecompositionReport, isotypic_decomposition
from .registry import AtomRegistry

logger = get_logger(__name__)


def class_of_report(report: DecompositionReport, registry: AtomRegistry) -> TupleClass:
    """Multiplicity function of a decomposition over registry labels."""
    mults = {}
    for block in report.blocks:
        label = registry.resolve(block.atom)
        if label in mults:
            raise InputError(f"Two blocks of one report resolved to {label.id}.")
        mults[label] = block.multiplicity
    return TupleClass.of(mults)


def classify(
    a: MatrixTuple,
    registry: Optional[AtomRegistry] = None,
    tol: Optional[float] = None,
    seed: Seed = None,
) -> TupleClass:
    """The class of A as {atom label: multiplicity}, registering new atoms."""
    registry = registry if registry is not None else AtomRegistry(tol=tol, seed=seed)
    seed = config.SEED if seed is None else seed
    report = isotypic_decomposition(a, tol, seed)
    cls_ = class_of_report(report, registry)
    logger.debug(f"classified {a!r} as {cls_}")
    return cls_


REL_LEQ = "leq"
REL_GEQ = "geq"
REL_LEQ_S = "leq_s"
REL_DISJOINT = "disjoint"
REL_COVERS = "covers"
REL_EQUIVALENT = "equivalent"


def relations(
    a: MatrixTuple,
    b: MatrixTuple,
    registry: Optional[AtomRegistry] = None,
    tol: Optional[float] = None,
    seed: Seed = None,
) -> FrozenSet[str]:
    """Order relations between two tuples, read off their classes.

    A <= B means A is equivalent to a reduced part of B; A <=^s B asks in
    addition for a centrally reducing part; A << B means every atom of A
    occurs in B.
    """
    if a.n != b.n:
        raise InputError(f"Cannot relate tuples of lengths {a.n} and {b.n}.")
    registry = registry if registry is not None else AtomRegistry(tol=tol, seed=seed)
    ca = classify(a, registry, tol, seed)
    cb = classify(b, registry, tol, seed)
    found = set()
    if leq(ca, cb):
        found.add(REL_LEQ)
    if leq(cb, ca):
        found.add(REL_GEQ)
    if leq_s(ca, cb):
        found.add(REL_LEQ_S)
    if disjoint(ca, cb):
        found.add(REL_DISJOINT)
    if covers(ca, cb):
        found.add(REL_COVERS)
    if ca == cb:
        found.add(REL_EQUIVALENT)
    return frozenset(found)
