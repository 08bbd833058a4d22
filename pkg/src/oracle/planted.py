"""Planted instances: tuples built from known atoms and multiplicities."""

from __future__ import annotations

import dataclasses
from collections.abc import Sequence
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..core.config import config
from ..core.errors import InputError, ToleranceAmbiguityError
from ..core.logging import get_logger
from ..decomp.registry import AtomRegistry
from ..numeric.algebra import is_irreducible
from ..numeric.matrices import (
    MatrixTuple, Seed, ampl, as_rng, conjugate, direct_sum, random_tuple, random_unitary
)
from ..symbolic.classes import PrimeLabel, TupleClass

logger = get_logger(__name__)


@dataclasses.dataclass(frozen=True, eq=False)
class PlantedTuple:
    """U (m_1 (.) P_1 (+) ... (+) m_r (.) P_r) U* together with its ingredients."""

    system: MatrixTuple
    atoms: Tuple[MatrixTuple, ...]
    multiplicities: Tuple[int, ...]
    unitary: Optional[np.ndarray]

    def planted_class(self, registry: AtomRegistry) -> TupleClass:
        """The planted multiplicity function over `registry` labels."""
        mults: Dict[PrimeLabel, int] = {}
        for atom, m in zip(self.atoms, self.multiplicities):
            label = registry.resolve(atom)
            mults[label] = mults.get(label, 0) + m
        return TupleClass.of(mults)

    @property
    def schur_dimension(self) -> int:
        """Sum of squared multiplicities: the commutant dimension."""
        return sum(m * m for m in self.multiplicities)


def planted_tuple(
    atoms_with_mults: Sequence[Tuple[MatrixTuple, int]],
    seed: Seed = None,
    rotate: bool = True,
) -> PlantedTuple:
    """Direct sum of amplified atoms, conjugated by a Haar-random unitary."""
    if not atoms_with_mults:
        raise InputError("A planted tuple needs at least one atom.")
    rng = as_rng(seed)
    atoms = tuple(a for a, _ in atoms_with_mults)
    mults = tuple(int(m) for _, m in atoms_with_mults)
    base = direct_sum(*(ampl(m, a) for a, m in atoms_with_mults))
    u = random_unitary(base.dim, rng) if rotate else None
    system = conjugate(u, base) if rotate else base
    return PlantedTuple(system=system, atoms=atoms, multiplicities=mults, unitary=u)


def random_irreducible(n: int, k: int, seed: Seed = None) -> MatrixTuple:
    """A Gaussian tuple, redrawn until its commutant is the scalars.

    Generic tuples are irreducible, so a redraw is rare.
    """
    rng = as_rng(seed)
    for attempt in range(config.PROJECTION_RETRIES):
        candidate = random_tuple(n, k, rng)
        if is_irreducible(candidate):
            return candidate
        logger.debug(f"random_irreducible: draw {attempt + 1} was reducible")
    raise ToleranceAmbiguityError(
        f"No irreducible {n}-tuple of dimension {k} in {config.PROJECTION_RETRIES} draws."
    )


def random_planted(
    n: int,
    seed: Seed = None,
    max_atoms: int = 3,
    max_atom_dim: int = 4,
    max_mult: int = 4,
    max_dim: int = 32,
) -> PlantedTuple:
    """A random planted instance of total dimension at most `max_dim`."""
    rng = as_rng(seed)
    count = int(rng.integers(1, max_atoms + 1))
    chosen: List[Tuple[MatrixTuple, int]] = []
    total = 0
    for _ in range(count):
        k = int(rng.integers(1, max_atom_dim + 1))
        m = int(rng.integers(1, max_mult + 1))
        if total + k * m > max_dim:
            continue
        chosen.append((random_irreducible(n, k, rng), m))
        total += k * m
    if not chosen:
        chosen.append((random_irreducible(n, 1, rng), 1))
    return planted_tuple(chosen, rng)


def random_pair(
    n: int, d: int, equivalent: bool, seed: Optional[Seed] = None
) -> Tuple[MatrixTuple, MatrixTuple]:
    """(A, U A U*) when `equivalent`, otherwise two independent Gaussian tuples."""
    rng = as_rng(seed)
    a = random_tuple(n, d, rng)
    if equivalent:
        return a, conjugate(random_unitary(d, rng), a)
    return a, random_tuple(n, d, rng)
