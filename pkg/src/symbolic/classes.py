"""Unitary-equivalence classes as finite-support multiplicity functions.

A `TupleClass` maps prime labels to extended scalars. Direct sums add
multiplicities pointwise, the order compares them pointwise, and lattice
operations take pointwise max / min. Every label is an isolated point of the
model, so all of these are exact.

Admissibility by kind:

  * atoms carry cardinals (non-negative integers or alephs);
  * fractals carry 0 or alephs;
  * semiprimes carry any extended scalar.
"""

from __future__ import annotations

import dataclasses
import enum
import itertools
from collections.abc import Iterable, Mapping, Sequence
from typing import Dict, FrozenSet, Optional, Tuple

import immutabledict

from ..core.errors import (
    AdmissibilityError, InputError, NotComparableError, PreconditionError
)
from ..core.schemas import ClassModel, LabelModel
from .scalars import ALEPH_0, ONE, ZERO, ExtScalar, ScalarLike, add, mul, sub_delta


class LabelKind(str, enum.Enum):
    """Kinds of prime labels."""
    ATOM = "atom"
    SEMIPRIME_II1 = "semiprime-ii1"
    SEMIPRIME_II_INF = "semiprime-ii-inf"
    FRACTAL = "fractal"

    @property
    def is_semiprime(self) -> bool:
        return self in (LabelKind.SEMIPRIME_II1, LabelKind.SEMIPRIME_II_INF)


class TypeTag(str, enum.Enum):
    """Type of a label's content: I (atoms), II (semiprimes), III (fractals)."""
    I = "I"  # noqa: E741
    II = "II"
    III = "III"


_KIND_TO_TYPE = immutabledict.immutabledict({
    LabelKind.ATOM: TypeTag.I,
    LabelKind.SEMIPRIME_II1: TypeTag.II,
    LabelKind.SEMIPRIME_II_INF: TypeTag.II,
    LabelKind.FRACTAL: TypeTag.III,
})


@dataclasses.dataclass(frozen=True)
class PrimeLabel:
    """An abstract prime.

    Attributes:
      id: Identifier, unique within a registry.
      kind: Atom, semiprime (II_1 or II_inf) or fractal.
      dim: Atom dimension n, or None for omega. Always None for non-atoms.
    """

    id: str
    kind: LabelKind = LabelKind.ATOM
    dim: Optional[int] = 1

    def __post_init__(self):
        object.__setattr__(self, "kind", LabelKind(self.kind))
        if not self.id:
            raise InputError("Prime labels need a non-empty id.")
        if self.kind is LabelKind.ATOM:
            if self.dim is not None and self.dim < 1:
                raise InputError(f"Atom {self.id} has dimension {self.dim} < 1.")
        elif self.dim is not None:
            object.__setattr__(self, "dim", None)

    @classmethod
    def atom(cls, id: str, dim: Optional[int] = 1) -> "PrimeLabel":
        return cls(id=id, kind=LabelKind.ATOM, dim=dim)

    @classmethod
    def semiprime(cls, id: str, infinite: bool = False) -> "PrimeLabel":
        kind = LabelKind.SEMIPRIME_II_INF if infinite else LabelKind.SEMIPRIME_II1
        return cls(id=id, kind=kind, dim=None)

    @classmethod
    def fractal(cls, id: str) -> "PrimeLabel":
        return cls(id=id, kind=LabelKind.FRACTAL, dim=None)

    @property
    def type_tag(self) -> TypeTag:
        return _KIND_TO_TYPE[self.kind]

    @property
    def dim_scalar(self) -> ExtScalar:
        """n for finite atoms, aleph_0 for everything else."""
        if self.kind is LabelKind.ATOM and self.dim is not None:
            return ExtScalar.rational(self.dim)
        return ALEPH_0

    def __str__(self) -> str:
        return self.id


def is_admissible(label: PrimeLabel, value: ExtScalar) -> bool:
    """Whether `value` may be the multiplicity of `label`."""
    match label.kind:
        case LabelKind.ATOM:
            return value.is_cardinal
        case LabelKind.FRACTAL:
            return value.is_zero or value.is_infinite
        case _:
            return True


def admissible_values(label: PrimeLabel, candidates: Iterable[ExtScalar]) -> list[ExtScalar]:
    """Filters `candidates` down to the admissible multiplicities of `label`."""
    return [v for v in candidates if is_admissible(label, v)]


@dataclasses.dataclass(frozen=True)
class TupleClass:
    """A unitary-equivalence class in the discrete model.

    Attributes:
      mults: Multiplicity of each supported label. Zero entries are dropped on
        construction, so the keys are exactly the support.
    """

    mults: Mapping[PrimeLabel, ExtScalar] = dataclasses.field(
        default_factory=immutabledict.immutabledict
    )

    def __post_init__(self):
        cleaned = {}
        ids = {}
        for label, value in self.mults.items():
            value = ExtScalar.of(value)
            if label.id in ids and ids[label.id] != label:
                raise InputError(f"Two different labels share the id {label.id!r}.")
            ids[label.id] = label
            if not is_admissible(label, value):
                raise AdmissibilityError(
                    f"Multiplicity {value} is not admissible for {label.kind.value} "
                    f"label {label.id!r}."
                )
            if not value.is_zero:
                cleaned[label] = value
        ordered = sorted(cleaned.items(), key=lambda item: item[0].id)
        object.__setattr__(self, "mults", immutabledict.immutabledict(ordered))

    @classmethod
    def of(cls, mults: Optional[Mapping[PrimeLabel, ScalarLike]] = None) -> "TupleClass":
        return cls(mults=dict(mults or {}))

    @property
    def support(self) -> FrozenSet[PrimeLabel]:
        return frozenset(self.mults)

    @property
    def is_zero(self) -> bool:
        return not self.mults

    def __getitem__(self, label: PrimeLabel) -> ExtScalar:
        return self.mults.get(label, ZERO)

    def __len__(self) -> int:
        return len(self.mults)

    def items(self):
        return self.mults.items()

    def __str__(self) -> str:
        body = ", ".join(f"{label.id}:{value}" for label, value in self.mults.items())
        return "{" + body + "}"

    def __repr__(self) -> str:
        return f"TupleClass({self})"

    def to_model(self) -> ClassModel:
        return ClassModel(labels=[
            LabelModel(
                id=label.id,
                kind=label.kind.value,
                dim=label.dim if label.dim is not None else "omega",
                mult=value.to_model(),
            )
            for label, value in self.mults.items()
        ])

    @classmethod
    def from_model(cls, model: ClassModel) -> "TupleClass":
        mults: Dict[PrimeLabel, ExtScalar] = {}
        for entry in model.labels:
            label = PrimeLabel(
                id=entry.id,
                kind=LabelKind(entry.kind),
                dim=None if entry.dim == "omega" else entry.dim,
            )
            if label in mults:
                raise InputError(f"Label {label.id!r} listed twice.")
            mults[label] = ExtScalar.from_model(entry.mult)
        return cls(mults=mults)


EMPTY = TupleClass()


def _labels(*classes: TupleClass) -> list[PrimeLabel]:
    seen = set()
    for cls_ in classes:
        seen.update(cls_.support)
    return sorted(seen, key=lambda label: label.id)


def _nonempty(classes: Iterable[TupleClass], op: str) -> list[TupleClass]:
    classes = list(classes)
    if not classes:
        raise PreconditionError(f"{op} needs a nonempty family of classes.")
    return classes


# Semigroup ------------------------------------------------------------------


def oplus(classes: Iterable[TupleClass]) -> TupleClass:
    """Direct sum: pointwise addition of multiplicities."""
    total: Dict[PrimeLabel, ExtScalar] = {}
    for cls_ in classes:
        for label, value in cls_.items():
            total[label] = add(total.get(label, ZERO), value)
    return TupleClass(mults=total)


def boxplus(classes: Iterable[TupleClass]) -> TupleClass:
    """Direct sum of pairwise disjoint classes."""
    classes = list(classes)
    for a, b in itertools.combinations(classes, 2):
        if not disjoint(a, b):
            raise PreconditionError(f"boxplus needs disjoint summands, got {a} and {b}.")
    return oplus(classes)


def scalar_mul(alpha: ScalarLike, a: TupleClass) -> TupleClass:
    """alpha (.) A: pointwise multiplication.

    Non-integer rationals are only defined on semiprime support.

    Raises:
      AdmissibilityError: for a non-integer rational on atom or fractal support,
        or when a product leaves the admissible values of its label.
    """
    alpha = ExtScalar.of(alpha)
    if alpha.is_finite and not alpha.is_integer:
        bad = [label.id for label in a.support if not label.kind.is_semiprime]
        if bad:
            raise AdmissibilityError(
                f"{alpha} (.) A is defined only on semiprime support; offending labels: "
                f"{', '.join(bad)}."
            )
    return TupleClass(mults={label: mul(alpha, value) for label, value in a.items()})


# Orders ---------------------------------------------------------------------


def leq(a: TupleClass, b: TupleClass) -> bool:
    """A <= B: multiplicities pointwise below."""
    return all(a[label] <= b[label] for label in a.support)


def leq_s(a: TupleClass, b: TupleClass) -> bool:
    """A <=^s B: A is B restricted to part of B's support."""
    return all(b[label] == value for label, value in a.items())


def disjoint(a: TupleClass, b: TupleClass) -> bool:
    """A _|_ B: supports do not meet."""
    return a.support.isdisjoint(b.support)


def covers(a: TupleClass, b: TupleClass) -> bool:
    """A << B: support of A inside support of B."""
    return a.support <= b.support


def sup(classes: Iterable[TupleClass]) -> TupleClass:
    """Least upper bound: pointwise max."""
    classes = _nonempty(classes, "sup")
    return TupleClass(mults={
        label: max(cls_[label] for cls_ in classes) for label in _labels(*classes)
    })


def inf(classes: Iterable[TupleClass]) -> TupleClass:
    """Greatest lower bound: pointwise min."""
    classes = _nonempty(classes, "inf")
    return TupleClass(mults={
        label: min(cls_[label] for cls_ in classes) for label in _labels(*classes)
    })


def restrict(a: TupleClass, labels: Iterable[PrimeLabel]) -> TupleClass:
    """A restricted to the given labels."""
    keep = set(labels)
    return TupleClass(mults={label: v for label, v in a.items() if label in keep})


def common_part(a: TupleClass, b: TupleClass) -> TupleClass:
    """Greatest E with E <=^s A and E <=^s B."""
    return TupleClass(mults={label: v for label, v in a.items() if b[label] == v})


def boxminus(b: TupleClass, e: TupleClass) -> TupleClass:
    """B minus a <=^s-piece E of it."""
    if not leq_s(e, b):
        raise PreconditionError(f"boxminus needs E <=^s B, got E={e}, B={b}.")
    return restrict(b, b.support - e.support)


# Differences ----------------------------------------------------------------


def minus_delta(b: TupleClass, a: TupleClass) -> TupleClass:
    """Least X with A (+) X = B.

    Raises:
      PreconditionError: if A is not below B.
    """
    if not leq(a, b):
        raise PreconditionError(f"minus needs A <= B, got A={a}, B={b}.")
    return TupleClass(mults={label: sub_delta(v, a[label]) for label, v in b.items()})


def minus_nabla(b: TupleClass, a: TupleClass) -> TupleClass:
    """Greatest X with A (+) X = B.

    Differs from `minus_delta` exactly on labels where A and B agree on an
    infinite value; there any X up to B works.
    """
    delta = dict(minus_delta(b, a).items())
    for label, value in b.items():
        if value.is_infinite and a[label] == value:
            delta[label] = value
    return TupleClass(mults=delta)


# Unity and partition --------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class UnityView:
    """An ordered registry of labels together with its unity J.

    J gives 1 to atoms and II_1 semiprimes and aleph_0 to fractals and II_inf
    semiprimes.
    """

    labels: Tuple[PrimeLabel, ...] = ()

    def __post_init__(self):
        labels = tuple(self.labels)
        if len({label.id for label in labels}) != len(labels):
            raise InputError("Registry labels must have unique ids.")
        object.__setattr__(self, "labels", labels)

    def unity(self) -> TupleClass:
        return TupleClass(mults={label: _unity_value(label) for label in self.labels})

    def part(self, tag: TypeTag) -> TupleClass:
        """J restricted to labels of the given type."""
        return restrict(self.unity(), [l for l in self.labels if l.type_tag is tag])

    def saturated(self, tag: TypeTag) -> TupleClass:
        """aleph_0 (.) J on the given type, but 1 on atoms: the total of the E^i_alpha."""
        return TupleClass(mults={
            label: (ONE if tag is TypeTag.I else ALEPH_0)
            for label in self.labels if label.type_tag is tag
        })


def _unity_value(label: PrimeLabel) -> ExtScalar:
    if label.kind in (LabelKind.ATOM, LabelKind.SEMIPRIME_II1):
        return ONE
    return ALEPH_0


def in_type_ideal(a: TupleClass, tag: TypeTag) -> bool:
    """Whether every supported label of A has the given type (A << J_tag)."""
    return all(label.type_tag is tag for label in a.support)


PartKey = Tuple[TypeTag, ExtScalar]


@dataclasses.dataclass(frozen=True)
class PartitionOfUnity:
    """Level sets of a class relative to the unity.

    Attributes:
      parts: E^i_alpha for every (type, level) with nonempty content.
      e_sm: The semiminimal part.
    """

    parts: Mapping[PartKey, TupleClass]
    e_sm: TupleClass

    def part(self, tag: TypeTag, alpha: ScalarLike) -> TupleClass:
        return self.parts.get((tag, ExtScalar.of(alpha)), EMPTY)

    def recompose(self) -> TupleClass:
        """E_sm plus the sum of alpha (.) E^i_alpha over every level except (II, 1)."""
        pieces = [self.e_sm]
        for (tag, alpha), piece in self.parts.items():
            if (tag, alpha) == (TypeTag.II, ONE):
                continue
            pieces.append(scalar_mul(alpha, piece))
        return boxplus(pieces)

    def type_total(self, tag: TypeTag) -> TupleClass:
        """Disjoint sum of E^tag_alpha over all levels alpha."""
        return boxplus(piece for (t, _), piece in self.parts.items() if t is tag)


def partition_of_unity(
    a: TupleClass, registry: Optional[UnityView] = None
) -> PartitionOfUnity:
    """Splits A into level sets by type and multiplicity.

    Args:
      a: The class to split.
      registry: Optional registry; its labels outside supp A populate the
        zero-level parts E^i_0.

    Returns:
      A `PartitionOfUnity` whose `recompose()` returns `a` exactly.
    """
    buckets: Dict[PartKey, Dict[PrimeLabel, ExtScalar]] = {}
    e_sm: Dict[PrimeLabel, ExtScalar] = {}

    def put(tag: TypeTag, alpha: ExtScalar, label: PrimeLabel, value: ExtScalar):
        buckets.setdefault((tag, alpha), {})[label] = value

    for label, value in a.items():
        match label.type_tag:
            case TypeTag.I:
                put(TypeTag.I, value, label, ONE)
            case TypeTag.III:
                put(TypeTag.III, value, label, ALEPH_0)
            case TypeTag.II if value.is_finite:
                e_sm[label] = value
                put(TypeTag.II, ONE, label, ALEPH_0)
            case TypeTag.II:
                put(TypeTag.II, value, label, ALEPH_0)

    if registry is not None:
        for label in registry.labels:
            if label in a.support:
                continue
            value = ONE if label.type_tag is TypeTag.I else ALEPH_0
            put(label.type_tag, ZERO, label, value)

    parts = {key: TupleClass(mults=m) for key, m in buckets.items()}
    ordered = sorted(parts.items(), key=lambda item: (item[0][0].value, item[0][1].sort_key))
    return PartitionOfUnity(
        parts=immutabledict.immutabledict(ordered), e_sm=TupleClass(mults=e_sm)
    )


# Type predicates ------------------------------------------------------------

FLAG_I = "I"
FLAG_II = "II"
FLAG_II1 = "II^1"
FLAG_II_INF = "II^inf"
FLAG_III = "III"
FLAG_MINIMAL = "minimal"
FLAG_MULTIPLICITY_FREE = "multiplicity_free"
FLAG_HEREDITARY_IDEMPOTENT = "hereditary_idempotent"
FLAG_SEMIMINIMAL = "semiminimal"
FLAG_FACTOR = "factor"
FLAG_ATOM = "atom"
FLAG_FRACTAL = "fractal"
FLAG_SEMIPRIME = "semiprime"
FLAG_FINITE = "finite"


def type_i_flag(dim: Optional[int]) -> str:
    return f"I^{dim if dim is not None else 'omega'}"


def type_flags(a: TupleClass) -> FrozenSet[str]:
    """Type and structure predicates of a class.

    I^n, II^1 and II^inf describe the generated algebra, so they follow the
    label kinds rather than the multiplicities. The zero class is of every
    type; it gets all vacuous flags except the I^n family and none of the
    single-label flags.
    """
    labels = list(a.support)
    kinds = {label.kind for label in labels}
    tags = {label.type_tag for label in labels}
    flags = set()

    if tags <= {TypeTag.I}:
        flags.add(FLAG_I)
        dims = {label.dim for label in labels}
        if len(dims) == 1:
            flags.add(type_i_flag(dims.pop()))
    if tags <= {TypeTag.II}:
        flags.add(FLAG_II)
        if kinds <= {LabelKind.SEMIPRIME_II1}:
            flags.add(FLAG_II1)
        if kinds <= {LabelKind.SEMIPRIME_II_INF}:
            flags.add(FLAG_II_INF)
    if tags <= {TypeTag.III}:
        flags.add(FLAG_III)

    if all(
        (label.type_tag is TypeTag.I and a[label] <= ONE)
        or (label.type_tag is TypeTag.III and a[label] == ALEPH_0)
        for label in labels
    ):
        flags.add(FLAG_MINIMAL)
    if kinds <= {LabelKind.ATOM} and all(a[label] == ONE for label in labels):
        flags.add(FLAG_MULTIPLICITY_FREE)
    if kinds <= {LabelKind.FRACTAL}:
        flags.add(FLAG_HEREDITARY_IDEMPOTENT)
    if tags <= {TypeTag.II} and all(a[label].is_finite for label in labels):
        flags.add(FLAG_SEMIMINIMAL)
    if all(a[label].is_finite for label in labels) and not (
        kinds & {LabelKind.FRACTAL, LabelKind.SEMIPRIME_II_INF}
    ):
        flags.add(FLAG_FINITE)

    if len(labels) == 1:
        (label,) = labels
        value = a[label]
        flags.add(FLAG_FACTOR)
        if label.kind is LabelKind.ATOM and value == ONE:
            flags.add(FLAG_ATOM)
        if label.kind is LabelKind.FRACTAL and value == ALEPH_0:
            flags.add(FLAG_FRACTAL)
        if label.kind is LabelKind.SEMIPRIME_II1 and value.is_finite:
            flags.add(FLAG_SEMIPRIME)
    return frozenset(flags)


# Scalars of classes ---------------------------------------------------------


def ratio(a: TupleClass, b: TupleClass) -> ExtScalar:
    """The scalar q with A = q (.) B.

    When A and B carry the same aleph the least positive solution, 1, is
    returned.

    Raises:
      NotComparableError: if B is not a single-label class, A lives elsewhere,
        or no admissible q exists.
    """
    if len(b) != 1:
        raise NotComparableError(f"ratio needs a single-label divisor, got {b}.")
    ((label, bv),) = b.items()
    if not a.support <= {label}:
        raise NotComparableError(f"{a} and {b} live on different labels.")
    av = a[label]

    if av.is_zero:
        q = ZERO
    elif bv.is_finite:
        q = ExtScalar.rational(av.finite / bv.finite) if av.is_finite else av
    elif av == bv:
        q = ONE
    elif bv < av:
        q = av
    else:
        raise NotComparableError(f"No scalar q with {a} = q (.) {b}.")

    try:
        if scalar_mul(q, b) == a:
            return q
    except AdmissibilityError:
        pass
    raise NotComparableError(f"No admissible scalar q with {a} = q (.) {b}.")


def symbolic_dim(a: TupleClass) -> ExtScalar:
    """Sum of multiplicity times label dimension."""
    total = ZERO
    for label, value in a.items():
        total = add(total, mul(value, label.dim_scalar))
    return total


def enumerate_classes(
    registry: UnityView, mult_set: Sequence[ExtScalar]
) -> list[TupleClass]:
    """Every admissible class over the registry with multiplicities from `mult_set`."""
    choices = [admissible_values(label, mult_set) or [ZERO] for label in registry.labels]
    seen = {}
    for values in itertools.product(*choices):
        cls_ = TupleClass(mults=dict(zip(registry.labels, values)))
        seen.setdefault(cls_, None)
    return list(seen)
