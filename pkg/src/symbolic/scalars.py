"""Extended scalars: exact non-negative rationals followed by a finite aleph tower.

The domain is Q+ together with aleph_0 < aleph_1 < ... < aleph_K, where K is the
configured tower height. Every rational is below every aleph. Addition and
multiplication follow cardinal arithmetic on the infinite part:

  * t + alpha = alpha for finite t, aleph_i + aleph_j = aleph_max(i, j);
  * 0 * alpha = 0, t * alpha = alpha for finite t > 0,
    aleph_i * aleph_j = aleph_max(i, j).
"""

from __future__ import annotations

import dataclasses
import functools
import re
from fractions import Fraction
from typing import Optional, Union

from ..core.config import config
from ..core.errors import InputError, PreconditionError
from ..core.schemas import ScalarModel

_ALEPH_REGEX = re.compile(r"aleph_?(\d+)")

ScalarLike = Union["ExtScalar", int, Fraction, str]


@functools.total_ordering
@dataclasses.dataclass(frozen=True)
class ExtScalar:
    """A multiplicity: either a finite non-negative rational or an aleph.

    Attributes:
      finite: The rational value, or None for an aleph.
      aleph_index: The index k of aleph_k, or None for a rational.
    """

    finite: Optional[Fraction] = None
    aleph_index: Optional[int] = None

    def __post_init__(self):
        if (self.finite is None) == (self.aleph_index is None):
            raise InputError("ExtScalar needs exactly one of finite / aleph_index.")
        if self.finite is not None:
            value = Fraction(self.finite)
            if value < 0:
                raise InputError(f"Multiplicities are non-negative, got {value}.")
            object.__setattr__(self, "finite", value)
        else:
            if not 0 <= self.aleph_index <= config.ALEPH_TOWER:
                raise InputError(
                    f"aleph_{self.aleph_index} is outside the configured tower "
                    f"0..{config.ALEPH_TOWER}."
                )

    # Construction -----------------------------------------------------------

    @classmethod
    def rational(cls, value: Union[int, Fraction, str]) -> "ExtScalar":
        return cls(finite=Fraction(value))

    @classmethod
    def aleph(cls, index: int) -> "ExtScalar":
        return cls(aleph_index=int(index))

    @classmethod
    def of(cls, value: ScalarLike) -> "ExtScalar":
        """Coerces ints, Fractions and strings such as '3/2' or 'aleph0'."""
        if isinstance(value, ExtScalar):
            return value
        if isinstance(value, bool):
            raise InputError(f"Not a scalar: {value!r}")
        if isinstance(value, (int, Fraction)):
            return cls.rational(value)
        if isinstance(value, str):
            text = value.strip().lower().replace("ℵ", "aleph")
            match = _ALEPH_REGEX.fullmatch(text)
            if match:
                return cls.aleph(int(match.group(1)))
            try:
                return cls.rational(Fraction(text))
            except (ValueError, ZeroDivisionError) as e:
                raise InputError(f"Invalid scalar {value!r}: {e}") from e
        raise InputError(f"Not a scalar: {value!r}")

    # Predicates -------------------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return self.finite is not None

    @property
    def is_infinite(self) -> bool:
        return self.aleph_index is not None

    @property
    def is_zero(self) -> bool:
        return self.finite == 0

    @property
    def is_integer(self) -> bool:
        return self.finite is not None and self.finite.denominator == 1

    @property
    def is_cardinal(self) -> bool:
        """True for non-negative integers and alephs."""
        return self.is_infinite or self.is_integer

    @property
    def sort_key(self) -> tuple:
        """Key realising the total order: rationals first, then alephs."""
        if self.finite is not None:
            return (0, self.finite)
        return (1, self.aleph_index)

    def __lt__(self, other: ScalarLike) -> bool:
        return self.sort_key < ExtScalar.of(other).sort_key

    def __add__(self, other: ScalarLike) -> "ExtScalar":
        return add(self, ExtScalar.of(other))

    __radd__ = __add__

    def __mul__(self, other: ScalarLike) -> "ExtScalar":
        return mul(self, ExtScalar.of(other))

    __rmul__ = __mul__

    def __str__(self) -> str:
        if self.finite is not None:
            return str(self.finite)
        return f"aleph{self.aleph_index}"

    def __repr__(self) -> str:
        return f"ExtScalar({self})"

    # Wire format ------------------------------------------------------------

    def to_model(self) -> ScalarModel:
        if self.finite is not None:
            return ScalarModel(
                type="rational",
                num=self.finite.numerator,
                den=self.finite.denominator,
            )
        return ScalarModel(type="aleph", index=self.aleph_index)

    @classmethod
    def from_model(cls, model: ScalarModel) -> "ExtScalar":
        if model.type == "aleph":
            return cls.aleph(model.index)
        if model.den == 0:
            raise InputError("Rational denominator must be positive.")
        return cls.rational(Fraction(model.num, model.den))


ZERO = ExtScalar.rational(0)
ONE = ExtScalar.rational(1)
ALEPH_0 = ExtScalar.aleph(0)


def add(a: ExtScalar, b: ExtScalar) -> ExtScalar:
    """Returns a + b."""
    if a.is_finite and b.is_finite:
        return ExtScalar.rational(a.finite + b.finite)
    if a.is_infinite and b.is_infinite:
        return ExtScalar.aleph(max(a.aleph_index, b.aleph_index))
    return a if a.is_infinite else b


def mul(a: ExtScalar, b: ExtScalar) -> ExtScalar:
    """Returns a * b, with 0 absorbing every aleph."""
    if a.is_zero or b.is_zero:
        return ZERO
    if a.is_finite and b.is_finite:
        return ExtScalar.rational(a.finite * b.finite)
    if a.is_infinite and b.is_infinite:
        return ExtScalar.aleph(max(a.aleph_index, b.aleph_index))
    return a if a.is_infinite else b


def sub_delta(b: ExtScalar, a: ExtScalar) -> ExtScalar:
    """Returns the least x with a + x = b.

    For finite b this is b - a. For an aleph b it is b itself when a < b and 0
    when a = b.

    Raises:
      PreconditionError: if a > b.
    """
    if b < a:
        raise PreconditionError(f"sub_delta needs a <= b, got a={a}, b={b}.")
    if b.is_finite:
        return ExtScalar.rational(b.finite - a.finite)
    if a == b:
        return ZERO
    return b


def divide(a: ExtScalar, b: ExtScalar) -> Fraction:
    """Exact quotient of two finite scalars, b > 0."""
    if not (a.is_finite and b.is_finite) or b.is_zero:
        raise PreconditionError(f"Cannot divide {a} by {b}.")
    return a.finite / b.finite


def tower(include_zero: bool = True) -> list[ExtScalar]:
    """All alephs in the configured tower, optionally preceded by 0."""
    alephs = [ExtScalar.aleph(k) for k in range(config.ALEPH_TOWER + 1)]
    return ([ZERO] if include_zero else []) + alephs
