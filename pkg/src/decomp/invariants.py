"""Trace-word fingerprints of matrix tuples.

Words run over the alphabet (A_1, ..., A_N, A_1*, ..., A_N*) in
length-lexicographic order. Traces of words are unitary invariants, so the
fingerprint of a tuple and of any unitary conjugate agree up to round-off.
"""

from __future__ import annotations

import dataclasses
import hashlib
from typing import Iterator, List, Optional, Tuple

import numpy as np
from jaxtyping import Complex

from ..core.config import config
from ..numeric.matrices import MatrixTuple, tuple_norm

Word = Tuple[int, ...]


def word_length_limit(d: int, max_length: Optional[int] = None) -> int:
    """min(2 d^2, MAX_WORD_LENGTH)."""
    cap = config.MAX_WORD_LENGTH if max_length is None else max_length
    return min(2 * d * d, cap)


def enumerate_words(alphabet: int, max_length: int, max_words: int) -> Iterator[Word]:
    """Length-lexicographic words of length 1..max_length, at most max_words of them."""
    count = 0
    layer: List[Word] = [()]
    for _ in range(max_length):
        layer = [w + (letter,) for w in layer for letter in range(alphabet)]
        for w in layer:
            if count >= max_words:
                return
            yield w
            count += 1


def trace_words(
    a: MatrixTuple,
    max_length: Optional[int] = None,
    max_words: Optional[int] = None,
) -> Tuple[List[Word], Complex[np.ndarray, "w"]]:
    """Traces of the enumerated words of A.

    Products are built by extending the previous layer one letter at a time.
    """
    max_words = config.MAX_KEY_WORDS if max_words is None else max_words
    length = word_length_limit(a.dim, max_length)
    letters = a.generators()
    words: List[Word] = []
    values: List[complex] = []
    layer = {(): np.eye(a.dim, dtype=complex)}
    for _ in range(length):
        next_layer = {}
        for w, prod in layer.items():
            for letter, x in enumerate(letters):
                if len(words) >= max_words:
                    break
                word = w + (letter,)
                m = prod @ x
                next_layer[word] = m
                words.append(word)
                values.append(complex(np.trace(m)))
        layer = next_layer
    return words, np.asarray(values, dtype=complex)


@dataclasses.dataclass(frozen=True, eq=False)
class InvariantKey:
    """Trace-word fingerprint.

    Only words of at most `word_length_limit(dim)` letters enter the key, and
    that limit never exceeds MAX_WORD_LENGTH. Above the cap inequivalent atoms
    can share a key, so equal keys are necessary but not sufficient: the
    registry confirms every match with `atoms_equivalent`, and `are_equivalent`
    decides equivalence of whole tuples.

    Attributes:
      n: Tuple length.
      dim: Matrix size.
      values: Raw traces in enumeration order.
      scales: Per-word magnitude bound d * max(1, ||A||)^len(word).
    """

    n: int
    dim: int
    values: Complex[np.ndarray, "w"]
    scales: np.ndarray

    @property
    def rounded(self) -> Tuple[Tuple[int, int], ...]:
        """Values in units of KEY_ROUNDING, as integer pairs."""
        units = np.round(self.values / config.KEY_ROUNDING)
        return tuple((int(z.real), int(z.imag)) for z in units)

    @property
    def bucket(self) -> str:
        payload = f"{self.n}:{self.dim}:{self.rounded}".encode()
        return hashlib.sha256(payload).hexdigest()[:16]

    @property
    def sort_key(self) -> Tuple[Tuple[int, int], ...]:
        return self.rounded

    def close_to(self, other: "InvariantKey", rel: Optional[float] = None) -> bool:
        """Whether every trace agrees within rel * word scale."""
        rel = config.KEY_ROUNDING if rel is None else rel
        if (self.n, self.dim) != (other.n, other.dim) or self.values.shape != other.values.shape:
            return False
        scale = np.maximum(self.scales, other.scales)
        return bool(np.all(np.abs(self.values - other.values) <= rel * scale))


def invariant_key(
    a: MatrixTuple,
    max_length: Optional[int] = None,
    max_words: Optional[int] = None,
) -> InvariantKey:
    words, values = trace_words(a, max_length, max_words)
    base = max(1.0, tuple_norm(a)) if a.dim else 1.0
    scales = np.array([max(1, a.dim) * base ** len(w) for w in words], dtype=float)
    return InvariantKey(n=a.n, dim=a.dim, values=values, scales=scales)

