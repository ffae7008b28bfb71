"""Rauzy substitutions and the m-bonacci words they generate.

The substitution of order ``m`` acts on the alphabet ``{1, ..., m}`` by::

    1 -> 12, 2 -> 13, ..., m-1 -> 1m, m -> 1

Words are stored as contiguous ``uint8`` arrays. The one-sided fixed point
is grown by substituting the whole current prefix, so earlier digits never
change. The two-sided word is read from the seed ``1.1``: the right half is
``sigma^(m n)(1)`` and the left half is the same word read backwards from
its last digit, which is why only exponents that are multiples of ``m`` are
used.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

import numpy as np

from .errors import DomainError, InvalidWordError, RangeError

DIGIT_DTYPE = np.uint8
MAX_ORDER = 255


@dataclass(frozen=True)
class Alphabet:
    """The digit alphabet ``{1, ..., m}``."""

    m: int

    def __post_init__(self):
        if not isinstance(self.m, (int, np.integer)) or isinstance(self.m, bool):
            raise DomainError(f"alphabet order must be an integer, got {self.m!r}")
        if self.m < 2:
            raise DomainError(f"alphabet order must be >= 2, got {self.m}")
        if self.m > MAX_ORDER:
            raise DomainError(f"alphabet order must be <= {MAX_ORDER}, got {self.m}")

    def __contains__(self, digit) -> bool:
        return isinstance(digit, (int, np.integer)) and 1 <= digit <= self.m

    def __iter__(self) -> Iterator[int]:
        return iter(range(1, self.m + 1))

    def __len__(self) -> int:
        return self.m

    def check_digit(self, j) -> int:
        if j not in self:
            raise DomainError(f"digit {j!r} is not in the alphabet 1..{self.m}")
        return int(j)


def _as_alphabet(m) -> Alphabet:
    return m if isinstance(m, Alphabet) else Alphabet(int(m))


class Word:
    """A finite word over ``{1, ..., m}``.

    Parameters
    ----------
    digits : iterable of int or str
        The digits. A string such as ``"12112"`` is read one character per
        digit, which only makes sense for ``m <= 9``.
    m : int or Alphabet
        Order of the alphabet.
    """

    __slots__ = ("_digits", "alphabet")

    def __init__(self, digits, m):
        self.alphabet = _as_alphabet(m)
        if isinstance(digits, str):
            digits = [int(c) for c in digits]
        arr = np.asarray(digits if not isinstance(digits, Iterator) else list(digits))
        if arr.size == 0:
            arr = np.zeros(0, dtype=DIGIT_DTYPE)
        if arr.ndim != 1:
            raise InvalidWordError("a word must be one-dimensional")
        if arr.size and (arr.min() < 1 or arr.max() > self.alphabet.m):
            bad = arr[(arr < 1) | (arr > self.alphabet.m)][0]
            raise InvalidWordError(
                f"digit {int(bad)} outside alphabet 1..{self.alphabet.m}"
            )
        arr = arr.astype(DIGIT_DTYPE, copy=True)
        arr.setflags(write=False)
        self._digits = arr

    @classmethod
    def _trusted(cls, arr: np.ndarray, alphabet: Alphabet) -> "Word":
        # Skips validation; arr must already be a read-only uint8 array.
        w = cls.__new__(cls)
        w._digits = arr
        w.alphabet = alphabet
        return w

    @property
    def m(self) -> int:
        return self.alphabet.m

    @property
    def digits(self) -> np.ndarray:
        return self._digits

    def __len__(self) -> int:
        return int(self._digits.size)

    def __iter__(self) -> Iterator[int]:
        return (int(d) for d in self._digits)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word._trusted(self._digits[item], self.alphabet)
        return int(self._digits[item])

    def __eq__(self, other) -> bool:
        if isinstance(other, Word):
            return self.m == other.m and np.array_equal(self._digits, other._digits)
        if isinstance(other, str):
            return str(self) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.m, self._digits.tobytes()))

    def __add__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        if other.m != self.m:
            raise InvalidWordError("cannot concatenate words over different alphabets")
        arr = np.concatenate([self._digits, other._digits])
        arr.setflags(write=False)
        return Word._trusted(arr, self.alphabet)

    def __str__(self) -> str:
        return "".join(str(int(d)) for d in self._digits)

    def __repr__(self) -> str:
        text = str(self) if len(self) <= 40 else str(self[:40]) + "..."
        return f"Word({text!r}, m={self.m})"

    def is_prefix_of(self, other: "Word") -> bool:
        n = len(self)
        return len(other) >= n and np.array_equal(other._digits[:n], self._digits)

    def weight(self, j: int) -> int:
        return digit_weight(self, j)

    def weights(self) -> np.ndarray:
        """Counts of every digit, as an array indexed ``0..m-1`` for ``1..m``."""
        return np.bincount(self._digits, minlength=self.m + 1)[1:]


def _substitute_array(digits: np.ndarray, m: int) -> np.ndarray:
    # Images: d -> (1, d+1) for d < m, m -> (1,).
    lengths = np.where(digits == m, 1, 2)
    ends = np.cumsum(lengths)
    total = int(ends[-1]) if ends.size else 0
    out = np.ones(total, dtype=DIGIT_DTYPE)
    starts = ends - lengths
    two = lengths == 2
    out[starts[two] + 1] = digits[two] + 1
    return out


def apply_substitution(w: Word) -> Word:
    """Return ``sigma_m(w)``, the concatenation of the images of its digits."""
    if not isinstance(w, Word):
        raise InvalidWordError(f"expected a Word, got {type(w).__name__}")
    arr = _substitute_array(w.digits, w.m)
    arr.setflags(write=False)
    return Word._trusted(arr, w.alphabet)


@lru_cache(maxsize=128)
def _iterate_cached(m: int, n: int) -> np.ndarray:
    if n == 0:
        arr = np.ones(1, dtype=DIGIT_DTYPE)
    else:
        arr = _substitute_array(_iterate_cached(m, n - 1), m)
    arr.setflags(write=False)
    return arr


def _check_order_and_exponent(m, n):
    alphabet = _as_alphabet(m)
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise DomainError(f"iteration count must be a non-negative integer, got {n!r}")
    return alphabet, int(n)


def iterate_on_one(m, n: int) -> Word:
    """Return ``sigma_m^n(1)``.

    >>> str(iterate_on_one(3, 4))
    '1213121121312'
    """
    alphabet, n = _check_order_and_exponent(m, n)
    return Word._trusted(_iterate_cached(alphabet.m, n), alphabet)


def iterate_length(m: int, n: int) -> int:
    """Length of ``sigma_m^n(1)`` from the m-step length recursion, without building it."""
    alphabet, n = _check_order_and_exponent(m, n)
    # |sigma^n(1)| counts digits of all types; track the digit-count vector.
    counts = [1] + [0] * (alphabet.m - 1)
    for _ in range(n):
        counts = [sum(counts)] + counts[:-1]
    return sum(counts)


def prefix(m, length: int, max_digits: int | None = None) -> Word:
    """The first ``length`` digits of the one-sided fixed point ``w_m``."""
    alphabet = _as_alphabet(m)
    if length < 0:
        raise DomainError(f"length must be non-negative, got {length}")
    if max_digits is not None and length > max_digits:
        raise RangeError(f"requested {length} digits exceeds the cap of {max_digits}")
    n = 0
    while iterate_length(alphabet.m, n) < length:
        n += 1
    return iterate_on_one(alphabet, n)[:length]


def digit_weight(w: Word, j: int) -> int:
    """Number of occurrences ``|w|_j`` of digit ``j`` in ``w``."""
    j = w.alphabet.check_digit(j)
    return int(np.count_nonzero(w.digits == j))


class WordStream:
    """A growing two-sided window of the bi-infinite word ``v_m``.

    Digit ``v_k`` for ``k >= 0`` is the ``k``-th digit (0-based) of ``w_m``;
    ``v_{-k}`` is the ``k``-th digit from the end of ``sigma_m^(m n)(1)``.
    Both halves come from the same word ``sigma_m^(m n)(1)`` whose length
    grows roughly like ``rho_m^(m n)``; memory use is one byte per digit.

    Streams are immutable: :meth:`extend` returns a new stream (or ``self``
    when the request is already covered).
    """

    def __init__(self, m, generation: int = 0, max_digits: int | None = None):
        self.alphabet = _as_alphabet(m)
        if generation < 0:
            raise DomainError("generation must be non-negative")
        self.generation = int(generation)
        self.max_digits = max_digits
        length = iterate_length(self.alphabet.m, self.alphabet.m * self.generation)
        if max_digits is not None and length > max_digits:
            raise RangeError(
                f"generation {generation} needs {length} digits, above the cap of {max_digits}"
            )
        self._block = _iterate_cached(self.alphabet.m, self.alphabet.m * self.generation)

    @property
    def m(self) -> int:
        return self.alphabet.m

    @property
    def right_buffer(self) -> Word:
        """Digits ``v_0, v_1, ...`` generated so far."""
        return Word._trusted(self._block, self.alphabet)

    @property
    def left_buffer(self) -> Word:
        """Digits ``v_{-1}, v_{-2}, ...`` in order of decreasing index."""
        return Word._trusted(self._block[::-1], self.alphabet)

    @property
    def right_length(self) -> int:
        return int(self._block.size)

    @property
    def left_length(self) -> int:
        return int(self._block.size)

    def covers(self, k_min: int, k_max: int) -> bool:
        """True when every ``v_k`` with ``k_min <= k < k_max`` is available."""
        return -k_min <= self.left_length and k_max <= self.right_length

    def extend(self, target_left: int, target_right: int) -> "WordStream":
        if target_left < 0 or target_right < 0:
            raise DomainError("extension targets must be non-negative")
        need = max(target_left, target_right)
        gen = self.generation
        while iterate_length(self.m, self.m * gen) < need:
            gen += 1
        if gen == self.generation:
            return self
        return WordStream(self.alphabet, gen, self.max_digits)

    def __getitem__(self, k: int) -> int:
        if 0 <= k < self.right_length:
            return int(self._block[k])
        if -self.left_length <= k < 0:
            return int(self._block[self._block.size + k])
        raise RangeError(f"index {k} outside generated range")

    def window(self, start: int, stop: int) -> np.ndarray:
        """Digits ``v_k`` for ``start <= k < stop`` as a read-only array."""
        if stop < start:
            raise DomainError("window stop precedes start")
        if not self.covers(start, stop):
            raise RangeError(
                f"window [{start}, {stop}) outside generated range "
                f"[{-self.left_length}, {self.right_length})"
            )
        b = self._block
        if start >= 0:
            return b[start:stop]
        if stop <= 0:
            return b[b.size + start : b.size + stop]
        out = np.concatenate([b[b.size + start :], b[:stop]])
        out.setflags(write=False)
        return out

    def word(self, start: int, stop: int) -> Word:
        return Word._trusted(self.window(start, stop), self.alphabet)


def extend_bi_infinite(s: WordStream, target_left: int, target_right: int) -> WordStream:
    """Expose ``v_k`` for ``-target_left <= k < target_right``."""
    return s.extend(target_left, target_right)


def stream_for(m, k_min: int, k_max: int, max_digits: int | None = None) -> WordStream:
    """Smallest stream covering ``v_k`` for ``k_min <= k < k_max``."""
    return WordStream(m, 0, max_digits).extend(max(0, -k_min), max(0, k_max))


def empirical_frequency(s: WordStream, j: int, k: int, n: int) -> Fraction:
    """Exact frequency ``|v_{k+1} ... v_{k+n}|_j / n``."""
    j = s.alphabet.check_digit(j)
    if n < 1:
        raise DomainError("window length must be >= 1")
    block = s.window(k + 1, k + n + 1)
    return Fraction(int(np.count_nonzero(block == j)), n)


def sliding_counts(digits: np.ndarray, j: int, n: int) -> np.ndarray:
    """Counts of digit ``j`` in every length-``n`` factor of ``digits``."""
    cs = np.concatenate([[0], np.cumsum(digits == j, dtype=np.int64)])
    return cs[n:] - cs[:-n]

