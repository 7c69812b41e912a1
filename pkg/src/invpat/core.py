"""Permutations, bounded integer sequences, and their combinatorial statistics.

The two central objects are :class:`Permutation` (one-line notation on
``1..n``) and :class:`ShapedSequence` (a sequence ``e`` with a per-position
bound vector ``s``, ``0 <= e[i] < s[i]``; an unbounded position has bound
``None``).  Standard inversion sequences are shaped sequences with bounds
``(1, 2, ..., n)``.

Every statistic defined here is a pure function on an immutable value, so
results can be freely shared between threads.  Positions in returned values
are 1-based throughout.

>>> p = Permutation.of("231")
>>> inverse(p).word
(3, 1, 2)
>>> exc(p)
2
>>> lr_word(Permutation.of("547912683"))
'RRLLRLRL'
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence, Union

__all__ = [
    "UNBOUNDED",
    "DistPoly",
    "Permutation",
    "ShapedSequence",
    "Extremes",
    "StatValue",
    "inverse",
    "asc_des",
    "asc",
    "des",
    "ides",
    "iasc",
    "exc",
    "dist",
    "iar",
    "tig",
    "lar_sma",
    "rma",
    "lmi",
    "lr_word",
    "alt",
    "alt_word",
    "eulerian",
]

# Bound marker for positions of a ShapedSequence with no upper limit.
UNBOUNDED = None

# A scalar statistic value, or the sorted position tuple of a set-valued one.
StatValue = Union[int, tuple]


# --------------------------------------------------------------------------
# exact polynomials in one marking variable
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DistPoly:
    """Polynomial in a single marking variable t, exact integer coefficients.

    ``coeffs[k]`` is the coefficient of ``t**k``.  The representation is
    canonical: no trailing zero coefficients, and the zero polynomial is the
    empty tuple.  Arithmetic never overflows (Python integers).

    >>> DistPoly((1, 4, 1)) * DistPoly.one()
    DistPoly((1, 4, 1))
    >>> DistPoly((1, 1))(10)
    11
    """

    coeffs: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        c = tuple(self.coeffs)
        while c and c[-1] == 0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "DistPoly":
        return cls(())

    @classmethod
    def one(cls) -> "DistPoly":
        return cls((1,))

    @classmethod
    def const(cls, c: int) -> "DistPoly":
        return cls((c,))

    @classmethod
    def t(cls, power: int = 1) -> "DistPoly":
        """The monomial ``t**power``."""
        return cls((0,) * power + (1,))

    # -- queries -----------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial reported as -1."""
        return len(self.coeffs) - 1

    def coefficient(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __call__(self, value: int) -> int:
        """Evaluate at an integer point (Horner)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "DistPoly") -> "DistPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return DistPoly(tuple(out))

    def __neg__(self) -> "DistPoly":
        return DistPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "DistPoly") -> "DistPoly":
        return self + (-other)

    def __mul__(self, other: "DistPoly | int") -> "DistPoly":
        if isinstance(other, int):
            return DistPoly(tuple(c * other for c in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return DistPoly(())
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    if cb:
                        out[i + j] += ca * cb
        return DistPoly(tuple(out))

    __rmul__ = __mul__

    def shifted(self, power: int) -> "DistPoly":
        """Multiply by ``t**power``."""
        if not self.coeffs or power == 0:
            return self
        return DistPoly((0,) * power + self.coeffs)

    def t_quotient(self) -> "DistPoly":
        """Exact division by t; raises if the constant term is nonzero."""
        if self.coeffs and self.coeffs[0] != 0:
            raise ValueError(
                f"polynomial {self.coeffs} is not divisible by t"
            )
        return DistPoly(self.coeffs[1:])

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                head = "" if c == 1 else ("-" if c == -1 else str(c) + "*")
                parts.append(f"{head}t" + (f"^{k}" if k > 1 else ""))
        return " + ".join(parts).replace("+ -", "- ")


# --------------------------------------------------------------------------
# domain types
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Permutation:
    """A permutation of ``1..n`` in one-line notation.

    >>> Permutation.of("231").word
    (2, 3, 1)
    """

    word: tuple[int, ...]

    def __post_init__(self) -> None:
        w = tuple(self.word)
        object.__setattr__(self, "word", w)
        n = len(w)
        if n < 1:
            raise ValueError("a permutation has length at least 1")
        if sorted(w) != list(range(1, n + 1)):
            raise ValueError(f"{w} is not a rearrangement of 1..{n}")

    @classmethod
    def of(cls, source: "str | Iterable[int]") -> "Permutation":
        """Build from a digit string (n <= 9) or any iterable of values."""
        if isinstance(source, str):
            return cls(tuple(int(ch) for ch in source))
        return cls(tuple(source))

    @property
    def n(self) -> int:
        return len(self.word)

    def __len__(self) -> int:
        return len(self.word)

    def __str__(self) -> str:
        if self.n <= 9:
            return "".join(str(v) for v in self.word)
        return " ".join(str(v) for v in self.word)


@dataclass(frozen=True)
class ShapedSequence:
    """A sequence of nonnegative integers bounded positionwise by a shape.

    ``shape[i]`` is either a positive integer bound (``0 <= entries[i] <
    shape[i]``) or :data:`UNBOUNDED`.

    >>> ShapedSequence.standard((0, 1, 0)).shape
    (1, 2, 3)
    >>> ShapedSequence.shifted_staircase((0, 4), p=3).shape
    (3, 5)
    """

    entries: tuple[int, ...]
    shape: tuple["int | None", ...]

    def __post_init__(self) -> None:
        e = tuple(self.entries)
        s = tuple(self.shape)
        object.__setattr__(self, "entries", e)
        object.__setattr__(self, "shape", s)
        if len(e) != len(s):
            raise ValueError("entries and shape must have equal length")
        for i, (v, bound) in enumerate(zip(e, s)):
            if v < 0:
                raise ValueError(f"entry {v} at position {i + 1} is negative")
            if bound is not UNBOUNDED:
                if bound < 1:
                    raise ValueError(f"bound {bound} at position {i + 1}")
                if v >= bound:
                    raise ValueError(
                        f"entry {v} at position {i + 1} violates bound {bound}"
                    )

    @classmethod
    def standard(cls, entries: Iterable[int]) -> "ShapedSequence":
        """An inversion sequence: bounds ``(1, 2, ..., n)``."""
        e = tuple(entries)
        return cls(e, tuple(range(1, len(e) + 1)))

    @classmethod
    def shifted_staircase(cls, entries: Iterable[int], p: int) -> "ShapedSequence":
        """Bounds ``(p, p+2, p+3, ..., p+n)`` for positive ``p``."""
        e = tuple(entries)
        if p < 1:
            raise ValueError("p must be positive")
        shape = tuple(p if i == 0 else p + i + 1 for i in range(len(e)))
        return cls(e, shape)

    @classmethod
    def unbounded(cls, entries: Iterable[int]) -> "ShapedSequence":
        e = tuple(entries)
        return cls(e, (UNBOUNDED,) * len(e))

    @property
    def n(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def is_standard(self) -> bool:
        return self.shape == tuple(range(1, len(self.entries) + 1))


SequenceLike = Union[Permutation, ShapedSequence, Sequence[int]]


def _values(w: SequenceLike) -> tuple[int, ...]:
    if isinstance(w, Permutation):
        return w.word
    if isinstance(w, ShapedSequence):
        return w.entries
    return tuple(w)


# --------------------------------------------------------------------------
# statistics
# --------------------------------------------------------------------------

def _inverse_raw(word: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(word)
    for i, v in enumerate(word):
        out[v - 1] = i + 1
    return tuple(out)


def inverse(p: Permutation) -> Permutation:
    """The inverse permutation: position i of value v becomes value i at v.

    >>> inverse(Permutation.of("231"))
    Permutation(word=(3, 1, 2))
    """
    return Permutation(_inverse_raw(p.word))


def _asc_des_raw(values: Sequence[int]) -> tuple[int, int]:
    up = down = 0
    for a, b in zip(values, values[1:]):
        if a < b:
            up += 1
        elif a > b:
            down += 1
    return up, down


def asc_des(w: SequenceLike) -> tuple[int, int]:
    """Number of ascents and descents of any integer sequence.

    >>> asc_des((0, 0, 2, 1))
    (1, 1)
    """
    values = _values(w)
    if not values:
        raise ValueError("asc/des are undefined on the empty sequence")
    return _asc_des_raw(values)


def asc(w: SequenceLike) -> int:
    return asc_des(w)[0]


def des(w: SequenceLike) -> int:
    return asc_des(w)[1]


def ides(p: Permutation) -> int:
    """Descents of the inverse permutation."""
    return _asc_des_raw(_inverse_raw(p.word))[1]


def iasc(p: Permutation) -> int:
    """Ascents of the inverse permutation."""
    return _asc_des_raw(_inverse_raw(p.word))[0]


def exc(p: Permutation) -> int:
    """Number of positions i with ``p[i] > i``.

    >>> exc(Permutation.of("231"))
    2
    """
    return sum(1 for i, v in enumerate(p.word, start=1) if v > i)


def dist(e: "ShapedSequence | Sequence[int]") -> int:
    """Number of distinct positive entry values.

    >>> dist(ShapedSequence.standard((0, 1, 1, 2)))
    2
    """
    return len({v for v in _values(e) if v > 0})


def _iar_raw(values: Sequence[int]) -> int:
    p = 0
    for i, v in enumerate(values):
        if v != i:
            break
        p = i + 1
    return p


def iar(e: ShapedSequence) -> int:
    """Length of the initial staircase run ``0, 1, 2, ...``.

    Defined for standard inversion sequences only; the bound ``e[i] < i + 1``
    makes the staircase prefix maximal exactly where it first breaks.

    >>> iar(ShapedSequence.standard((0, 1, 0)))
    2
    """
    if not e.is_standard():
        raise ValueError("iar requires a standard inversion sequence")
    return _iar_raw(e.entries)


def tig(e: ShapedSequence) -> int:
    """Number of tight entries, those attaining ``bound - 1``.

    >>> tig(ShapedSequence((1, 3, 2), (2, 4, 5)))
    2
    """
    count = 0
    for v, bound in zip(e.entries, e.shape):
        if bound is UNBOUNDED:
            raise ValueError("tig requires every position to be bounded")
        if v == bound - 1:
            count += 1
    return count


@dataclass(frozen=True)
class Extremes:
    """Largest/smallest entry of a sequence with their rightmost positions."""

    lar: int
    sma: int
    r_lar: int
    r_sma: int

    @property
    def is_sl(self) -> bool:
        """True when the rightmost maximum is at or after the rightmost minimum."""
        return self.r_lar >= self.r_sma


def lar_sma(w: SequenceLike) -> Extremes:
    """Extreme entries and their rightmost 1-based positions.

    >>> lar_sma((0, 1, 0))
    Extremes(lar=1, sma=0, r_lar=2, r_sma=3)
    """
    values = _values(w)
    if not values:
        raise ValueError("lar/sma are undefined on the empty sequence")
    hi = max(values)
    lo = min(values)
    r_hi = max(i + 1 for i, v in enumerate(values) if v == hi)
    r_lo = max(i + 1 for i, v in enumerate(values) if v == lo)
    return Extremes(hi, lo, r_hi, r_lo)


def _rma_raw(word: Sequence[int]) -> int:
    count = 0
    best = 0
    for v in reversed(word):
        if v > best:
            best = v
            count += 1
    return count


def rma(p: Permutation) -> int:
    """Number of right-to-left maxima.

    >>> rma(Permutation.of("547912683"))
    3
    """
    return _rma_raw(p.word)


def _lmi_raw(word: Sequence[int]) -> tuple[int, ...]:
    out = []
    best = None
    for i, v in enumerate(word, start=1):
        if best is None or v < best:
            best = v
            out.append(i)
    return tuple(out)


def lmi(p: Permutation) -> tuple[int, ...]:
    """Sorted 1-based positions of left-to-right minima.

    >>> lmi(Permutation.of("547912683"))
    (1, 2, 5)
    """
    return _lmi_raw(p.word)


def _lr_word_raw(word: Sequence[int]) -> str:
    pos = _inverse_raw(word)
    anchor = pos[0]
    return "".join(
        "L" if pos[v - 1] < anchor else "R" for v in range(2, len(word) + 1)
    )


def lr_word(p: Permutation) -> str:
    """The side word: letter i is L iff value i+1 sits left of value 1.

    Defined for length >= 2; the result has length n - 1.

    >>> lr_word(Permutation.of("547912683"))
    'RRLLRLRL'
    """
    if p.n < 2:
        raise ValueError("the side word is undefined for length-1 permutations")
    return _lr_word_raw(p.word)


def alt_word(letters: str) -> int:
    """Length of the longest alternating subword, i.e. the number of maximal
    runs of equal letters.

    >>> alt_word("RRLLRLRL")
    6
    """
    if not letters:
        return 0
    return 1 + sum(1 for a, b in zip(letters, letters[1:]) if a != b)


def _alt_raw(word: Sequence[int]) -> int:
    if len(word) < 2:
        return 0
    return alt_word(_lr_word_raw(word))


def alt(p: Permutation) -> int:
    """Alternation statistic: 0 for n = 1, else ``alt_word(lr_word(p))``.

    >>> alt(Permutation.of("547912683"))
    6
    """
    return _alt_raw(p.word)


def eulerian(n: int) -> DistPoly:
    """The n-th Eulerian polynomial, by the alternating binomial formula.

    Coefficient k counts permutations of ``1..n`` with k descents; the
    coefficients sum to n!.

    >>> eulerian(4).coeffs
    (1, 11, 11, 1)
    """
    if n < 1:
        raise ValueError("eulerian numbers need n >= 1")
    coeffs = []
    for k in range(n):
        value = 0
        for j in range(k + 2):
            value += (-1) ** j * comb(n + 1, j) * (k - j + 1) ** n
        coeffs.append(value)
    return DistPoly(tuple(coeffs))


if __name__ == "__main__":
    import doctest

    doctest.testmod()
