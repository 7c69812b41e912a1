"""Equality-aware pattern containment for permutations, sequences, and words.

A pattern is either a classical permutation pattern (``kind="perm"``, letters
a rearrangement of ``1..k``) or a word pattern (``kind="word"``, letters
normalized to use exactly the values ``0..m``, repeats allowed).  A sequence
``w`` contains a pattern ``P`` when some subsequence reproduces *all* order
relations of ``P``: equal pattern letters force equal entries, distinct
pattern letters force the same strict inequality.

For example ``315616`` contains ``011`` (take ``3, 6, 6``) but avoids
``201``.

Patterns are written as single-digit strings: ``"42153"`` is a permutation
pattern, ``"0021"`` a word pattern.  The parser infers the kind from the
presence of a ``0`` and accepts an explicit override.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

from .core import SequenceLike, _values

__all__ = [
    "Pattern",
    "PatternError",
    "parse_pattern",
    "parse_patterns",
    "occurs",
    "avoids_all",
    "first_occurrence",
]

MAX_PATTERN_LENGTH = 9


class PatternError(ValueError):
    """Raised for strings or letter tuples that do not form a valid pattern."""


@dataclass(frozen=True)
class Pattern:
    """An avoidance pattern with its matching semantics.

    >>> parse_pattern("0021").kind
    'word'
    >>> parse_pattern("3124").letters
    (3, 1, 2, 4)
    """

    letters: tuple[int, ...]
    kind: str  # "perm" | "word"

    def __post_init__(self) -> None:
        k = len(self.letters)
        if not 1 <= k <= MAX_PATTERN_LENGTH:
            raise PatternError(
                f"pattern length must be 1..{MAX_PATTERN_LENGTH}, got {k}"
            )
        if self.kind == "perm":
            if sorted(self.letters) != list(range(1, k + 1)):
                raise PatternError(
                    f"perm pattern letters must rearrange 1..{k}: {self.letters}"
                )
        elif self.kind == "word":
            used = set(self.letters)
            if used != set(range(max(used) + 1)):
                raise PatternError(
                    f"word pattern letters must be normalized to 0..m: {self.letters}"
                )
        else:
            raise PatternError(f"unknown pattern kind {self.kind!r}")

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return "".join(str(v) for v in self.letters)

    def as_word(self) -> "Pattern":
        """The word-kind pattern with the same strict order relations."""
        if self.kind == "word":
            return self
        return Pattern(tuple(v - 1 for v in self.letters), "word")


def parse_pattern(text: str, kind: Optional[str] = None) -> Pattern:
    """Parse a digit string; the kind is inferred unless given explicitly.

    >>> parse_pattern("021").kind
    'word'
    >>> parse_pattern("21").kind
    'perm'
    """
    if not text:
        raise PatternError("empty pattern string")
    letters = []
    for ch in text:
        if not ch.isdigit():
            raise PatternError(f"invalid character {ch!r} in pattern {text!r}")
        letters.append(int(ch))
    if kind is None:
        kind = "word" if 0 in letters else "perm"
    return Pattern(tuple(letters), kind)


def parse_patterns(text: str, kind: Optional[str] = None) -> tuple[Pattern, ...]:
    """Parse a comma-separated pattern list such as ``"3124,42153,24153"``."""
    return tuple(parse_pattern(part.strip(), kind) for part in text.split(","))


# --------------------------------------------------------------------------
# matching
# --------------------------------------------------------------------------

# rel[a][b] = sign(p[a] - p[b]): the comparison w[i_a] ? w[i_b] required of an
# occurrence (negative: strictly below, zero: equal, positive: strictly above).
@lru_cache(maxsize=None)
def _compiled(letters: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    k = len(letters)
    return tuple(
        tuple(
            (letters[a] > letters[b]) - (letters[a] < letters[b])
            for b in range(k)
        )
        for a in range(k)
    )


def _consistent(v: int, chosen: list[int], row: tuple[int, ...]) -> bool:
    for b, u in enumerate(chosen):
        c = row[b]
        if c < 0:
            if not v < u:
                return False
        elif c > 0:
            if not v > u:
                return False
        elif v != u:
            return False
    return True


def _search(values: tuple[int, ...], letters: tuple[int, ...]):
    """DFS for the lexicographically first occurrence; None if absent."""
    k = len(letters)
    n = len(values)
    if k > n:
        return None
    rel = _compiled(letters)
    chosen_vals: list[int] = []
    positions: list[int] = []

    def extend(a: int, start: int):
        row = rel[a]
        for i in range(start, n - (k - a - 1)):
            v = values[i]
            if not _consistent(v, chosen_vals, row):
                continue
            positions.append(i)
            chosen_vals.append(v)
            if a == k - 1:
                return tuple(positions)
            found = extend(a + 1, i + 1)
            if found is not None:
                return found
            positions.pop()
            chosen_vals.pop()
        return None

    return extend(0, 0)


def contains_ending_at_last(values: tuple[int, ...], letters: tuple[int, ...]) -> bool:
    """True iff some occurrence of the pattern uses the final position.

    Sound pruning step for prefix-extension generation: a prefix that avoided
    the pattern can only gain an occurrence through its newest entry.
    """
    k = len(letters)
    n = len(values)
    if k > n:
        return False
    if k == 1:
        return True
    rel = _compiled(letters)
    last = values[n - 1]
    last_idx = k - 1
    chosen: list[int] = []

    def extend(a: int, start: int) -> bool:
        row = rel[a]
        need_last = row[last_idx]
        for i in range(start, n - 1 - (k - 2 - a)):
            v = values[i]
            if need_last < 0:
                if not v < last:
                    continue
            elif need_last > 0:
                if not v > last:
                    continue
            elif v != last:
                continue
            if not _consistent(v, chosen, row):
                continue
            if a == k - 2:
                return True
            chosen.append(v)
            if extend(a + 1, i + 1):
                return True
            chosen.pop()
        return False

    return extend(0, 0)


def forbidden_next_values(
    prefix: tuple[int, ...],
    compiled_patterns: Iterable[tuple[int, ...]],
    bound: int,
) -> bytearray:
    """Mark which next entries ``0 .. bound-1`` would complete an occurrence.

    For each way of matching the first ``k - 1`` pattern letters inside the
    prefix, the final letter constrains the new entry to an open value window
    (or to one exact value when the final letter repeats an earlier one);
    every such window is marked forbidden.
    """
    forb = bytearray(bound)
    m = len(prefix)
    for letters in compiled_patterns:
        k = len(letters)
        if k - 1 > m:
            continue
        if k == 1:
            for v in range(bound):
                forb[v] = 1
            return forb
        rel = _compiled(letters)
        last_idx = k - 1
        last_row = rel[last_idx]
        chosen: list[int] = []

        def mark() -> None:
            lo = -1  # strict lower bound for the new entry
            hi = bound  # strict upper bound
            exact = None
            ok = True
            for b, u in enumerate(chosen):
                c = last_row[b]
                if c > 0:
                    if u > lo:
                        lo = u
                elif c < 0:
                    if u < hi:
                        hi = u
                else:
                    if exact is not None and exact != u:
                        ok = False
                        break
                    exact = u
            if not ok:
                return
            if exact is not None:
                if lo < exact < hi and 0 <= exact < bound:
                    forb[exact] = 1
            else:
                start = max(lo + 1, 0)
                stop = min(hi, bound)
                for v in range(start, stop):
                    forb[v] = 1

        def extend(a: int, start: int) -> None:
            row = rel[a]
            for i in range(start, m - (k - 2 - a)):
                v = prefix[i]
                if not _consistent(v, chosen, row):
                    continue
                chosen.append(v)
                if a == k - 2:
                    mark()
                else:
                    extend(a + 1, i + 1)
                chosen.pop()

        extend(0, 0)
    return forb


# --------------------------------------------------------------------------
# public containment API
# --------------------------------------------------------------------------

def occurs(w: SequenceLike, pattern: Pattern) -> bool:
    """True iff ``w`` contains the pattern.

    >>> occurs((3, 1, 5, 6, 1, 6), parse_pattern("011"))
    True
    >>> occurs((3, 1, 5, 6, 1, 6), parse_pattern("201"))
    False
    """
    return _search(_values(w), pattern.letters) is not None


def avoids_all(w: SequenceLike, patterns: Iterable[Pattern]) -> bool:
    """True iff ``w`` contains none of the patterns."""
    values = _values(w)
    return all(_search(values, p.letters) is None for p in patterns)


def first_occurrence(w: SequenceLike, pattern: Pattern) -> Optional[tuple[int, ...]]:
    """Lexicographically smallest witness positions (1-based), or None.

    >>> first_occurrence((3, 1, 5, 6, 1, 6), parse_pattern("011"))
    (1, 4, 6)
    """
    found = _search(_values(w), pattern.letters)
    if found is None:
        return None
    return tuple(i + 1 for i in found)


if __name__ == "__main__":
    import doctest

    doctest.testmod()
