"""Pruned backtracking generators for every sequence family in the package.

Four families are supported, all parameterized by a :class:`FamilySpec`:

* ``perm``   -- permutations of ``1..n``;
* ``inv``    -- inversion sequences, bounds ``(1, 2, ..., n)``;
* ``invnp``  -- sequences with bounds ``(p, p+2, p+3, ..., p+n)``;
* ``word``   -- words of length n over ``0..max_entry``.

Generation is lexicographic prefix extension.  Because pattern containment
is hereditary, any prefix that already contains a forbidden pattern can be
pruned; the pruning step computes, for each node, the set of next entries
that would complete an occurrence (see
:func:`invpat.patterns.forbidden_next_values`).

Distribution aggregation may be partitioned across worker processes at depth
one (the first entry); merging is done in first-entry order, so parallel
results are identical to sequential ones.
"""

from __future__ import annotations

import hashlib
import json
import logging
import multiprocessing
import os
import tempfile
import time
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional, Sequence, Union

from .core import (
    DistPoly,
    Permutation,
    ShapedSequence,
    StatValue,
    _alt_raw,
    _asc_des_raw,
    _iar_raw,
    _inverse_raw,
    _lmi_raw,
    _lr_word_raw,
    _rma_raw,
)
from .patterns import Pattern, forbidden_next_values
from .series import MultiSeries

__all__ = [
    "FamilySpec",
    "SpecError",
    "generate",
    "count",
    "distribution",
    "joint_distribution",
    "trivariate_N_table",
    "quadvariate_G_table",
    "tig_H_table",
    "STATISTICS",
    "cache_key",
    "cache_put",
    "cache_get",
    "CACHE_VERSION",
]

log = logging.getLogger(__name__)

FAMILIES = ("perm", "inv", "invnp", "word")

PATTERN_021 = Pattern((0, 2, 1), "word")


class SpecError(ValueError):
    """Raised for family specifications that cannot be enumerated."""


@dataclass(frozen=True)
class FamilySpec:
    """A finite family of words plus avoidance and refinement constraints.

    Refinements restrict the generated members after pattern filtering:
    ``alt_value``/``start_letter`` select an alternation class of
    permutations, ``iar_value`` fixes the initial staircase run of an
    inversion sequence, ``sma_value`` fixes the minimum entry, and
    ``min_entry_zero`` keeps only sequences whose minimum is 0.
    """

    family: str
    n: int
    p: Optional[int] = None
    max_entry: Optional[int] = None
    avoid: tuple[Pattern, ...] = ()
    alt_value: Optional[int] = None
    start_letter: Optional[str] = None
    iar_value: Optional[int] = None
    sma_value: Optional[int] = None
    min_entry_zero: bool = False

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise SpecError(f"unknown family {self.family!r}")
        if self.n < 1:
            raise SpecError("n must be at least 1")
        if self.family == "invnp":
            if self.p is None or self.p < 1:
                raise SpecError("family 'invnp' needs a positive p")
        if self.family == "word":
            if self.max_entry is None or self.max_entry < 0:
                raise SpecError(
                    "family 'word' needs max_entry (the family is infinite without it)"
                )
        if self.start_letter not in (None, "L", "R"):
            raise SpecError("start_letter must be 'L' or 'R'")
        if self.iar_value is not None and self.family != "inv":
            raise SpecError("iar refinement applies to inversion sequences only")
        if self.alt_value is not None and self.family != "perm":
            raise SpecError("alt refinement applies to permutations only")

    def bounds(self) -> Optional[list[int]]:
        """Per-position candidate bounds; None for the permutation family."""
        if self.family == "perm":
            return None
        if self.family == "inv":
            return list(range(1, self.n + 1))
        if self.family == "invnp":
            p = self.p or 1
            return [p if i == 0 else p + i + 1 for i in range(self.n)]
        return [self.max_entry + 1] * self.n  # type: ignore[operator]


# --------------------------------------------------------------------------
# raw generation
# --------------------------------------------------------------------------

def _iter_bounded(
    bounds: Sequence[int],
    letters: tuple[tuple[int, ...], ...],
    forced_prefix: tuple[int, ...] = (),
    cap_position: Optional[int] = None,
    cap_value: int = 0,
) -> Iterator[tuple[int, ...]]:
    n = len(bounds)
    word: list[int] = []

    def rec() -> Iterator[tuple[int, ...]]:
        m = len(word)
        if m == n:
            yield tuple(word)
            return
        bound = bounds[m]
        forb = forbidden_next_values(word, letters, bound) if letters else None
        if m < len(forced_prefix):
            v = forced_prefix[m]
            candidates: Iterable[int] = (v,) if v < bound else ()
        else:
            candidates = range(bound)
        for v in candidates:
            if cap_position == m and v > cap_value:
                break
            if forb is not None and forb[v]:
                continue
            word.append(v)
            yield from rec()
            word.pop()

    yield from rec()


def _iter_perm_words(
    n: int,
    letters: tuple[tuple[int, ...], ...],
    forced_first: Optional[int] = None,
) -> Iterator[tuple[int, ...]]:
    word: list[int] = []
    used = bytearray(n + 1)

    def rec() -> Iterator[tuple[int, ...]]:
        m = len(word)
        if m == n:
            yield tuple(word)
            return
        forb = forbidden_next_values(word, letters, n + 1) if letters else None
        if m == 0 and forced_first is not None:
            candidates: Iterable[int] = (forced_first,)
        else:
            candidates = range(1, n + 1)
        for v in candidates:
            if used[v] or (forb is not None and forb[v]):
                continue
            used[v] = 1
            word.append(v)
            yield from rec()
            word.pop()
            used[v] = 0

    yield from rec()


def _raw_members(spec: FamilySpec, first: Optional[int] = None) -> Iterator[tuple[int, ...]]:
    letters = tuple(p.letters for p in spec.avoid)
    if spec.family == "perm":
        yield from _iter_perm_words(spec.n, letters, first)
        return
    bounds = spec.bounds()
    assert bounds is not None
    forced: tuple[int, ...] = ()
    cap_position = None
    cap_value = 0
    if spec.iar_value is not None:
        p = spec.iar_value
        if p < 1 or p > spec.n:
            return
        forced = tuple(range(p))
        if p < spec.n:
            cap_position, cap_value = p, p - 1  # the entry after the staircase
    if first is not None:
        if forced:
            if forced[0] != first:
                return
        else:
            forced = (first,)
    yield from _iter_bounded(bounds, letters, forced, cap_position, cap_value)


def _passes(spec: FamilySpec, raw: tuple[int, ...]) -> bool:
    if spec.alt_value is not None and _alt_raw(raw) != spec.alt_value:
        return False
    if spec.start_letter is not None:
        if len(raw) < 2 or _lr_word_raw(raw)[0] != spec.start_letter:
            return False
    if spec.sma_value is not None and min(raw) != spec.sma_value:
        return False
    if spec.min_entry_zero and min(raw) != 0:
        return False
    return True


def _wrap(spec: FamilySpec, raw: tuple[int, ...]):
    if spec.family == "perm":
        return Permutation(raw)
    if spec.family == "inv":
        return ShapedSequence.standard(raw)
    if spec.family == "invnp":
        return ShapedSequence.shifted_staircase(raw, spec.p)  # type: ignore[arg-type]
    return ShapedSequence.unbounded(raw)


def generate(spec: FamilySpec) -> Iterator[Union[Permutation, ShapedSequence]]:
    """Yield every member exactly once, in lexicographic word order."""
    for raw in _raw_members(spec):
        if _passes(spec, raw):
            yield _wrap(spec, raw)


# --------------------------------------------------------------------------
# statistics registry
# --------------------------------------------------------------------------

def _stat_tig(raw: Sequence[int], spec: FamilySpec) -> int:
    bounds = spec.bounds()
    if bounds is None:
        raise SpecError("tig is undefined for permutations")
    return sum(1 for v, b in zip(raw, bounds) if v == b - 1)


@dataclass(frozen=True)
class Statistic:
    name: str
    families: frozenset
    fn: Callable[[Sequence[int], FamilySpec], StatValue]
    set_valued: bool = False


_SEQ = frozenset({"inv", "invnp", "word"})
_ALL = frozenset(FAMILIES)

STATISTICS: dict[str, Statistic] = {
    s.name: s
    for s in [
        Statistic("asc", _ALL, lambda w, _: _asc_des_raw(w)[0]),
        Statistic("des", _ALL, lambda w, _: _asc_des_raw(w)[1]),
        Statistic("ides", frozenset({"perm"}), lambda w, _: _asc_des_raw(_inverse_raw(w))[1]),
        Statistic("iasc", frozenset({"perm"}), lambda w, _: _asc_des_raw(_inverse_raw(w))[0]),
        Statistic("exc", frozenset({"perm"}), lambda w, _: sum(1 for i, v in enumerate(w, 1) if v > i)),
        Statistic("alt", frozenset({"perm"}), lambda w, _: _alt_raw(w)),
        Statistic("rma", frozenset({"perm"}), lambda w, _: _rma_raw(w)),
        Statistic("lmi", frozenset({"perm"}), lambda w, _: _lmi_raw(w), set_valued=True),
        Statistic("dist", _SEQ, lambda w, _: len({v for v in w if v > 0})),
        Statistic("iar", frozenset({"inv"}), lambda w, _: _iar_raw(w)),
        Statistic("tig", frozenset({"inv", "invnp"}), _stat_tig),
        Statistic("lar", _SEQ, lambda w, _: max(w)),
        Statistic("sma", _SEQ, lambda w, _: min(w)),
    ]
}


def _resolve_stat(spec: FamilySpec, name: str) -> Statistic:
    stat = STATISTICS.get(name)
    if stat is None:
        raise SpecError(f"unknown statistic {name!r}")
    if spec.family not in stat.families:
        raise SpecError(f"statistic {name!r} is undefined for family {spec.family!r}")
    return stat


# --------------------------------------------------------------------------
# aggregation (sequential and depth-one parallel)
# --------------------------------------------------------------------------

def _first_values(spec: FamilySpec) -> list[int]:
    if spec.family == "perm":
        return list(range(1, spec.n + 1))
    bounds = spec.bounds()
    assert bounds is not None
    return list(range(bounds[0]))


def _count_part(spec: FamilySpec, first: Optional[int]) -> int:
    return sum(1 for raw in _raw_members(spec, first) if _passes(spec, raw))


def _dist_part(args) -> dict[int, int]:
    spec, name, first = args
    stat = _resolve_stat(spec, name)
    out: dict[int, int] = {}
    for raw in _raw_members(spec, first):
        if _passes(spec, raw):
            value = stat.fn(raw, spec)
            out[value] = out.get(value, 0) + 1
    return out


def _joint_part(args) -> dict[tuple, int]:
    spec, names, first = args
    stats = [_resolve_stat(spec, name) for name in names]
    out: dict[tuple, int] = {}
    for raw in _raw_members(spec, first):
        if _passes(spec, raw):
            key = tuple(stat.fn(raw, spec) for stat in stats)
            out[key] = out.get(key, 0) + 1
    return out


def _run_parts(worker, arglist, jobs: int):
    if jobs <= 1 or len(arglist) <= 1:
        return [worker(args) for args in arglist]
    with multiprocessing.Pool(min(jobs, len(arglist))) as pool:
        return pool.map(worker, arglist)


def count(spec: FamilySpec, jobs: int = 1) -> int:
    """Number of members of the family."""
    if jobs <= 1:
        return _count_part(spec, None)
    parts = _run_parts(
        _dist_part, [(spec, "asc", f) for f in _first_values(spec)], jobs
    )
    return sum(sum(d.values()) for d in parts)


def distribution(spec: FamilySpec, stat: str, jobs: int = 1) -> DistPoly:
    """Marking polynomial of a scalar statistic: coefficient k counts the
    members with statistic value k.  Evaluating at 1 gives the cardinality.
    """
    resolved = _resolve_stat(spec, stat)
    if resolved.set_valued:
        raise SpecError(f"statistic {stat!r} is set-valued; use joint_distribution")
    if jobs <= 1:
        merged = _dist_part((spec, stat, None))
    else:
        merged = {}
        for part in _run_parts(
            _dist_part, [(spec, stat, f) for f in _first_values(spec)], jobs
        ):
            for k, v in part.items():
                merged[k] = merged.get(k, 0) + v
    if not merged:
        return DistPoly(())
    coeffs = [0] * (max(merged) + 1)
    for k, v in merged.items():
        coeffs[k] = v
    return DistPoly(tuple(coeffs))


def joint_distribution(spec: FamilySpec, stats: Sequence[str], jobs: int = 1) -> dict[tuple, int]:
    """Exact joint counts keyed by statistic-value tuples.

    Set-valued statistics contribute their canonical sorted position tuple.
    Marginalizing any single scalar coordinate reproduces ``distribution``.
    """
    if not stats:
        raise SpecError("joint_distribution needs at least one statistic")
    for name in stats:
        _resolve_stat(spec, name)
    if jobs <= 1:
        return _joint_part((spec, tuple(stats), None))
    merged: dict[tuple, int] = {}
    for part in _run_parts(
        _joint_part, [(spec, tuple(stats), f) for f in _first_values(spec)], jobs
    ):
        for k, v in part.items():
            merged[k] = merged.get(k, 0) + v
    return merged


# --------------------------------------------------------------------------
# coefficient tables for the 021-avoiding families
# --------------------------------------------------------------------------

def _bump(table: dict, key: tuple, stat_value: int) -> None:
    coeffs = table.setdefault(key, [])
    while len(coeffs) <= stat_value:
        coeffs.append(0)
    coeffs[stat_value] += 1


def _to_series(vars: tuple[str, ...], orders, table: dict) -> MultiSeries:
    return MultiSeries.from_terms(
        vars, {k: DistPoly(tuple(c)) for k, c in table.items()}, orders
    )


def trivariate_N_table(
    n_max: int, max_entry: int
) -> tuple[MultiSeries, MultiSeries, MultiSeries]:
    """Ascent-marked tables for 021-avoiding words, split by extreme order.

    Returns ``(full, sl, ls)`` over variables ``(x, u)``: the coefficient of
    ``x**n u**l`` marks by ascents the words of length n with largest entry
    l.  ``sl`` collects words whose rightmost maximum is at or after the
    rightmost minimum, ``ls`` the others; the split sums to the full table.
    A word with largest entry <= max_entry has all entries <= max_entry, so
    the tables are exact up to u-order ``max_entry``.
    """
    if n_max < 1 or max_entry < 0:
        raise SpecError("n_max must be >= 1 and max_entry >= 0")
    full: dict = {}
    sl: dict = {}
    ls: dict = {}
    for n in range(1, n_max + 1):
        spec = FamilySpec("word", n, max_entry=max_entry, avoid=(PATTERN_021,))
        for raw in _raw_members(spec):
            top = max(raw)
            ups = _asc_des_raw(raw)[0]
            key = (n, top)
            _bump(full, key, ups)
            r_hi = max(i for i, v in enumerate(raw) if v == top)
            r_lo = max(i for i, v in enumerate(raw) if v == min(raw))
            _bump(sl if r_hi >= r_lo else ls, key, ups)
    orders = (n_max, max_entry)
    vars = ("x", "u")
    return (
        _to_series(vars, orders, full),
        _to_series(vars, orders, sl),
        _to_series(vars, orders, ls),
    )


def quadvariate_G_table(
    n_max: int, p_max: int
) -> tuple[MultiSeries, MultiSeries, MultiSeries]:
    """Ascent-marked tables for 021-avoiding shifted-staircase sequences.

    Returns ``(full, sl, ls)`` over ``(x, s, u)``: coefficient of
    ``x**n s**p u**l`` marks by ascents the members of the family with
    bounds ``(p, p+2, ..., p+n)`` whose largest entry is l.  The largest
    entry never exceeds ``p + n - 1``, so the tables are complete in u
    (u-order None).
    """
    if n_max < 1 or p_max < 1:
        raise SpecError("n_max and p_max must be >= 1")
    full: dict = {}
    sl: dict = {}
    ls: dict = {}
    for n in range(1, n_max + 1):
        for p in range(1, p_max + 1):
            spec = FamilySpec("invnp", n, p=p, avoid=(PATTERN_021,))
            for raw in _raw_members(spec):
                top = max(raw)
                ups = _asc_des_raw(raw)[0]
                key = (n, p, top)
                _bump(full, key, ups)
                r_hi = max(i for i, v in enumerate(raw) if v == top)
                r_lo = max(i for i, v in enumerate(raw) if v == min(raw))
                _bump(sl if r_hi >= r_lo else ls, key, ups)
    orders = (n_max, p_max, None)
    vars = ("x", "s", "u")
    return (
        _to_series(vars, orders, full),
        _to_series(vars, orders, sl),
        _to_series(vars, orders, ls),
    )


def tig_H_table(n_max: int, p_max: int) -> MultiSeries:
    """Tight-entry table for 021-avoiding shifted-staircase sequences.

    Over ``(x, s)``, the coefficient of ``x**n s**p`` is the polynomial (in
    the marking variable) counting members by number of tight entries.
    """
    if n_max < 1 or p_max < 1:
        raise SpecError("n_max and p_max must be >= 1")
    table: dict = {}
    for n in range(1, n_max + 1):
        for p in range(1, p_max + 1):
            spec = FamilySpec("invnp", n, p=p, avoid=(PATTERN_021,))
            bounds = spec.bounds()
            assert bounds is not None
            for raw in _raw_members(spec):
                tight = sum(1 for v, b in zip(raw, bounds) if v == b - 1)
                _bump(table, (n, p), tight)
    return _to_series(("x", "s"), (n_max, p_max), table)


# --------------------------------------------------------------------------
# persistent result cache (advisory; never required for correctness)
# --------------------------------------------------------------------------

CACHE_VERSION = "invpat-1"


def _spec_fingerprint(spec: FamilySpec) -> dict:
    return {
        "family": spec.family,
        "n": spec.n,
        "p": spec.p,
        "max_entry": spec.max_entry,
        "avoid": [f"{p.kind}:{p}" for p in spec.avoid],
        "alt_value": spec.alt_value,
        "start_letter": spec.start_letter,
        "iar_value": spec.iar_value,
        "sma_value": spec.sma_value,
        "min_entry_zero": spec.min_entry_zero,
    }


def cache_key(spec: FamilySpec, stats: Sequence[str]) -> str:
    """Canonical key for a spec + statistic list at the current schema."""
    blob = json.dumps(
        {"spec": _spec_fingerprint(spec), "stats": list(stats), "version": CACHE_VERSION},
        sort_keys=True,
    )
    return hashlib.sha256(blob.encode()).hexdigest()


def _cache_path(directory: str, key: str) -> str:
    return os.path.join(directory, key + ".json")


def cache_put(directory: str, key: str, payload) -> None:
    """Store a JSON payload under the key, atomically (temp file + rename)."""
    os.makedirs(directory, exist_ok=True)
    record = {
        "key": key,
        "version": CACHE_VERSION,
        "created": time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime()),
        "payload": payload,
    }
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            json.dump(record, handle)
        os.replace(tmp, _cache_path(directory, key))
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cache_get(directory: str, key: str):
    """Fetch a payload; stale versions and corrupt files are misses."""
    path = _cache_path(directory, key)
    try:
        with open(path) as handle:
            record = json.load(handle)
    except FileNotFoundError:
        return None
    except (OSError, json.JSONDecodeError) as exc:
        log.warning("ignoring unreadable cache file %s: %s", path, exc)
        return None
    if not isinstance(record, dict) or record.get("version") != CACHE_VERSION:
        return None
    if record.get("key") != key:
        log.warning("ignoring cache file %s with mismatched key", path)
        return None
    return record.get("payload")
