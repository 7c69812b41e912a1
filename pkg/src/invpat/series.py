"""Exact truncated multivariate formal power series, and the fixed-point
solvers for the generating functions this package verifies.

A :class:`MultiSeries` is a series in an ordered subset of the variables
``(x, s, u)`` whose coefficients are :class:`~invpat.core.DistPoly`
polynomials in a marking variable ``t``.  ``t`` is never truncated: every
equation solved here keeps coefficients polynomial in ``t``, so the ring is
exactly Z[t].

Each variable carries an inclusive truncation order; ``None`` marks a
variable in which the stored data is *complete* (an exact polynomial
direction, e.g. a table whose entries provably exhaust that exponent range).
Arithmetic results carry the componentwise-minimum truncation of the
operands, with ``None`` acting as infinity.  All operations are pure; values
are immutable and safe to share.
"""

from __future__ import annotations

from math import comb
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .core import DistPoly

__all__ = [
    "MultiSeries",
    "SeriesError",
    "TruncationError",
    "poly_in",
    "solve_A",
    "solve_r",
    "solve_N",
    "a_n_lagrange",
]

VAR_ORDER = ("x", "s", "u")

Order = Optional[int]


class SeriesError(ValueError):
    """Raised for structurally invalid series operations."""


class TruncationError(SeriesError):
    """Raised when an operation would need coefficients beyond truncation."""


def _as_poly(value: Union[DistPoly, int]) -> DistPoly:
    return value if isinstance(value, DistPoly) else DistPoly.const(value)


def _merge(a: Order, b: Order) -> Order:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class MultiSeries:
    """Truncated series with DistPoly coefficients, sparse representation.

    ``coeffs`` maps exponent tuples (aligned with ``vars``) to nonzero
    coefficient polynomials.  Exponents never exceed the finite orders.
    """

    __slots__ = ("vars", "orders", "coeffs")

    def __init__(
        self,
        vars: tuple[str, ...],
        orders: tuple[Order, ...],
        coeffs: Mapping[tuple[int, ...], DistPoly],
    ) -> None:
        if len(vars) != len(orders):
            raise SeriesError("vars and orders must align")
        if tuple(sorted(vars, key=VAR_ORDER.index)) != tuple(vars):
            raise SeriesError(f"variables must be in canonical order {VAR_ORDER}")
        if len(set(vars)) != len(vars):
            raise SeriesError("duplicate variables")
        clean: dict[tuple[int, ...], DistPoly] = {}
        for exps, poly in coeffs.items():
            if len(exps) != len(vars):
                raise SeriesError(f"exponent tuple {exps} does not match {vars}")
            for e, o in zip(exps, orders):
                if e < 0:
                    raise SeriesError(f"negative exponent in {exps}")
                if o is not None and e > o:
                    raise SeriesError(
                        f"exponent {exps} exceeds truncation orders {orders}"
                    )
            if poly:
                clean[tuple(exps)] = poly
        self.vars = tuple(vars)
        self.orders = tuple(orders)
        self.coeffs = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_terms(
        cls,
        vars: Sequence[str],
        terms: Mapping[tuple[int, ...], Union[DistPoly, int]],
        orders: Optional[Sequence[Order]] = None,
    ) -> "MultiSeries":
        if orders is None:
            orders = (None,) * len(vars)
        return cls(
            tuple(vars),
            tuple(orders),
            {exps: _as_poly(c) for exps, c in terms.items()},
        )

    @classmethod
    def zero(cls, vars: Sequence[str], orders: Optional[Sequence[Order]] = None) -> "MultiSeries":
        return cls.from_terms(vars, {}, orders)

    @classmethod
    def constant(
        cls,
        value: Union[DistPoly, int],
        vars: Sequence[str],
        orders: Optional[Sequence[Order]] = None,
    ) -> "MultiSeries":
        return cls.from_terms(vars, {(0,) * len(vars): value}, orders)

    # -- basic queries -----------------------------------------------------

    def coeff(self, **exps: int) -> DistPoly:
        """Coefficient at the given exponents; unnamed variables default to 0."""
        for name in exps:
            if name not in self.vars:
                raise SeriesError(f"series has no variable {name!r}")
        key = tuple(exps.get(v, 0) for v in self.vars)
        for e, o in zip(key, self.orders):
            if o is not None and e > o:
                raise TruncationError(
                    f"coefficient {key} is beyond truncation orders {self.orders}"
                )
        return self.coeffs.get(key, DistPoly.zero())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return (
            self.vars == other.vars
            and self.orders == other.orders
            and self.coeffs == other.coeffs
        )

    def __hash__(self):  # pragma: no cover - not hashable by design
        raise TypeError("MultiSeries is not hashable")

    def __repr__(self) -> str:
        terms = len(self.coeffs)
        spec = ", ".join(
            f"{v}<= {'inf' if o is None else o}" for v, o in zip(self.vars, self.orders)
        )
        return f"MultiSeries({spec}; {terms} terms)"

    # -- structural helpers --------------------------------------------------

    def lifted(self, vars: Sequence[str]) -> "MultiSeries":
        """Embed into a larger variable tuple; new variables are complete."""
        vars = tuple(vars)
        if any(v not in vars for v in self.vars):
            raise SeriesError(f"cannot lift {self.vars} into {vars}")
        positions = {v: i for i, v in enumerate(vars)}
        orders: list[Order] = [None] * len(vars)
        for v, o in zip(self.vars, self.orders):
            orders[positions[v]] = o
        out: dict[tuple[int, ...], DistPoly] = {}
        for exps, poly in self.coeffs.items():
            new = [0] * len(vars)
            for v, e in zip(self.vars, exps):
                new[positions[v]] = e
            out[tuple(new)] = poly
        return MultiSeries(vars, tuple(orders), out)

    def truncated(self, orders: Sequence[Order]) -> "MultiSeries":
        merged = tuple(_merge(a, b) for a, b in zip(self.orders, tuple(orders)))
        kept = {
            exps: poly
            for exps, poly in self.coeffs.items()
            if all(o is None or e <= o for e, o in zip(exps, merged))
        }
        return MultiSeries(self.vars, merged, kept)

    def map_coeffs(self, fn: Callable[[DistPoly], DistPoly]) -> "MultiSeries":
        return MultiSeries(
            self.vars,
            self.orders,
            {exps: fn(poly) for exps, poly in self.coeffs.items()},
        )

    def at_t(self, value: int) -> "MultiSeries":
        """Evaluate every coefficient polynomial at an integer point."""
        return self.map_coeffs(lambda p: DistPoly.const(p(value)))

    def t_quotient(self) -> "MultiSeries":
        """Exact division of every coefficient by t; raises if inexact."""
        return self.map_coeffs(lambda p: p.t_quotient())

    # -- ring operations ---------------------------------------------------

    def _require_same_vars(self, other: "MultiSeries") -> None:
        if self.vars != other.vars:
            raise SeriesError(
                f"variable tuples differ: {self.vars} vs {other.vars}"
            )

    def __add__(self, other: "MultiSeries") -> "MultiSeries":
        self._require_same_vars(other)
        orders = tuple(_merge(a, b) for a, b in zip(self.orders, other.orders))
        out = dict(self.coeffs)
        for exps, poly in other.coeffs.items():
            got = out.get(exps)
            out[exps] = poly if got is None else got + poly
        kept = {
            exps: poly
            for exps, poly in out.items()
            if poly and all(o is None or e <= o for e, o in zip(exps, orders))
        }
        return MultiSeries(self.vars, orders, kept)

    def __neg__(self) -> "MultiSeries":
        return self.map_coeffs(lambda p: -p)

    def __sub__(self, other: "MultiSeries") -> "MultiSeries":
        return self + (-other)

    def __mul__(self, other: Union["MultiSeries", DistPoly, int]) -> "MultiSeries":
        if isinstance(other, (DistPoly, int)):
            scale = _as_poly(other)
            return MultiSeries(
                self.vars,
                self.orders,
                {e: p * scale for e, p in self.coeffs.items()},
            )
        self._require_same_vars(other)
        orders = tuple(_merge(a, b) for a, b in zip(self.orders, other.orders))
        out: dict[tuple[int, ...], DistPoly] = {}
        for ea, pa in self.coeffs.items():
            for eb, pb in other.coeffs.items():
                exps = tuple(a + b for a, b in zip(ea, eb))
                if any(o is not None and e > o for e, o in zip(exps, orders)):
                    continue
                prod = pa * pb
                got = out.get(exps)
                out[exps] = prod if got is None else got + prod
        return MultiSeries(
            self.vars, orders, {e: p for e, p in out.items() if p}
        )

    __rmul__ = __mul__

    def invert_unit(self) -> "MultiSeries":
        """Multiplicative inverse of a series whose constant term is +-1.

        Requires every truncation order to be finite (the inverse of a
        polynomial is generally an infinite series).
        """
        if any(o is None for o in self.orders):
            raise TruncationError(
                "inverting needs finite truncation orders; use truncated() first"
            )
        zero_key = (0,) * len(self.vars)
        const = self.coeffs.get(zero_key, DistPoly.zero())
        if const.coeffs not in ((1,), (-1,)):
            raise SeriesError(
                f"constant term {const} is not an invertible unit (+-1)"
            )
        sign = const.coeffs[0]
        one = MultiSeries.constant(1, self.vars, self.orders)
        # self = sign * (1 - F) with F of positive valuation.
        f = one - self * sign
        total = sum(o for o in self.orders if o is not None)
        inv = one
        for _ in range(total + 2):
            nxt = one + f * inv
            if nxt.coeffs == inv.coeffs:
                break
            inv = nxt
        else:  # pragma: no cover - valuation argument guarantees convergence
            raise AssertionError("unit inversion did not stabilize")
        return inv * sign

    # -- substitution ------------------------------------------------------

    def substitute_monomial(
        self,
        var: str,
        *,
        coeff: int = 1,
        powers: Optional[Mapping[str, int]] = None,
        t_power: int = 0,
    ) -> "MultiSeries":
        """Replace ``var`` by the monomial ``coeff * prod(v**powers[v]) * t**t_power``.

        Setting a variable to a constant (no positive powers, nonzero coeff)
        sums its slices and therefore requires the series to be complete in
        that variable; otherwise the substitution is rejected with the
        required order.  Truncation orders of the result are recomputed
        conservatively so that every reported coefficient is exact.
        """
        if var not in self.vars:
            raise SeriesError(f"series has no variable {var!r}")
        powers = {v: e for v, e in (powers or {}).items() if e != 0}
        for v, e in powers.items():
            if v not in VAR_ORDER:
                raise SeriesError(f"unknown variable {v!r} in replacement")
            if e < 0:
                raise SeriesError("replacement exponents must be nonnegative")
        if t_power < 0:
            raise SeriesError("replacement t exponent must be nonnegative")

        v_idx = self.vars.index(var)
        v_order = self.orders[v_idx]
        if v_order is not None and not powers and coeff != 0:
            raise TruncationError(
                f"substituting {var} -> constant sums all {var}-slices; "
                f"needs complete data (order None), but order is {v_order}"
            )

        kept_vars = [v for v in self.vars if v != var]
        result_vars = tuple(
            v for v in VAR_ORDER if v in set(kept_vars) | set(powers)
        )
        bound: dict[str, Order] = {v: None for v in result_vars}
        for v, o in zip(self.vars, self.orders):
            if v != var and o is not None:
                bound[v] = _merge(bound[v], o)
        if v_order is not None and coeff != 0:
            for v, e in powers.items():
                bound[v] = _merge(bound[v], e * (v_order + 1) - 1)
        new_orders = tuple(bound[v] for v in result_vars)

        position = {v: i for i, v in enumerate(result_vars)}
        out: dict[tuple[int, ...], DistPoly] = {}
        for exps, poly in self.coeffs.items():
            k = exps[v_idx]
            new = [0] * len(result_vars)
            for v, e in zip(self.vars, exps):
                if v != var:
                    new[position[v]] += e
            for v, e in powers.items():
                new[position[v]] += e * k
            if any(
                o is not None and e > o for e, o in zip(new, new_orders)
            ):
                continue
            scaled = poly * (coeff ** k)
            if t_power:
                scaled = scaled.shifted(t_power * k)
            if not scaled:
                continue
            key = tuple(new)
            got = out.get(key)
            total = scaled if got is None else got + scaled
            if total:
                out[key] = total
            elif got is not None:
                del out[key]
        return MultiSeries(result_vars, new_orders, out)

    def at_one(self, var: str) -> "MultiSeries":
        """Set a variable to 1 (requires completeness in that variable)."""
        return self.substitute_monomial(var)

    def slice_at_zero(self, var: str) -> "MultiSeries":
        """The slice with the variable's exponent equal to zero."""
        return self.substitute_monomial(var, coeff=0)

    # -- comparison --------------------------------------------------------

    def first_difference(
        self, other: "MultiSeries"
    ) -> Optional[tuple[tuple[int, ...], DistPoly, DistPoly]]:
        """Smallest exponent tuple (lexicographic) where the series differ
        within the shared truncation box, or None when they agree."""
        self._require_same_vars(other)
        box = tuple(_merge(a, b) for a, b in zip(self.orders, other.orders))

        def in_box(exps: tuple[int, ...]) -> bool:
            return all(o is None or e <= o for e, o in zip(exps, box))

        keys = {e for e in self.coeffs if in_box(e)}
        keys |= {e for e in other.coeffs if in_box(e)}
        for exps in sorted(keys):
            a = self.coeffs.get(exps, DistPoly.zero())
            b = other.coeffs.get(exps, DistPoly.zero())
            if a != b:
                return exps, a, b
        return None

    def first_nonzero(
        self,
    ) -> Optional[tuple[tuple[int, ...], DistPoly]]:
        """Smallest nonzero coefficient, or None for the zero series."""
        for exps in sorted(self.coeffs):
            return exps, self.coeffs[exps]
        return None

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        """Dense nested-array form with coefficients as decimal strings."""
        dims = []
        for i, o in enumerate(self.orders):
            if o is not None:
                dims.append(o + 1)
            else:
                dims.append(1 + max((e[i] for e in self.coeffs), default=0))

        def build(prefix: tuple[int, ...]):
            depth = len(prefix)
            if depth == len(self.vars):
                poly = self.coeffs.get(prefix, DistPoly.zero())
                return [str(c) for c in poly.coeffs]
            return [build(prefix + (i,)) for i in range(dims[depth])]

        return {
            "vars": list(self.vars),
            "orders": list(self.orders),
            "coeffs": build(()),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "MultiSeries":
        vars = tuple(data["vars"])
        orders = tuple(data["orders"])
        coeffs: dict[tuple[int, ...], DistPoly] = {}

        def walk(node, prefix: tuple[int, ...]) -> None:
            if len(prefix) == len(vars):
                poly = DistPoly(tuple(int(c) for c in node))
                if poly:
                    coeffs[prefix] = poly
                return
            for i, child in enumerate(node):
                walk(child, prefix + (i,))

        walk(data["coeffs"], ())
        return cls(vars, orders, coeffs)


def poly_in(
    vars: Sequence[str],
    terms: Mapping[tuple[int, ...], Union[DistPoly, int]],
) -> MultiSeries:
    """An exact polynomial (complete in every variable)."""
    return MultiSeries.from_terms(vars, terms)


# --------------------------------------------------------------------------
# fixed-point solvers
# --------------------------------------------------------------------------

def _fixed_point(
    initial: MultiSeries,
    step: Callable[[MultiSeries], MultiSeries],
    max_rounds: int,
) -> MultiSeries:
    current = initial
    for _ in range(max_rounds):
        nxt = step(current)
        if nxt.coeffs == current.coeffs:
            return current
        current = nxt
    raise AssertionError("fixed-point iteration did not stabilize")


def solve_A(order_x: int, order_t: Optional[int] = None) -> MultiSeries:
    """The series A with A = (1 + A)(x + t*A^2 - x*t^2*A^2), A(0) = 0.

    Every update increases the x-valuation of the correction, so at most
    ``order_x`` rounds are needed.  ``order_t`` is accepted for interface
    symmetry but ignored: coefficients stay exact polynomials in t.

    >>> solve_A(4).coeff(x=4).coeffs
    (1, 10, 11, 1)
    """
    if order_x < 1:
        raise SeriesError("order_x must be at least 1")
    del order_t
    vars = ("x",)
    orders = (order_x,)
    one = MultiSeries.constant(1, vars, orders)
    x = MultiSeries.from_terms(vars, {(1,): 1}, orders)
    xt2 = MultiSeries.from_terms(vars, {(1,): DistPoly.t(2)}, orders)
    t = DistPoly.t()

    def step(a: MultiSeries) -> MultiSeries:
        sq = a * a
        return (one + a) * (x + sq * t - sq * xt2)

    return _fixed_point(MultiSeries.zero(vars, orders), step, order_x + 2)


def solve_r(order_x: int, order_t: Optional[int] = None) -> MultiSeries:
    """The root, vanishing at x = 0, of
    ``r^3 - (2 + x + t - x*t^2)*r^2 + (1 + 2x)*r - x = 0``.

    >>> solve_r(3).coeff(x=3).coeffs
    (0, 2, 1)
    """
    if order_x < 1:
        raise SeriesError("order_x must be at least 1")
    del order_t
    vars = ("x",)
    orders = (order_x,)
    x = MultiSeries.from_terms(vars, {(1,): 1}, orders)
    quad = MultiSeries.from_terms(
        vars, {(0,): DistPoly((2, 1)), (1,): DistPoly((1, 0, -1))}, orders
    )
    inv_lin = MultiSeries.from_terms(vars, {(0,): 1, (1,): 2}, orders).invert_unit()

    def step(r: MultiSeries) -> MultiSeries:
        sq = r * r
        return (x + quad * sq - sq * r) * inv_lin

    return _fixed_point(MultiSeries.zero(vars, orders), step, order_x + 2)


def solve_N(
    order_x: int, order_u: int, order_t: Optional[int] = None
) -> MultiSeries:
    """The series N(x, u) with N(x, 0) = x/(1 - x) solving
    ``t*x*(1-x)*N^2 - ((t+1)*x^2 - (u*t-u+2)*x - u + 1)*N + x*(1-x) = 0``.

    Rearranged as ``N = B^{-1} (x(1-x) + t x(1-x) N^2)`` with the unit
    ``B = 1 - u - (u*t - u + 2)*x + (t+1)*x^2``; the iteration gains
    x-valuation each round.
    """
    if order_x < 1 or order_u < 0:
        raise SeriesError("orders must be positive")
    del order_t
    vars = ("x", "u")
    orders = (order_x, order_u)
    b = MultiSeries.from_terms(
        vars,
        {
            (0, 0): 1,
            (0, 1): -1,
            (1, 0): -2,
            (1, 1): DistPoly((1, -1)),
            (2, 0): DistPoly((1, 1)),
        },
        orders,
    )
    b_inv = b.invert_unit()
    xx = MultiSeries.from_terms(vars, {(1, 0): 1, (2, 0): -1}, orders)
    t = DistPoly.t()

    def step(n: MultiSeries) -> MultiSeries:
        return (xx + (n * n) * xx * t) * b_inv

    return _fixed_point(MultiSeries.zero(vars, orders), step, 2 * order_x + 4)


def a_n_lagrange(n: int) -> int:
    """Closed form for the t = 1 counting sequence:
    ``a(n) = (1/n) * sum_k C(n, k+1) * sum_j C(k+j, j) * C(j, k-j)``.

    The division by n must be exact; a remainder signals an implementation
    bug and raises.

    >>> [a_n_lagrange(n) for n in range(1, 7)]
    [1, 2, 6, 23, 101, 480]
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    total = 0
    for k in range(n):
        inner = sum(comb(k + j, j) * comb(j, k - j) for j in range(k + 1))
        total += comb(n, k + 1) * inner
    q, rem = divmod(total, n)
    if rem:
        raise ArithmeticError(
            f"Lagrange sum {total} is not divisible by n = {n}; internal error"
        )
    return q


if __name__ == "__main__":
    import doctest

    doctest.testmod()
