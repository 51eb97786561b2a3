"""Interval-narrowing operators.

Every operator is a pure function of ``(instance, box)`` returning either a
narrowed :class:`Box` or the distinguished :data:`EMPTY` value when an
interval would cross.  Operators are contracting (output inside input),
monotone (smaller input, smaller output) and correct: they never remove an
integer point that satisfies their constraint together with the box.

A linear row ``sum_i a_i * x_i >= c`` yields one operator per variable it
mentions.  The operator targeting ``x_i`` evaluates every other term at the
endpoint that maximizes it,

    q = c - sum_{j != i} max(a_j * lo_j, a_j * hi_j)

and then imposes ``a_i * x_i >= q``: for ``a_i > 0`` the lower bound of
``x_i`` rises to ``ceil(q / a_i)``, for ``a_i < 0`` the upper bound drops to
``floor(q / a_i)``.  Rounding is exact integer arithmetic, never floating
point.  The continuous variant assigns ``q / a_i`` as an exact rational
instead of rounding.

For ``xi = xj ^ 2`` (nonnegative domains) the lower root bound rounds *up*:
narrowing ``lo(xj)`` to the floor of ``sqrt(lo(xi))`` could leave an integer
bound whose square lies below the admissible range, so the ceiling is the
value that makes the narrowed bound supportable.  The upper root bound
rounds down as usual.

For ``xh = max(xi, xj)`` the simple formulation is used: raise ``lo(xh)`` to
both argument lower bounds, cap ``hi(xh)`` by the larger argument upper
bound, and cap each argument's upper bound by ``hi(xh)``.  All four updates
read the pre-state, then crossed intervals are detected.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

from .errors import InstanceError
from .model import Instance, MaxConstraint, SquareConstraint, Value


class _EmptyBox:
    """Singleton marker for the empty box."""

    __slots__ = ()

    def __repr__(self):
        return "EMPTY"


EMPTY = _EmptyBox()

BoxLike = Union["Box", _EmptyBox]


@dataclass(frozen=True)
class Box:
    """Per-variable closed intervals; values are ints or exact rationals."""

    bounds: tuple[tuple[Value, Value], ...]

    def __post_init__(self):
        for lo, hi in self.bounds:
            if lo > hi:
                raise InstanceError(f"crossed interval [{lo}, {hi}]")

    @classmethod
    def initial(cls, inst: Instance) -> "Box":
        return cls(tuple((v.lo, v.hi) for v in inst.vars))

    def lo(self, i: int) -> Value:
        return self.bounds[i][0]

    def hi(self, i: int) -> Value:
        return self.bounds[i][1]

    def replace(self, i: int, lo: Value, hi: Value) -> "Box":
        b = list(self.bounds)
        b[i] = (lo, hi)
        return Box(tuple(b))


def encloses(outer: BoxLike, inner: BoxLike) -> bool:
    """True when ``inner`` is a sub-box of ``outer`` (EMPTY is inside everything)."""
    if inner is EMPTY:
        return True
    if outer is EMPTY:
        return False
    return all(
        ilo >= olo and ihi <= ohi
        for (olo, ohi), (ilo, ihi) in zip(outer.bounds, inner.bounds)
    )


class Kind(enum.Enum):
    LIN_INT = "LIN_INT"
    LIN_CONT = "LIN_CONT"
    SQUARE = "SQUARE"
    MAX = "MAX"


@dataclass(frozen=True)
class PropagatorRef:
    """Names one operator: a constraint index plus, for linear kinds, the
    target variable."""

    kind: Kind
    k: int
    i: Optional[int] = None


class SignTable:
    """Coefficient lookup for the linear rows of one instance.

    ``sign(i, k)`` is '+' when the coefficient of variable i in row k is
    nonnegative.  The induced endpoint selectors are ``term_sup`` (largest
    value of ``a * x_i`` over the interval, i.e. the '+sign' endpoint) and
    ``term_inf`` (smallest, the '-sign' endpoint).
    """

    def __init__(self, inst: Instance):
        self._coeffs = tuple({t.var: t.coeff for t in lc.terms} for lc in inst.lins)

    def coeff(self, i: int, k: int) -> int:
        return self._coeffs[k].get(i, 0)

    def sign(self, i: int, k: int) -> str:
        return "+" if self.coeff(i, k) >= 0 else "-"

    def term_sup(self, i: int, k: int, box: Box) -> Value:
        a = self._coeffs[k].get(i, 0)
        lo, hi = box.bounds[i]
        return a * hi if a >= 0 else a * lo

    def term_inf(self, i: int, k: int, box: Box) -> Value:
        a = self._coeffs[k].get(i, 0)
        lo, hi = box.bounds[i]
        return a * lo if a >= 0 else a * hi


@lru_cache(maxsize=1024)
def sign_table(inst: Instance) -> SignTable:
    return SignTable(inst)


def isqrt_floor(n: int) -> int:
    """Exact floor of the square root of a nonnegative integer."""
    return math.isqrt(n)


def isqrt_ceil(n: int) -> int:
    """Exact ceiling of the square root of a nonnegative integer."""
    r = math.isqrt(n)
    return r if r * r == n else r + 1


def _ceil_div(q: Value, a: int) -> Value:
    # a > 0
    if isinstance(q, int):
        return -((-q) // a)
    return math.ceil(q / a)


def _floor_div(q: Value, a: int) -> Value:
    # a != 0; Python's // floors toward -inf for ints
    if isinstance(q, int):
        return q // a
    return math.floor(q / a)


def q_value(inst: Instance, i: int, k: int, box: Box) -> Value:
    """Residual right-hand side of row k once every variable but i sits at
    its maximizing endpoint."""
    tbl = sign_table(inst)
    q = inst.lins[k].rhs
    for t in inst.lins[k].terms:
        if t.var != i:
            q -= tbl.term_sup(t.var, k, box)
    return q


def apply_linear_int(inst: Instance, pref: PropagatorRef, box: Box) -> BoxLike:
    """Integer narrowing for one (row, target) pair; unchanged input returns
    the same object."""
    i, k = pref.i, pref.k
    a = sign_table(inst).coeff(i, k)
    if a == 0:
        return box
    q = q_value(inst, i, k, box)
    lo, hi = box.bounds[i]
    if a > 0:
        nb = _ceil_div(q, a)
        if nb <= lo:
            return box
        if nb > hi:
            return EMPTY
        return box.replace(i, nb, hi)
    nb = _floor_div(q, a)
    if nb >= hi:
        return box
    if nb < lo:
        return EMPTY
    return box.replace(i, lo, nb)


def apply_linear_cont(inst: Instance, pref: PropagatorRef, box: Box) -> BoxLike:
    """Continuous narrowing: same as the integer operator without rounding."""
    i, k = pref.i, pref.k
    a = sign_table(inst).coeff(i, k)
    if a == 0:
        return box
    q = q_value(inst, i, k, box)
    nb = Fraction(q) / a
    lo, hi = box.bounds[i]
    if a > 0:
        if nb <= lo:
            return box
        if nb > hi:
            return EMPTY
        return box.replace(i, nb, hi)
    if nb >= hi:
        return box
    if nb < lo:
        return EMPTY
    return box.replace(i, lo, nb)


def _accumulate(box: Box, raises: list[tuple[int, Value]], drops: list[tuple[int, Value]]) -> BoxLike:
    # all candidate bounds were computed from the pre-state; merge per
    # variable (aliased constraints hit the same slot twice), then check
    nlo: dict[int, Value] = {}
    nhi: dict[int, Value] = {}
    for v, val in raises:
        nlo[v] = max(nlo.get(v, box.lo(v)), val)
    for v, val in drops:
        nhi[v] = min(nhi.get(v, box.hi(v)), val)
    touched = set(nlo) | set(nhi)
    changed = False
    b = list(box.bounds)
    for v in touched:
        lo = nlo.get(v, b[v][0])
        hi = nhi.get(v, b[v][1])
        if lo > hi:
            return EMPTY
        if (lo, hi) != b[v]:
            b[v] = (lo, hi)
            changed = True
    return Box(tuple(b)) if changed else box


def apply_square(c: SquareConstraint, box: Box) -> BoxLike:
    """Narrow both sides of xi = xj ^ 2 simultaneously from the pre-state."""
    li, hi_ = box.bounds[c.xi]
    lj, hj = box.bounds[c.xj]
    return _accumulate(
        box,
        raises=[(c.xi, lj * lj), (c.xj, isqrt_ceil(li))],
        drops=[(c.xi, hj * hj), (c.xj, isqrt_floor(hi_))],
    )


def apply_max(c: MaxConstraint, box: Box) -> BoxLike:
    """Narrow xh = max(xi, xj) simultaneously from the pre-state."""
    lh, hh = box.bounds[c.xh]
    li, hi_ = box.bounds[c.xi]
    lj, hj = box.bounds[c.xj]
    return _accumulate(
        box,
        raises=[(c.xh, li), (c.xh, lj)],
        drops=[(c.xh, max(hi_, hj)), (c.xi, hh), (c.xj, hh)],
    )


def apply_prop(inst: Instance, pref: PropagatorRef, box: Box) -> BoxLike:
    if pref.kind is Kind.LIN_INT:
        return apply_linear_int(inst, pref, box)
    if pref.kind is Kind.LIN_CONT:
        return apply_linear_cont(inst, pref, box)
    if pref.kind is Kind.SQUARE:
        return apply_square(inst.squares[pref.k], box)
    return apply_max(inst.maxes[pref.k], box)


def check_bc_inequality(inst: Instance, i: int, k: int, box: Box) -> bool:
    """Support test for the bound the row-k operator targeting i would move.

    True iff the target term evaluated at its minimizing endpoint plus every
    other term at its maximizing endpoint reaches the right-hand side; a zero
    target coefficient counts as supported by convention.  Equivalent to the
    integer operator leaving the box unchanged.
    """
    tbl = sign_table(inst)
    if tbl.coeff(i, k) == 0:
        return True
    lhs = tbl.term_inf(i, k, box)
    for t in inst.lins[k].terms:
        if t.var != i:
            lhs += tbl.term_sup(t.var, k, box)
    return lhs >= inst.lins[k].rhs
