"""Brute-force reference oracles.

Everything here is deliberately independent of the propagation engine and
the LP route: stability of a candidate box is decided by spelling out the
endpoint arithmetic inline, and feasibility by enumerating integer points.
Slow, exhaustive, and only usable on small instances, which is the point;
the fast paths are tested against these.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .errors import GuardExceeded, InternalError
from .model import Instance, normalize, satisfies
from .engine import FixpointResult, Outcome, Stats
from .propagators import Box
from .reductions import Witness


@dataclass(frozen=True)
class SizeGuard:
    """Refuse enumerations whose size metric exceeds these caps."""

    max_enumeration_points: int = 10**6
    max_box_count: int = 10**6


def _point_count(inst: Instance) -> int:
    total = 1
    for v in inst.vars:
        total *= v.hi - v.lo + 1
    return total


def enum_feasible(inst: Instance, guard: Optional[SizeGuard] = None) -> Optional[Witness]:
    """First integer point (in lexicographic declaration order) satisfying
    every constraint, or None."""
    guard = guard or SizeGuard()
    total = _point_count(inst)
    if total > guard.max_enumeration_points:
        raise GuardExceeded(
            f"{total} integer points exceed the enumeration cap "
            f"{guard.max_enumeration_points}"
        )
    ranges = [range(v.lo, v.hi + 1) for v in inst.vars]
    for point in itertools.product(*ranges):
        if satisfies(inst, point):
            return Witness(point)
    return None


def _stable(norm: Instance, bounds) -> bool:
    # Linear rows: for each mentioned variable, put it at its worst
    # (minimizing) endpoint and everything else at its best; the row must
    # still clear its threshold.
    for lc in norm.lins:
        sup = 0
        for t in lc.terms:
            lo, hi = bounds[t.var]
            sup += max(t.coeff * lo, t.coeff * hi)
        for t in lc.terms:
            lo, hi = bounds[t.var]
            worst = min(t.coeff * lo, t.coeff * hi)
            best = max(t.coeff * lo, t.coeff * hi)
            if sup - best + worst < lc.rhs:
                return False
    # Squares xi = xj^2 on nonnegative domains: narrowing in both directions
    # leaves the box alone only when each endpoint of xi is exactly the
    # square of the matching endpoint of xj.
    for sc in norm.squares:
        li, hi_ = bounds[sc.xi]
        lj, hj = bounds[sc.xj]
        if li != lj * lj or hi_ != hj * hj:
            return False
    # xh = max(xi, xj): the five one-sided support conditions.
    for mc in norm.maxes:
        lh, hh = bounds[mc.xh]
        li, hi_ = bounds[mc.xi]
        lj, hj = bounds[mc.xj]
        if lh < li or lh < lj:
            return False
        if hh > max(hi_, hj):
            return False
        if hi_ > hh or hj > hh:
            return False
    return True


def gfp_brute(inst: Instance, guard: Optional[SizeGuard] = None) -> FixpointResult:
    """Greatest stable box by exhaustion: enumerate every sub-box of the
    declared domains, keep the stable ones, and join them.  The join must
    itself be stable (stable boxes are closed under join); that is asserted,
    not assumed."""
    guard = guard or SizeGuard()
    norm = normalize(inst)
    metric = 1
    for v in norm.vars:
        d = v.hi - v.lo + 1
        metric *= d * d
    if metric > guard.max_box_count:
        raise GuardExceeded(
            f"sub-box metric {metric} exceeds the cap {guard.max_box_count}"
        )

    per_var = [
        [(a, b) for a in range(v.lo, v.hi + 1) for b in range(a, v.hi + 1)]
        for v in norm.vars
    ]
    join = None
    for bounds in itertools.product(*per_var):
        if not _stable(norm, bounds):
            continue
        if join is None:
            join = list(bounds)
        else:
            join = [
                (min(jl, l), max(jh, h))
                for (jl, jh), (l, h) in zip(join, bounds)
            ]

    stats = Stats(
        propagator_count=sum(len(lc.terms) for lc in norm.lins)
        + len(norm.squares)
        + len(norm.maxes),
        bit_width=max(
            (abs(x).bit_length() for x in _magnitudes(norm)), default=0
        ),
    )
    if join is None:
        return FixpointResult(Outcome.EMPTY, None, stats)
    if not _stable(norm, tuple(join)):
        raise InternalError("join of stable boxes is not stable")
    return FixpointResult(Outcome.NONEMPTY, Box(tuple(join)), stats)


def _magnitudes(inst: Instance):
    for v in inst.vars:
        yield v.lo
        yield v.hi
    for lc in inst.lins:
        for t in lc.terms:
            yield t.coeff
        yield lc.rhs
