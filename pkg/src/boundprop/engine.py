"""Greatest-fixpoint computation by round-robin narrowing.

The core loop keeps applying every operator in a fixed order until one full
pass changes nothing.  On integer boxes each strict change moves a bound by
at least one unit, so the loop always terminates and the number of operator
applications is at most ``n * p * d`` (variables times operators times the
largest domain cardinality); the engine asserts this bound on every integer
run.  Continuous narrowing has no such guarantee (rational tightenings can
shrink geometrically forever), which is what :class:`Limits` is for.

The order of operators is observable through the ``order`` seed; the final
box is not affected by it (the operators form a confluent narrowing system),
only the path taken.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from typing import Optional

from .errors import InstanceError, InternalError, UnsupportedInstanceError
from .model import Instance, Value, format_lin, is_normalized, normalize
from .propagators import (
    EMPTY,
    Box,
    BoxLike,
    Kind,
    PropagatorRef,
    apply_prop,
    check_bc_inequality,
)


class Mode(enum.Enum):
    INT = "int"
    CONT = "cont"


class Outcome(enum.Enum):
    NONEMPTY = "NONEMPTY"
    EMPTY = "EMPTY"
    LIMIT = "LIMIT"


@dataclass(frozen=True)
class Limits:
    """Optional caps on the run; exceeding one yields a LIMIT outcome with
    the partial box, distinct from EMPTY."""

    max_sweeps: Optional[int] = None
    max_applications: Optional[int] = None

    def __post_init__(self):
        for name in ("max_sweeps", "max_applications"):
            val = getattr(self, name)
            if val is not None and val <= 0:
                raise InstanceError(f"{name} must be positive, got {val}")


@dataclass
class Stats:
    sweeps: int = 0
    applications: int = 0
    tightenings: int = 0
    propagator_count: int = 0
    bit_width: int = 0


@dataclass(frozen=True)
class FixpointResult:
    outcome: Outcome
    box: Optional[Box]  # stable box, partial box on LIMIT, None on EMPTY
    stats: Stats


@dataclass(frozen=True)
class TraceEvent:
    seq: int
    prop: PropagatorRef
    var: int
    side: str  # "lo" | "hi"
    old: Value
    new: Value


def format_trace_event(inst: Instance, ev: TraceEvent) -> str:
    return (
        f"{ev.seq} {ev.prop.kind.value} {ev.prop.k} "
        f"{inst.names[ev.var]} {ev.side} {ev.old} -> {ev.new}"
    )


def make_propagators(inst: Instance, mode: Mode) -> tuple[PropagatorRef, ...]:
    """One linear operator per (row, mentioned variable), plus one operator
    per square / max constraint in integer mode."""
    if mode is Mode.CONT and (inst.squares or inst.maxes):
        raise UnsupportedInstanceError(
            "continuous propagation is defined for linear-only instances"
        )
    kind = Kind.LIN_INT if mode is Mode.INT else Kind.LIN_CONT
    props = [
        PropagatorRef(kind, k, t.var)
        for k, lc in enumerate(inst.lins)
        for t in lc.terms
    ]
    if mode is Mode.INT:
        props += [PropagatorRef(Kind.SQUARE, k) for k in range(len(inst.squares))]
        props += [PropagatorRef(Kind.MAX, k) for k in range(len(inst.maxes))]
    return tuple(props)


def bit_width(inst: Instance) -> int:
    """Bits of the largest magnitude among bounds, coefficients and
    right-hand sides."""
    vals = [v.lo for v in inst.vars] + [v.hi for v in inst.vars]
    for lc in inst.lins:
        vals.extend(t.coeff for t in lc.terms)
        vals.append(lc.rhs)
    return max((abs(x).bit_length() for x in vals), default=0)


def _check_application_bound(inst: Instance, mode: Mode, stats: Stats):
    if mode is not Mode.INT:
        return
    bound = inst.n * stats.propagator_count * inst.domain_size
    if stats.applications > bound:
        raise InternalError(
            f"applications {stats.applications} exceed the pseudo-polynomial "
            f"bound n*p*d = {bound}"
        )


def _run(inst, mode, order, limits, trace):
    if not is_normalized(inst):
        raise InstanceError("the engine requires a normalized instance")
    props = list(make_propagators(inst, mode))
    if order is not None:
        random.Random(order).shuffle(props)
    limits = limits or Limits()
    stats = Stats(propagator_count=len(props), bit_width=bit_width(inst))
    box = Box.initial(inst)

    def finish(outcome, final_box):
        _check_application_bound(inst, mode, stats)
        return FixpointResult(outcome, final_box, stats)

    changed = True
    while changed:
        if limits.max_sweeps is not None and stats.sweeps >= limits.max_sweeps:
            return finish(Outcome.LIMIT, box)
        stats.sweeps += 1
        changed = False
        for pref in props:
            if (
                limits.max_applications is not None
                and stats.applications >= limits.max_applications
            ):
                return finish(Outcome.LIMIT, box)
            stats.applications += 1
            new = apply_prop(inst, pref, box)
            if new is EMPTY:
                stats.tightenings += 1
                return finish(Outcome.EMPTY, None)
            if new is not box:
                stats.tightenings += 1
                changed = True
                if trace is not None:
                    for var, (old, nw) in enumerate(zip(box.bounds, new.bounds)):
                        if old[0] != nw[0]:
                            trace.append(
                                TraceEvent(len(trace) + 1, pref, var, "lo", old[0], nw[0])
                            )
                        if old[1] != nw[1]:
                            trace.append(
                                TraceEvent(len(trace) + 1, pref, var, "hi", old[1], nw[1])
                            )
                box = new
    return finish(Outcome.NONEMPTY, box)


def gfp_naive(
    inst: Instance,
    mode: Mode = Mode.INT,
    order: Optional[int] = None,
    limits: Optional[Limits] = None,
) -> FixpointResult:
    """Run the round-robin loop to the greatest fixpoint.

    ``order`` seeds a shuffle of the operator list (None keeps construction
    order).  An empty box is detected eagerly: the application that crosses
    a bound ends the run immediately.
    """
    return _run(inst, mode, order, limits, None)


def run_traced(
    inst: Instance,
    mode: Mode = Mode.INT,
    order: Optional[int] = None,
    limits: Optional[Limits] = None,
) -> tuple[FixpointResult, tuple[TraceEvent, ...]]:
    """Same run as :func:`gfp_naive`, also returning one event per bound
    actually moved.  The application that empties the box contributes no
    bound events (the EMPTY outcome records it); it still counts as a
    tightening in the stats.
    """
    trace: list[TraceEvent] = []
    result = _run(inst, mode, order, limits, trace)
    return result, tuple(trace)


@dataclass(frozen=True)
class Violation:
    kind: str  # "bounds" | "linear" | "square" | "max"
    index: Optional[int]
    var: int
    side: str  # "lo" | "hi"
    message: str


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    violation: Optional[Violation] = None

    def __bool__(self):
        return self.ok


def verify_fixpoint(inst: Instance, box: BoxLike) -> VerifyResult:
    """Decide stability of a box directly from the fixpoint conditions.

    Checks, in order: every interval inside the declared domain; every
    (row, variable) support inequality; the four conditions per square
    constraint; the five per max constraint.  EMPTY is vacuously stable.
    Reports the first violated condition.
    """
    if box is EMPTY:
        return VerifyResult(True)
    norm = normalize(inst)
    if len(box.bounds) != norm.n:
        raise InstanceError(
            f"box has {len(box.bounds)} intervals, instance has {norm.n} variables"
        )
    names = norm.names

    def fail(kind, index, var, side, message):
        return VerifyResult(False, Violation(kind, index, var, side, message))

    for i, decl in enumerate(norm.vars):
        lo, hi = box.bounds[i]
        if lo < decl.lo:
            return fail(
                "bounds", None, i, "lo",
                f"{names[i]} lower bound {lo} below declared {decl.lo}",
            )
        if hi > decl.hi:
            return fail(
                "bounds", None, i, "hi",
                f"{names[i]} upper bound {hi} above declared {decl.hi}",
            )

    for k, lc in enumerate(norm.lins):
        for t in lc.terms:
            if not check_bc_inequality(norm, t.var, k, box):
                side = "lo" if t.coeff > 0 else "hi"
                return fail(
                    "linear", k, t.var, side,
                    f'"{format_lin(norm, lc)}" gives no support at the '
                    f"{side} bound of {names[t.var]}",
                )

    for k, sc in enumerate(norm.squares):
        li, hi_ = box.bounds[sc.xi]
        lj, hj = box.bounds[sc.xj]
        label = f"{names[sc.xi]} = {names[sc.xj]}^2"
        if li < lj * lj:
            return fail("square", k, sc.xi, "lo", f'"{label}" unstable at lo of {names[sc.xi]}')
        if hi_ > hj * hj:
            return fail("square", k, sc.xi, "hi", f'"{label}" unstable at hi of {names[sc.xi]}')
        if lj * lj < li:  # lj must reach sqrt(li)
            return fail("square", k, sc.xj, "lo", f'"{label}" unstable at lo of {names[sc.xj]}')
        if hj * hj > hi_:
            return fail("square", k, sc.xj, "hi", f'"{label}" unstable at hi of {names[sc.xj]}')

    for k, mc in enumerate(norm.maxes):
        lh, hh = box.bounds[mc.xh]
        li, hi_ = box.bounds[mc.xi]
        lj, hj = box.bounds[mc.xj]
        label = f"{names[mc.xh]} = max({names[mc.xi]}, {names[mc.xj]})"
        if hh > max(hi_, hj):
            return fail("max", k, mc.xh, "hi", f'"{label}" unstable at hi of {names[mc.xh]}')
        if hi_ > hh:
            return fail("max", k, mc.xi, "hi", f'"{label}" unstable at hi of {names[mc.xi]}')
        if hj > hh:
            return fail("max", k, mc.xj, "hi", f'"{label}" unstable at hi of {names[mc.xj]}')
        if lh < li:
            return fail("max", k, mc.xh, "lo", f'"{label}" unstable at lo of {names[mc.xh]}')
        if lh < lj:
            return fail("max", k, mc.xh, "lo", f'"{label}" unstable at lo of {names[mc.xh]}')

    return VerifyResult(True)
