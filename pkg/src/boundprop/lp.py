"""Exact rational linear programming over bound variables.

The stable boxes of a normalized linear instance are exactly the solutions
of one linear system over 2n variables, a pair ``lo_i``, ``hi_i`` per
instance variable: each (row, target) support inequality becomes a row in
which the target variable is replaced by its minimizing bound variable and
every other variable by its maximizing one, plus the ordering rows
``l_i <= lo_i``, ``lo_i <= hi_i``, ``hi_i <= u_i``.  Integer solutions of
the system are integer fixpoints; rational feasibility decides whether a
continuous fixpoint exists, and infeasibility therefore also proves the
integer greatest fixpoint empty.

On unit-coefficient instances the per-bound optima of the system (minimum
of each ``lo_i``, maximum of each ``hi_i``) are integral and assemble into
the integer greatest fixpoint, so :func:`gfp_unit` computes it by 2n exact
LP solves instead of iterating.

The solver is a dense two-phase simplex over ``fractions.Fraction`` with
Bland's anti-cycling rule; FEASIBLE and OPTIMAL answers are exact
certificates, never floating point.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import engine
from .errors import InstanceError, InternalError, UnsupportedInstanceError
from .model import Instance, classify, is_normalized
from .propagators import Box

_F0 = Fraction(0)
_F1 = Fraction(1)


class Direction(enum.Enum):
    MIN = "min"
    MAX = "max"


class LpStatus(enum.Enum):
    FEASIBLE = "FEASIBLE"
    INFEASIBLE = "INFEASIBLE"
    OPTIMAL = "OPTIMAL"
    UNBOUNDED = "UNBOUNDED"


@dataclass(frozen=True)
class LpOutcome:
    status: LpStatus
    point: Optional[tuple[Fraction, ...]] = None
    value: Optional[Fraction] = None


@dataclass(frozen=True)
class LpProblem:
    """Rows are dense ``(coeffs, rhs)`` pairs meaning ``coeffs . x >= rhs``."""

    var_names: tuple[str, ...]
    rows: tuple[tuple[tuple[Fraction, ...], Fraction], ...]
    objective: Optional[tuple[tuple[Fraction, ...], Direction]] = None

    def __post_init__(self):
        n = len(self.var_names)
        for coeffs, _ in self.rows:
            if len(coeffs) != n:
                raise InstanceError(f"row has {len(coeffs)} coefficients, expected {n}")
        if self.objective is not None and len(self.objective[0]) != n:
            raise InstanceError("objective length does not match variable count")

    @property
    def num_vars(self) -> int:
        return len(self.var_names)

    def with_objective(self, coeffs: Sequence, direction: Direction) -> "LpProblem":
        dense = tuple(Fraction(c) for c in coeffs)
        return LpProblem(self.var_names, self.rows, (dense, direction))

    def dump(self) -> str:
        """One constraint per line, exact rationals rendered as p/q."""

        def side(coeffs):
            parts = [
                f"{c}*{name}" for c, name in zip(coeffs, self.var_names) if c != 0
            ]
            return " + ".join(parts) if parts else "0"

        lines = [f"{side(coeffs)} >= {rhs}" for coeffs, rhs in self.rows]
        if self.objective is not None:
            coeffs, direction = self.objective
            lines.append(f"{direction.value}: {side(coeffs)}")
        return "\n".join(lines)


class _Simplex:
    """Two-phase dense tableau simplex with Bland's rule.

    Column layout: structural columns first (one per shifted variable, two
    per split free variable), then one surplus column per row, then the
    artificial columns phase 1 needed.  The objective row is carried
    separately with the convention ``objrow[-1] == -(current objective)``.
    """

    def __init__(self, prob: LpProblem):
        nv = prob.num_vars
        rows = [
            ([Fraction(c) for c in coeffs], Fraction(rhs)) for coeffs, rhs in prob.rows
        ]

        # Variables with a detectable lower bound (a single-variable row
        # a*x >= r with a > 0) are shifted to start at that bound; the
        # defining rows become "shifted var >= 0" and are dropped.  Others
        # are split into a positive and a negative part.
        lower: list[Optional[Fraction]] = [None] * nv
        drop: list[bool] = [False] * len(rows)
        for r, (coeffs, rhs) in enumerate(rows):
            nz = [(j, c) for j, c in enumerate(coeffs) if c]
            if len(nz) == 1 and nz[0][1] > 0:
                j, c = nz[0]
                cand = rhs / c
                if lower[j] is None or cand > lower[j]:
                    lower[j] = cand
                drop[r] = True

        self.shift = lower
        self.columns: list[tuple[int, int]] = []  # (var, +1|-1) contribution
        col_of_var: list[tuple[int, Optional[int]]] = []
        for j in range(nv):
            if lower[j] is not None:
                col_of_var.append((len(self.columns), None))
                self.columns.append((j, 1))
            else:
                pos = len(self.columns)
                self.columns.append((j, 1))
                self.columns.append((j, -1))
                col_of_var.append((pos, pos + 1))
        self.col_of_var = col_of_var
        self.nstruct = len(self.columns)

        kept = []
        for r, (coeffs, rhs) in enumerate(rows):
            if drop[r]:
                continue
            shifted_rhs = rhs - sum(
                coeffs[j] * lower[j] for j in range(nv) if lower[j] is not None and coeffs[j]
            )
            dense = []
            for var, mult in self.columns:
                dense.append(coeffs[var] * mult)
            kept.append((dense, shifted_rhs))

        m = len(kept)
        ncols = self.nstruct + m  # + artificials appended below
        tableau: list[list[Fraction]] = []
        basis: list[int] = []
        art_cols: list[int] = []
        for r, (dense, rhs) in enumerate(kept):
            row = dense + [_F0] * m + [rhs]
            row[self.nstruct + r] = Fraction(-1)  # surplus
            if rhs <= 0:
                # negate so the surplus column is +1 and can start basic
                row = [-c for c in row]
                basis.append(self.nstruct + r)
            else:
                basis.append(-1)  # placeholder, artificial added next
            tableau.append(row)
        for r in range(m):
            if basis[r] == -1:
                col = ncols + len(art_cols)
                art_cols.append(col)
                for rr in range(m):
                    tableau[rr].insert(-1, _F1 if rr == r else _F0)
                basis[r] = col
        self.tableau = tableau
        self.basis = basis
        self.art_cols = set(art_cols)
        self.total_cols = ncols + len(art_cols)
        self.feasible = self._phase1()
        if self.feasible:
            self._snapshot = ([row[:] for row in self.tableau], self.basis[:])

    # -- pivoting ------------------------------------------------------------

    def _pivot(self, tableau, basis, r, c):
        prow = tableau[r]
        piv = prow[c]
        if piv != 1:
            inv = 1 / piv
            tableau[r] = prow = [x * inv for x in prow]
        for i, row in enumerate(tableau):
            if i != r and row[c]:
                f = row[c]
                tableau[i] = [a - f * b if b else a for a, b in zip(row, prow)]
        basis[r] = c

    def _iterate(self, tableau, basis, objrow, banned):
        """Minimize until no reduced cost is negative; Bland's rule.
        Returns False when unbounded."""
        ncols = len(objrow) - 1
        while True:
            pc = -1
            for j in range(ncols):
                if j in banned:
                    continue
                if objrow[j] < 0:
                    pc = j
                    break
            if pc == -1:
                return True
            pr = -1
            best = None
            for i, row in enumerate(tableau):
                a = row[pc]
                if a > 0:
                    ratio = row[-1] / a
                    if best is None or ratio < best or (ratio == best and basis[i] < basis[pr]):
                        best = ratio
                        pr = i
            if pr == -1:
                return False
            self._pivot(tableau, basis, pr, pc)
            f = objrow[pc]
            if f:
                prow = tableau[pr]
                objrow[:] = [a - f * b if b else a for a, b in zip(objrow, prow)]

    def _phase1(self):
        if not self.art_cols:
            return True
        objrow = [_F0] * (self.total_cols + 1)
        for c in self.art_cols:
            objrow[c] = _F1
        for r, b in enumerate(self.basis):
            if b in self.art_cols:
                row = self.tableau[r]
                objrow[:] = [a - b_ if b_ else a for a, b_ in zip(objrow, row)]
        ok = self._iterate(self.tableau, self.basis, objrow, banned=frozenset())
        if not ok:
            raise InternalError("phase-1 objective cannot be unbounded")
        if -objrow[-1] > 0:
            return False
        # drive leftover degenerate artificials out of the basis
        for r in range(len(self.tableau)):
            if self.basis[r] in self.art_cols:
                row = self.tableau[r]
                piv = next(
                    (
                        j
                        for j in range(self.total_cols)
                        if j not in self.art_cols and row[j]
                    ),
                    None,
                )
                if piv is not None:
                    self._pivot(self.tableau, self.basis, r, piv)
        # fully redundant rows (still artificial-basic, necessarily zero) stay;
        # the artificial columns are banned from ever entering again
        return True

    def _point(self, tableau, basis) -> tuple[Fraction, ...]:
        vals = [_F0] * self.total_cols
        for r, b in enumerate(basis):
            vals[b] = tableau[r][-1]
        out = []
        for j, (pos, neg) in enumerate(self.col_of_var):
            if neg is None:
                out.append(self.shift[j] + vals[pos])
            else:
                out.append(vals[pos] - vals[neg])
        return tuple(out)

    def basic_point(self) -> tuple[Fraction, ...]:
        return self._point(self.tableau, self.basis)

    def optimize(self, coeffs: Sequence[Fraction], direction: Direction):
        """Phase 2 from the stored feasible basis; returns (status, value, point)."""
        if not self.feasible:
            raise InternalError("optimize called on an infeasible system")
        tableau = [row[:] for row in self._snapshot[0]]
        basis = self._snapshot[1][:]
        sign = 1 if direction is Direction.MIN else -1
        cost = [_F0] * (self.total_cols + 1)
        const = _F0
        for j, c in enumerate(coeffs):
            if not c:
                continue
            c = sign * Fraction(c)
            pos, neg = self.col_of_var[j]
            if neg is None:
                cost[pos] += c
                const += c * self.shift[j]
            else:
                cost[pos] += c
                cost[neg] -= c
        objrow = cost[:]
        for r, b in enumerate(basis):
            f = objrow[b]
            if f:
                row = tableau[r]
                objrow[:] = [a - f * b_ if b_ else a for a, b_ in zip(objrow, row)]
        ok = self._iterate(tableau, basis, objrow, banned=self.art_cols)
        if not ok:
            return LpStatus.UNBOUNDED, None, None
        value = sign * (-objrow[-1] + const)
        return LpStatus.OPTIMAL, value, self._point(tableau, basis)


def lp_solve(prob: LpProblem) -> LpOutcome:
    """Solve exactly.  Without an objective the answer is FEASIBLE (with a
    point) or INFEASIBLE; with one it is OPTIMAL (value and point),
    INFEASIBLE or UNBOUNDED."""
    sim = _Simplex(prob)
    if not sim.feasible:
        return LpOutcome(LpStatus.INFEASIBLE)
    if prob.objective is None:
        return LpOutcome(LpStatus.FEASIBLE, point=sim.basic_point())
    coeffs, direction = prob.objective
    status, value, point = sim.optimize(coeffs, direction)
    if status is LpStatus.UNBOUNDED:
        return LpOutcome(LpStatus.UNBOUNDED)
    return LpOutcome(LpStatus.OPTIMAL, point=point, value=value)


# -- the bound-variable system -------------------------------------------------


def _lo(i: int) -> int:
    return i


def build_eq6_system(inst: Instance) -> LpProblem:
    """Bound-variable system whose solutions are the stable boxes.

    Variables: ``lo(x)`` at index i and ``hi(x)`` at index n+i.  One row per
    (constraint, mentioned variable) pair plus the 3n ordering rows.
    """
    if inst.squares or inst.maxes:
        raise UnsupportedInstanceError(
            "the bound-variable system is defined for linear-only instances"
        )
    if not is_normalized(inst):
        raise InstanceError("build_eq6_system requires a normalized instance")
    n = inst.n
    names = tuple(f"lo({v.name})" for v in inst.vars) + tuple(
        f"hi({v.name})" for v in inst.vars
    )

    def hi(i):
        return n + i

    rows = []

    def add(entries, rhs):
        dense = [_F0] * (2 * n)
        for idx, c in entries:
            dense[idx] += c
        rows.append((tuple(dense), Fraction(rhs)))

    for lc in inst.lins:
        for target in lc.terms:
            entries = []
            for t in lc.terms:
                if t.var == target.var:
                    # the target sits at its minimizing bound
                    entries.append((_lo(t.var) if t.coeff > 0 else hi(t.var), t.coeff))
                else:
                    # every other variable at its maximizing bound
                    entries.append((hi(t.var) if t.coeff > 0 else _lo(t.var), t.coeff))
            add(entries, lc.rhs)
    for i, decl in enumerate(inst.vars):
        add([(_lo(i), 1)], decl.lo)  # lo_i >= l_i
        add([(hi(i), 1), (_lo(i), -1)], 0)  # hi_i >= lo_i
        add([(hi(i), -1)], -decl.hi)  # hi_i <= u_i
    return LpProblem(names, tuple(rows))


def cont_fixpoint_exists(inst: Instance) -> bool:
    """Rational feasibility of the bound-variable system.  False also proves
    the integer greatest fixpoint empty."""
    tags = classify(inst)
    if not tags.linear_only:
        raise UnsupportedInstanceError("continuous fixpoints are defined for linear-only instances")
    return lp_solve(build_eq6_system(inst)).status is LpStatus.FEASIBLE


def _lp_stats(inst: Instance) -> engine.Stats:
    return engine.Stats(
        propagator_count=sum(len(lc.terms) for lc in inst.lins),
        bit_width=engine.bit_width(inst),
    )


def _gfp_by_optimization(inst: Instance, require_integral: bool) -> engine.FixpointResult:
    prob = build_eq6_system(inst)
    sim = _Simplex(prob)
    stats = _lp_stats(inst)
    if not sim.feasible:
        return engine.FixpointResult(engine.Outcome.EMPTY, None, stats)
    n = inst.n
    point = [None] * (2 * n)
    for j in range(2 * n):
        coeffs = [_F0] * (2 * n)
        coeffs[j] = _F1
        direction = Direction.MIN if j < n else Direction.MAX
        status, value, _ = sim.optimize(coeffs, direction)
        if status is not LpStatus.OPTIMAL:
            raise InternalError("bound-variable optimum cannot be unbounded inside the box rows")
        point[j] = value
    feas_point = tuple(point)
    for coeffs, rhs in prob.rows:
        lhs = sum(c * v for c, v in zip(coeffs, feas_point) if c)
        if lhs < rhs:
            raise InternalError(
                "per-bound optima failed to assemble into a stable box"
            )
    if require_integral:
        for name, v in zip(prob.var_names, point):
            if v.denominator != 1:
                raise InternalError(
                    f"non-integral optimum {v} for {name} on a unit-coefficient instance"
                )
        point = [int(v) for v in point]
    box = Box(tuple((point[i], point[n + i]) for i in range(n)))
    return engine.FixpointResult(engine.Outcome.NONEMPTY, box, stats)


def gfp_unit(inst: Instance) -> engine.FixpointResult:
    """Integer greatest fixpoint of a unit-coefficient linear instance via
    2n exact LP solves (minimize each lower bound, maximize each upper).

    The optima are integral on this instance class; a non-integral optimum
    raises :class:`InternalError`.
    """
    tags = classify(inst)
    if not (tags.unit and tags.linear_only):
        raise UnsupportedInstanceError(
            "gfp_unit requires a unit-coefficient linear-only instance"
        )
    return _gfp_by_optimization(inst, require_integral=True)


def gfp_cont(inst: Instance) -> engine.FixpointResult:
    """Continuous greatest fixpoint (rational bounds) of a linear-only
    instance by per-bound optimization."""
    tags = classify(inst)
    if not tags.linear_only:
        raise UnsupportedInstanceError("gfp_cont requires a linear-only instance")
    return _gfp_by_optimization(inst, require_integral=False)
