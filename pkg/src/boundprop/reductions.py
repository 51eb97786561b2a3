"""Reductions and instance families.

* :func:`decide_monotone_tvpi`: on systems of two-variable inequalities
  whose two coefficients have opposite signs, propagation alone decides
  integer feasibility: the upper bounds of a nonempty fixpoint form a
  satisfying assignment.  The witness is re-checked before being returned.

* :func:`encode_max_atom`: rewrites atoms ``max(v1, v2) + c >= v3`` into a
  unit-coefficient linear + max instance with a nonempty greatest fixpoint
  exactly when the atom system is satisfiable over ``[0, sum of positive
  offsets]``.  Negative offsets are accepted with a warning; the
  equivalence is only claimed for nonnegative ones.

* :func:`gen_quadratic_family`: three variables, one squaring link and one
  split equality ``a1*x1 + a2*x2 = c``; a nonempty fixpoint exists exactly
  when ``a1*v**2 + a2*w = c`` has a nonnegative integer solution.  Deciding
  fixpoint existence for squaring constraints is therefore as hard as that
  Diophantine question.

* :func:`gen_slow`: the classic two-variable instance (``y - x >= 1``,
  ``x - y >= 1``) whose propagation walks the whole domain one step at a
  time before discovering emptiness, while the LP route answers instantly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import InstanceError, InternalError, ParseError, UnsupportedInstanceError
from .model import (
    Instance,
    LinConstraint,
    LinTerm,
    MaxConstraint,
    Relation,
    SquareConstraint,
    VarDecl,
    Value,
    classify,
    satisfies,
)
from . import engine


@dataclass(frozen=True)
class Witness:
    """A full integer assignment, aligned with the instance's variables."""

    values: tuple[int, ...]

    def as_dict(self, inst: Instance) -> dict[str, int]:
        return dict(zip(inst.names, self.values))


def decide_monotone_tvpi(inst: Instance) -> Optional[Witness]:
    """Decide integer feasibility by propagation alone.

    Requires a normalized instance classified ``monotone_tvpi``.  Returns a
    verified witness (the upper bounds of the greatest fixpoint) or None
    when infeasible.
    """
    tags = classify(inst)
    if not tags.monotone_tvpi:
        raise UnsupportedInstanceError(
            "decide_monotone_tvpi requires monotone_tvpi=True "
            f"(got linear_only={tags.linear_only}, tvpi={tags.tvpi}, "
            f"monotone_tvpi={tags.monotone_tvpi})"
        )
    result = engine.gfp_naive(inst, engine.Mode.INT)
    if result.outcome is engine.Outcome.EMPTY:
        return None
    witness = Witness(tuple(result.box.hi(i) for i in range(inst.n)))
    if not satisfies(inst, witness.values):
        raise InternalError(
            "fixpoint upper bounds failed to satisfy a monotone two-variable system"
        )
    return witness


# -- max-atom systems ----------------------------------------------------------


@dataclass(frozen=True)
class MaxAtom:
    """max(values[i], values[j]) + c >= values[h]."""

    i: int
    j: int
    c: int
    h: int


@dataclass(frozen=True)
class MaxAtomInstance:
    names: tuple[str, ...]
    atoms: tuple[MaxAtom, ...]

    def __post_init__(self):
        seen = set()
        for name in self.names:
            if name in seen:
                raise InstanceError(f"duplicate variable {name!r}")
            seen.add(name)
        n = len(self.names)
        for a in self.atoms:
            for idx in (a.i, a.j, a.h):
                if not 0 <= idx < n:
                    raise InstanceError(f"atom references index {idx}")


def parse_max_atom(text: str) -> MaxAtomInstance:
    """Parse ``atom NAME NAME INT NAME`` lines, one atom per line, meaning
    max(first, second) + INT >= fourth.  Variables are collected in order
    of first appearance; ``#`` starts a comment."""
    names: list[str] = []
    index: dict[str, int] = {}
    atoms: list[MaxAtom] = []

    def look(name):
        if name not in index:
            index[name] = len(names)
            names.append(name)
        return index[name]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 5 or parts[0] != "atom":
            raise ParseError("expected: atom NAME NAME INT NAME", lineno)
        _, v1, v2, c_tok, v3 = parts
        try:
            c = int(c_tok)
        except ValueError:
            raise ParseError(f"bad offset {c_tok!r}", lineno) from None
        atoms.append(MaxAtom(look(v1), look(v2), c, look(v3)))
    return MaxAtomInstance(tuple(names), tuple(atoms))


def encode_max_atom(ma: MaxAtomInstance) -> Instance:
    """Encode an atom system as a unit-linear + max instance.

    Per atom k a fresh variable ``y_k`` carries the maximum:
    ``y_k = max(v_i, v_j)`` and ``y_k - v_h >= -c_k``.  Every variable
    (original and fresh) ranges over ``[0, U]`` with U the sum of positive
    offsets; an assignment bounded by U exists whenever any does, so the
    encoded instance has a nonempty fixpoint exactly when the atom system
    is satisfiable (for nonnegative offsets).
    """
    if any(a.c < 0 for a in ma.atoms):
        warnings.warn(
            "negative max-atom offsets are outside the verified envelope of "
            "this encoding",
            stacklevel=2,
        )
    u = sum(max(a.c, 0) for a in ma.atoms)
    taken = set(ma.names)
    decls = [VarDecl(name, 0, u) for name in ma.names]
    lins = []
    maxes = []
    for k, a in enumerate(ma.atoms):
        fresh = f"y_{k + 1}"
        while fresh in taken:
            fresh = "_" + fresh
        taken.add(fresh)
        y = len(decls)
        decls.append(VarDecl(fresh, 0, u))
        maxes.append(MaxConstraint(y, a.i, a.j))
        lins.append(
            LinConstraint((LinTerm(-1, a.h), LinTerm(1, y)), Relation.GEQ, -a.c)
        )
    return Instance(tuple(decls), tuple(lins), (), tuple(maxes))


def max_atom_satisfied(ma: MaxAtomInstance, values: Sequence[Value]) -> bool:
    """Evaluate the atom system at a full assignment."""
    if len(values) != len(ma.names):
        raise InstanceError("assignment length mismatch")
    return all(
        max(values[a.i], values[a.j]) + a.c >= values[a.h] for a in ma.atoms
    )


# -- generated families ----------------------------------------------------------


def gen_quadratic_family(a1: int, a2: int, c: int) -> Instance:
    """x1, x2, x3 in [0, c] with a1*x1 + a2*x2 = c (split into the two
    inequalities) and x1 = x3 ^ 2."""
    if a1 <= 0 or a2 <= 0:
        raise InstanceError(f"coefficients must be positive, got a1={a1}, a2={a2}")
    if c < 0:
        raise InstanceError(f"right-hand side must be nonnegative, got c={c}")
    decls = tuple(VarDecl(name, 0, c) for name in ("x1", "x2", "x3"))
    lins = (
        LinConstraint((LinTerm(a1, 0), LinTerm(a2, 1)), Relation.GEQ, c),
        LinConstraint((LinTerm(-a1, 0), LinTerm(-a2, 1)), Relation.GEQ, -c),
    )
    return Instance(decls, lins, (SquareConstraint(0, 2),), ())


def quadratic_equation_solvable(a1: int, a2: int, c: int) -> bool:
    """Direct check: does a1*v**2 + a2*w = c admit nonnegative integers?"""
    v = 0
    while a1 * v * v <= c:
        rest = c - a1 * v * v
        if rest % a2 == 0:
            return True
        v += 1
    return False


def gen_slow(width: int) -> Instance:
    """x, y in [0, width] with y - x >= 1 and x - y >= 1 (unsatisfiable);
    propagation needs a number of tightenings linear in the width."""
    if width < 1:
        raise InstanceError(f"width must be at least 1, got {width}")
    decls = (VarDecl("x", 0, width), VarDecl("y", 0, width))
    lins = (
        LinConstraint((LinTerm(-1, 0), LinTerm(1, 1)), Relation.GEQ, 1),
        LinConstraint((LinTerm(1, 0), LinTerm(-1, 1)), Relation.GEQ, 1),
    )
    return Instance(decls, lins, (), ())
