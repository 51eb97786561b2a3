"""Shared corpus builders for the test suite.

Everything is seeded through random.Random so failures reproduce; the
acceptance suite fixes its own seeds and counts.
"""

import random

import pytest

from boundprop import (
    Box,
    Instance,
    LinConstraint,
    LinTerm,
    MaxAtom,
    MaxAtomInstance,
    MaxConstraint,
    Relation,
    SquareConstraint,
    VarDecl,
    parse_instance,
)

INTRO_TEXT = """
var x 0 5
var y 0 10
lin x + y = 7
lin x - 2*y >= -1
"""

EXAMPLE1_TEXT = """
var x 0 1
var y 0 1
var z 0 1
lin 2*x + 2*y + 3*z = 4
"""

EXAMPLE2_TEXT = """
var x 0 1
var y 0 1
lin x + y = 1
lin x - y = 0
"""


@pytest.fixture
def intro():
    return parse_instance(INTRO_TEXT)


@pytest.fixture
def example1():
    return parse_instance(EXAMPLE1_TEXT)


@pytest.fixture
def example2():
    return parse_instance(EXAMPLE2_TEXT)


def _lhs_range(decls, terms):
    lo = sum(min(t.coeff * decls[t.var].lo, t.coeff * decls[t.var].hi) for t in terms)
    hi = sum(max(t.coeff * decls[t.var].lo, t.coeff * decls[t.var].hi) for t in terms)
    return lo, hi


def rand_unit_instance(rng: random.Random) -> Instance:
    """Unit coefficients, n <= 5, m <= 8, bounds in [-20, 20]."""
    n = rng.randint(2, 5)
    decls = []
    for i in range(n):
        lo = rng.randint(-20, 19)
        decls.append(VarDecl(f"v{i}", lo, rng.randint(lo, 20)))
    rows = []
    for _ in range(rng.randint(1, 8)):
        vs = rng.sample(range(n), rng.randint(1, min(3, n)))
        terms = tuple(LinTerm(rng.choice((-1, 1)), v) for v in sorted(vs))
        lo, hi = _lhs_range(decls, terms)
        rel = rng.choice((Relation.GEQ, Relation.LEQ, Relation.EQ))
        rows.append(LinConstraint(terms, rel, rng.randint(lo - 1, hi + 1)))
    return Instance(tuple(decls), tuple(rows), (), ())


def rand_monotone_tvpi(rng: random.Random) -> Instance:
    """Two terms per row, opposite signs, n <= 4, m <= 6, bounds in [-10, 10]."""
    n = rng.randint(2, 4)
    decls = []
    for i in range(n):
        lo = rng.randint(-10, 9)
        decls.append(VarDecl(f"v{i}", lo, rng.randint(lo, 10)))
    rows = []
    for _ in range(rng.randint(1, 6)):
        i, j = sorted(rng.sample(range(n), 2))
        a = rng.randint(1, 3) * rng.choice((-1, 1))
        b = -rng.randint(1, 3) * (1 if a > 0 else -1)
        terms = (LinTerm(a, i), LinTerm(b, j))
        lo, hi = _lhs_range(decls, terms)
        rows.append(LinConstraint(terms, Relation.GEQ, rng.randint(lo - 1, hi + 1)))
    return Instance(tuple(decls), tuple(rows), (), ())


def rand_mixed_small(rng: random.Random) -> Instance:
    """Tiny nonnegative boxes so the brute-force oracle stays cheap; may
    include one squaring and one max link."""
    n = rng.randint(2, 3)
    decls = []
    for i in range(n):
        lo = rng.randint(0, 2)
        decls.append(VarDecl(f"v{i}", lo, lo + rng.randint(0, 3)))
    rows = []
    for _ in range(rng.randint(0, 3)):
        vs = rng.sample(range(n), rng.randint(1, 2))
        terms = tuple(
            LinTerm(rng.randint(1, 3) * rng.choice((-1, 1)), v) for v in sorted(vs)
        )
        lo, hi = _lhs_range(decls, terms)
        rel = rng.choice((Relation.GEQ, Relation.LEQ, Relation.EQ))
        rows.append(LinConstraint(terms, rel, rng.randint(lo - 2, hi + 2)))
    squares = ()
    if n >= 2 and rng.random() < 0.5:
        i, j = rng.sample(range(n), 2)
        squares = (SquareConstraint(i, j),)
    maxes = ()
    if rng.random() < 0.5:
        maxes = (MaxConstraint(rng.randrange(n), rng.randrange(n), rng.randrange(n)),)
    return Instance(tuple(decls), tuple(rows), squares, maxes)


def rand_max_atom(rng: random.Random) -> MaxAtomInstance:
    """<= 4 vars, <= 4 atoms, offsets in [0, 3]."""
    n = rng.randint(1, 4)
    names = tuple(f"w{i}" for i in range(n))
    atoms = tuple(
        MaxAtom(rng.randrange(n), rng.randrange(n), rng.randint(0, 3), rng.randrange(n))
        for _ in range(rng.randint(1, 4))
    )
    return MaxAtomInstance(names, atoms)


def rand_sub_box(rng: random.Random, inst: Instance) -> Box:
    """A random box nested inside the declared bounds."""
    bounds = []
    for v in inst.vars:
        a = rng.randint(v.lo, v.hi)
        bounds.append((a, rng.randint(a, v.hi)))
    return Box(tuple(bounds))
