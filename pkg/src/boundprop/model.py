"""Data model for interval constraint problems.

An :class:`Instance` couples integer interval variables with three constraint
kinds: linear relations (``>=``, ``<=``, ``=``) over integer coefficients,
squaring links ``x = y ^ 2``, and maximum links ``h = max(i, j)``.  This
module also owns the line-oriented text format, the canonical ``>=``-only
rewriting used by the propagation and LP layers, structural classification,
the slack-variable equality form, and direct evaluation of assignments.

Everything here is exact: coefficients and bounds are Python integers,
derived values stay ``int`` or ``fractions.Fraction``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import InstanceError, ParseError, UnsupportedInstanceError

Value = Union[int, Fraction]

#: Directive words of the file format; not usable as variable names.
RESERVED_WORDS = frozenset({"var", "lin", "sq", "max"})

_NAME_RE = re.compile(r"[A-Za-z_]\w*\Z")


class Relation(enum.Enum):
    GEQ = ">="
    LEQ = "<="
    EQ = "="

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class VarDecl:
    name: str
    lo: int
    hi: int


@dataclass(frozen=True)
class LinTerm:
    coeff: int
    var: int  # index into Instance.vars


@dataclass(frozen=True)
class LinConstraint:
    terms: tuple[LinTerm, ...]
    relation: Relation
    rhs: int


@dataclass(frozen=True)
class SquareConstraint:
    """xi = xj ** 2.  Both variables must start with nonnegative lower bounds."""

    xi: int
    xj: int


@dataclass(frozen=True)
class MaxConstraint:
    """xh = max(xi, xj)."""

    xh: int
    xi: int
    xj: int


@dataclass(frozen=True)
class Instance:
    vars: tuple[VarDecl, ...]
    lins: tuple[LinConstraint, ...] = ()
    squares: tuple[SquareConstraint, ...] = ()
    maxes: tuple[MaxConstraint, ...] = ()

    def __post_init__(self):
        seen = set()
        for decl in self.vars:
            if not _NAME_RE.match(decl.name) or decl.name in RESERVED_WORDS:
                raise InstanceError(f"bad variable name {decl.name!r}")
            if decl.name in seen:
                raise InstanceError(f"duplicate variable {decl.name!r}")
            seen.add(decl.name)
            if decl.lo > decl.hi:
                raise InstanceError(
                    f"variable {decl.name}: empty domain [{decl.lo}, {decl.hi}]"
                )
        n = len(self.vars)
        for lc in self.lins:
            used = set()
            for t in lc.terms:
                if not 0 <= t.var < n:
                    raise InstanceError(f"term references unknown variable index {t.var}")
                if t.var in used:
                    raise InstanceError(
                        f"variable {self.vars[t.var].name} appears twice in one constraint"
                    )
                used.add(t.var)
        for sc in self.squares:
            for idx in (sc.xi, sc.xj):
                if not 0 <= idx < n:
                    raise InstanceError(f"square constraint references index {idx}")
                if self.vars[idx].lo < 0:
                    raise InstanceError(
                        f"square constraint needs a nonnegative lower bound on "
                        f"{self.vars[idx].name} (has {self.vars[idx].lo})"
                    )
        for mc in self.maxes:
            for idx in (mc.xh, mc.xi, mc.xj):
                if not 0 <= idx < n:
                    raise InstanceError(f"max constraint references index {idx}")

    # -- small structural queries -------------------------------------------

    @property
    def n(self) -> int:
        return len(self.vars)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.vars)

    def var_index(self, name: str) -> int:
        for i, v in enumerate(self.vars):
            if v.name == name:
                return i
        raise InstanceError(f"unknown variable {name!r}")

    @property
    def domain_size(self) -> int:
        """Largest domain cardinality, max(hi - lo + 1) over variables."""
        return max((v.hi - v.lo + 1 for v in self.vars), default=0)


def build_instance(
    variables: Iterable[tuple[str, int, int]],
    lins: Iterable[tuple[Iterable[tuple[int, str]], Union[str, Relation], int]] = (),
    squares: Iterable[tuple[str, str]] = (),
    maxes: Iterable[tuple[str, str, str]] = (),
) -> Instance:
    """Build an instance from name-based specs.

    ``lins`` entries are ``(terms, relation, rhs)`` where each term is a
    ``(coeff, name)`` pair and the relation is one of ``">="``, ``"<="``,
    ``"="`` (or a :class:`Relation`).
    """
    decls = tuple(VarDecl(name, lo, hi) for name, lo, hi in variables)
    index = {d.name: i for i, d in enumerate(decls)}

    def look(name):
        if name not in index:
            raise InstanceError(f"unknown variable {name!r}")
        return index[name]

    lcs = []
    for terms, rel, rhs in lins:
        rel = rel if isinstance(rel, Relation) else Relation(rel)
        lcs.append(
            LinConstraint(tuple(LinTerm(c, look(v)) for c, v in terms), rel, rhs)
        )
    scs = tuple(SquareConstraint(look(a), look(b)) for a, b in squares)
    mcs = tuple(MaxConstraint(look(h), look(i), look(j)) for h, i, j in maxes)
    return Instance(decls, tuple(lcs), scs, mcs)


# -- text format --------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<int>\d+)|(?P<name>[A-Za-z_]\w*)|(?P<op>>=|<=|=|\*|\+|-|\^|\(|\)|,)"
)


def _tokenize(line: str, lineno: int) -> list[str]:
    out = []
    pos = 0
    while pos < len(line):
        m = _TOKEN_RE.match(line, pos)
        if m is None:
            raise ParseError(f"unexpected character {line[pos]!r}", lineno)
        pos = m.end()
        if m.lastgroup != "ws":
            out.append(m.group())
    return out


class _Cursor:
    def __init__(self, tokens, lineno):
        self.tokens = tokens
        self.pos = 0
        self.lineno = lineno

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _next(self, what: str) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError(f"unexpected end of line (expected {what})", self.lineno)
        self.pos += 1
        return tok

    def take(self, literal: Optional[str] = None) -> str:
        tok = self._next(repr(literal) if literal is not None else "more input")
        if literal is not None and tok != literal:
            raise ParseError(f"expected {literal!r}, found {tok!r}", self.lineno)
        return tok

    def name(self) -> str:
        tok = self._next("a name")
        if not _NAME_RE.match(tok):
            raise ParseError(f"expected a name, found {tok!r}", self.lineno)
        return tok

    def signed_int(self) -> int:
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take() == "-" else 1
        tok = self._next("an integer")
        if not tok.isdigit():
            raise ParseError(f"expected an integer, found {tok!r}", self.lineno)
        return sign * int(tok)

    def end(self):
        if self.peek() is not None:
            raise ParseError(f"trailing input {self.peek()!r}", self.lineno)


def parse_instance(text: str) -> Instance:
    """Parse the line-oriented instance format.

    Grammar (one directive per line, ``#`` starts a comment)::

        var NAME LO HI
        lin TERM ((+|-) TERM)* (>=|<=|=) INT     TERM = [INT*]NAME
        sq NAME = NAME ^ 2
        max NAME = max(NAME, NAME)

    An omitted coefficient means 1; a leading ``-`` on the first term is
    allowed.  Errors carry the offending line number.
    """
    decls: list[VarDecl] = []
    index: dict[str, int] = {}
    lins: list[LinConstraint] = []
    squares: list[SquareConstraint] = []
    maxes: list[MaxConstraint] = []

    def look(name, lineno):
        if name not in index:
            raise ParseError(f"undeclared variable {name!r}", lineno)
        return index[name]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        cur = _Cursor(_tokenize(line, lineno), lineno)
        head = cur.take()

        if head == "var":
            name = cur.name()
            if name in RESERVED_WORDS:
                raise ParseError(f"{name!r} is reserved and cannot name a variable", lineno)
            if name in index:
                raise ParseError(f"duplicate variable {name!r}", lineno)
            lo = cur.signed_int()
            hi = cur.signed_int()
            cur.end()
            if lo > hi:
                raise ParseError(f"empty domain [{lo}, {hi}] for {name}", lineno)
            index[name] = len(decls)
            decls.append(VarDecl(name, lo, hi))

        elif head == "lin":
            terms: list[LinTerm] = []
            used: set[int] = set()
            sign = 1
            if cur.peek() in ("+", "-"):
                sign = -1 if cur.take() == "-" else 1
            while True:
                tok = cur.peek()
                if tok is not None and tok.isdigit():
                    coeff = int(cur.take())
                    cur.take("*")
                    name = cur.name()
                else:
                    coeff = 1
                    name = cur.name()
                var = look(name, lineno)
                if var in used:
                    raise ParseError(f"variable {name!r} appears twice in one constraint", lineno)
                used.add(var)
                terms.append(LinTerm(sign * coeff, var))
                tok = cur.peek()
                if tok in ("+", "-"):
                    sign = -1 if cur.take() == "-" else 1
                    continue
                break
            rel_tok = cur._next("a relation (>=, <= or =)")
            try:
                rel = Relation(rel_tok)
            except ValueError:
                raise ParseError(f"expected >=, <= or =, found {rel_tok!r}", lineno) from None
            rhs = cur.signed_int()
            cur.end()
            lins.append(LinConstraint(tuple(terms), rel, rhs))

        elif head == "sq":
            a = look(cur.name(), lineno)
            cur.take("=")
            b = look(cur.name(), lineno)
            cur.take("^")
            if cur.peek() != "2":
                raise ParseError("only squaring (^ 2) is supported", lineno)
            cur.take()
            cur.end()
            for idx in (a, b):
                if decls[idx].lo < 0:
                    raise ParseError(
                        f"square constraint needs a nonnegative lower bound on "
                        f"{decls[idx].name} (has {decls[idx].lo})",
                        lineno,
                    )
            squares.append(SquareConstraint(a, b))

        elif head == "max":
            h = look(cur.name(), lineno)
            cur.take("=")
            cur.take("max")
            cur.take("(")
            i = look(cur.name(), lineno)
            cur.take(",")
            j = look(cur.name(), lineno)
            cur.take(")")
            cur.end()
            maxes.append(MaxConstraint(h, i, j))

        else:
            raise ParseError(f"unknown directive {head!r}", lineno)

    return Instance(tuple(decls), tuple(lins), tuple(squares), tuple(maxes))


def _format_terms(terms: Sequence[LinTerm], names: Sequence[str]) -> str:
    parts = []
    for pos, t in enumerate(terms):
        mag = abs(t.coeff)
        body = names[t.var] if mag == 1 else f"{mag}*{names[t.var]}"
        if pos == 0:
            parts.append(("-" if t.coeff < 0 else "") + body)
        else:
            parts.append(("- " if t.coeff < 0 else "+ ") + body)
    return " ".join(parts)


def format_lin(inst: Instance, lc: LinConstraint) -> str:
    """Human-readable rendering, e.g. ``x + 2*y >= 7``."""
    return f"{_format_terms(lc.terms, inst.names)} {lc.relation} {lc.rhs}"


def serialize_instance(inst: Instance) -> str:
    """Emit the text format.  parse -> serialize -> parse is the identity."""
    lines = [f"var {v.name} {v.lo} {v.hi}" for v in inst.vars]
    for lc in inst.lins:
        if not lc.terms:
            raise InstanceError("cannot serialize a constraint with no terms")
        lines.append(f"lin {format_lin(inst, lc)}")
    for sc in inst.squares:
        lines.append(f"sq {inst.names[sc.xi]} = {inst.names[sc.xj]} ^ 2")
    for mc in inst.maxes:
        lines.append(f"max {inst.names[mc.xh]} = max({inst.names[mc.xi]}, {inst.names[mc.xj]})")
    return "\n".join(lines) + "\n"


# -- canonical form and classification ----------------------------------------


def _canon_terms(terms: Iterable[LinTerm]) -> tuple[LinTerm, ...]:
    return tuple(sorted((t for t in terms if t.coeff != 0), key=lambda t: t.var))


def normalize(inst: Instance) -> Instance:
    """Rewrite every linear constraint into ``>=`` form.

    ``<=`` rows are negated termwise, ``=`` rows split into the two
    enclosing inequalities, zero-coefficient terms are dropped and the
    remaining terms sorted by variable index.  A row whose terms all vanish
    is dropped when trivially true (``0 >= rhs`` with rhs <= 0) and kept
    as an empty row otherwise, so the integer (and rational) solution set
    is unchanged either way.  Idempotent.
    """
    rows: list[LinConstraint] = []

    def push(terms, rhs):
        if not terms and 0 >= rhs:
            return
        rows.append(LinConstraint(terms, Relation.GEQ, rhs))

    for lc in inst.lins:
        terms = _canon_terms(lc.terms)
        neg = tuple(LinTerm(-t.coeff, t.var) for t in terms)
        if lc.relation is Relation.GEQ:
            push(terms, lc.rhs)
        elif lc.relation is Relation.LEQ:
            push(neg, -lc.rhs)
        else:
            push(terms, lc.rhs)
            push(neg, -lc.rhs)
    return replace(inst, lins=tuple(rows))


def is_normalized(inst: Instance) -> bool:
    for lc in inst.lins:
        if lc.relation is not Relation.GEQ:
            return False
        if any(t.coeff == 0 for t in lc.terms):
            return False
        if any(a.var >= b.var for a, b in zip(lc.terms, lc.terms[1:])):
            return False
    return True


def _require_normalized(inst: Instance, op: str):
    if not is_normalized(inst):
        raise InstanceError(f"{op} requires a normalized instance (call normalize first)")


@dataclass(frozen=True)
class ClassTags:
    """Structural flags steering algorithm choice.

    ``unit`` speaks about the linear part only (all coefficients in
    {-1, +1}); ``tvpi`` and ``monotone_tvpi`` are set only on linear-only
    instances.
    """

    linear_only: bool
    unit: bool
    tvpi: bool
    monotone_tvpi: bool
    has_square: bool
    has_max: bool


def classify(inst: Instance) -> ClassTags:
    _require_normalized(inst, "classify")
    linear_only = not inst.squares and not inst.maxes
    unit = all(abs(t.coeff) == 1 for lc in inst.lins for t in lc.terms)
    at_most_two = all(len(lc.terms) <= 2 for lc in inst.lins)
    # an empty row (identically false, kept by normalize) is decidable but
    # invisible to propagation, so it must not count as monotone
    opposite = all(
        len(lc.terms) >= 1
        and (len(lc.terms) == 1 or lc.terms[0].coeff * lc.terms[1].coeff < 0)
        for lc in inst.lins
    )
    tvpi = linear_only and at_most_two
    return ClassTags(
        linear_only=linear_only,
        unit=unit,
        tvpi=tvpi,
        monotone_tvpi=tvpi and opposite,
        has_square=bool(inst.squares),
        has_max=bool(inst.maxes),
    )


def to_equality_form(inst: Instance) -> Instance:
    """Turn each ``sum >= c`` row into ``sum - y = c`` with a fresh slack y.

    The slack ranges over ``[0, u]`` with ``u = max(0, 1 + M - c)`` where M
    is the largest value the left-hand side can take over the declared
    domains; this makes the solution sets of the two instances bijective
    (the slack value is determined by the original variables).
    """
    if inst.squares or inst.maxes:
        raise UnsupportedInstanceError("equality form is defined for linear-only instances")
    _require_normalized(inst, "to_equality_form")

    taken = set(inst.names) | RESERVED_WORDS
    decls = list(inst.vars)
    rows = []
    for k, lc in enumerate(inst.lins):
        name = f"s{k + 1}"
        while name in taken:
            name = "_" + name
        taken.add(name)
        m = sum(
            max(t.coeff * inst.vars[t.var].lo, t.coeff * inst.vars[t.var].hi)
            for t in lc.terms
        )
        u = max(0, 1 + m - lc.rhs)
        slack = len(decls)
        decls.append(VarDecl(name, 0, u))
        rows.append(
            LinConstraint(lc.terms + (LinTerm(-1, slack),), Relation.EQ, lc.rhs)
        )
    return Instance(tuple(decls), tuple(rows), (), ())


def satisfies(inst: Instance, values: Sequence[Value]) -> bool:
    """Check a full assignment against bounds and every constraint as written."""
    if len(values) != inst.n:
        raise InstanceError(f"assignment has {len(values)} values, instance has {inst.n}")
    for decl, v in zip(inst.vars, values):
        if not decl.lo <= v <= decl.hi:
            return False
    for lc in inst.lins:
        s = sum(t.coeff * values[t.var] for t in lc.terms)
        if lc.relation is Relation.GEQ:
            ok = s >= lc.rhs
        elif lc.relation is Relation.LEQ:
            ok = s <= lc.rhs
        else:
            ok = s == lc.rhs
        if not ok:
            return False
    for sc in inst.squares:
        if values[sc.xi] != values[sc.xj] ** 2:
            return False
    for mc in inst.maxes:
        if values[mc.xh] != max(values[mc.xi], values[mc.xj]):
            return False
    return True
