"""Bound propagation for integer interval constraints.

Instances mix linear inequalities, squaring links ``xi = xj^2`` and maximum
links ``xh = max(xi, xj)`` over integer boxes.  The package offers:

* the round-robin narrowing loop (:func:`gfp_naive`, :func:`run_traced`),
* an exact-rational LP route that reads off the greatest fixpoint directly
  on unit-coefficient linear instances (:func:`gfp_unit`, :func:`gfp_cont`),
* brute-force oracles for cross-checking (:mod:`boundprop.oracle`),
* reductions: two-variable monotone systems, max-atom encodings and the
  squaring family tied to a Diophantine equation
  (:mod:`boundprop.reductions`),
* a text format (:func:`parse_instance`) and a CLI (``boundprop``).
"""

from .errors import (
    BoundpropError,
    GuardExceeded,
    InstanceError,
    InternalError,
    ParseError,
    UnsupportedInstanceError,
)
from .model import (
    ClassTags,
    Instance,
    LinConstraint,
    LinTerm,
    MaxConstraint,
    Relation,
    SquareConstraint,
    VarDecl,
    build_instance,
    classify,
    format_lin,
    is_normalized,
    normalize,
    parse_instance,
    satisfies,
    serialize_instance,
    to_equality_form,
)
from .propagators import (
    EMPTY,
    Box,
    Kind,
    PropagatorRef,
    apply_prop,
    check_bc_inequality,
    encloses,
)
from .engine import (
    FixpointResult,
    Limits,
    Mode,
    Outcome,
    Stats,
    TraceEvent,
    VerifyResult,
    Violation,
    format_trace_event,
    gfp_naive,
    make_propagators,
    run_traced,
    verify_fixpoint,
)
from .lp import (
    Direction,
    LpOutcome,
    LpProblem,
    LpStatus,
    build_eq6_system,
    cont_fixpoint_exists,
    gfp_cont,
    gfp_unit,
    lp_solve,
)
from .oracle import SizeGuard, enum_feasible, gfp_brute
from .reductions import (
    MaxAtom,
    MaxAtomInstance,
    Witness,
    decide_monotone_tvpi,
    encode_max_atom,
    gen_quadratic_family,
    gen_slow,
    max_atom_satisfied,
    parse_max_atom,
    quadratic_equation_solvable,
)

__version__ = "0.1.0"

__all__ = [
    "BoundpropError",
    "GuardExceeded",
    "InstanceError",
    "InternalError",
    "ParseError",
    "UnsupportedInstanceError",
    "ClassTags",
    "Instance",
    "LinConstraint",
    "LinTerm",
    "MaxConstraint",
    "Relation",
    "SquareConstraint",
    "VarDecl",
    "build_instance",
    "classify",
    "format_lin",
    "is_normalized",
    "normalize",
    "parse_instance",
    "satisfies",
    "serialize_instance",
    "to_equality_form",
    "EMPTY",
    "Box",
    "Kind",
    "PropagatorRef",
    "apply_prop",
    "check_bc_inequality",
    "encloses",
    "FixpointResult",
    "Limits",
    "Mode",
    "Outcome",
    "Stats",
    "TraceEvent",
    "VerifyResult",
    "Violation",
    "format_trace_event",
    "gfp_naive",
    "make_propagators",
    "run_traced",
    "verify_fixpoint",
    "Direction",
    "LpOutcome",
    "LpProblem",
    "LpStatus",
    "build_eq6_system",
    "cont_fixpoint_exists",
    "gfp_cont",
    "gfp_unit",
    "lp_solve",
    "SizeGuard",
    "enum_feasible",
    "gfp_brute",
    "MaxAtom",
    "MaxAtomInstance",
    "Witness",
    "decide_monotone_tvpi",
    "encode_max_atom",
    "gen_quadratic_family",
    "gen_slow",
    "max_atom_satisfied",
    "parse_max_atom",
    "quadratic_equation_solvable",
    "__version__",
]
