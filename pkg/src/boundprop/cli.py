"""Command-line front end.

Subcommands::

    solve FILE      tighten bounds to the greatest fixpoint (or detect EMPTY)
    trace FILE      like solve, but print every bound change as it happens
    check FILE      verify a user-supplied box against the stability conditions
    oracle FILE     brute-force fixpoint and feasibility (small instances only)
    reduce ...      decision procedures built on the engine
    gen ...         emit generated instance families
    bench ...       CSV timing/counter comparison of the methods

Exit codes: 0 nonempty result, 1 empty result / violation, 2 bad input or
unsupported instance, 3 iteration limit hit.  Result boxes go to stdout,
run statistics to stderr.  ``-`` reads the instance from stdin.
"""

from __future__ import annotations

import argparse
import csv
import random
import re
import sys
import time
from fractions import Fraction
from typing import Optional

from . import lp, oracle, reductions
from . import engine
from .engine import FixpointResult, Limits, Mode, Outcome, Stats
from .errors import (
    GuardExceeded,
    InstanceError,
    InternalError,
    ParseError,
    UnsupportedInstanceError,
)
from .model import (
    Instance,
    LinConstraint,
    LinTerm,
    Relation,
    VarDecl,
    classify,
    normalize,
    parse_instance,
    serialize_instance,
)
from .propagators import EMPTY, Box


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load(path: str) -> Instance:
    return parse_instance(_read_text(path))


def _limits(args) -> Optional[Limits]:
    if args.max_sweeps is None and args.max_apps is None:
        return None
    return Limits(max_sweeps=args.max_sweeps, max_applications=args.max_apps)


def _print_stats(stats: Stats):
    print(
        f"sweeps={stats.sweeps} applications={stats.applications} "
        f"tightenings={stats.tightenings} propagators={stats.propagator_count} "
        f"bits={stats.bit_width}",
        file=sys.stderr,
    )


def _box_lines(inst: Instance, box) -> list[str]:
    return [
        f"{name} [{box.lo(i)},{box.hi(i)}]" for i, name in enumerate(inst.names)
    ]


def _emit_result(inst: Instance, result: FixpointResult) -> int:
    _print_stats(result.stats)
    if result.outcome is Outcome.EMPTY:
        print("EMPTY")
        return 1
    if result.outcome is Outcome.LIMIT:
        print("LIMIT")
        for line in _box_lines(inst, result.box):
            print(line)
        return 3
    for line in _box_lines(inst, result.box):
        print(line)
    return 0


def _empty_lp_result(norm: Instance) -> FixpointResult:
    stats = Stats(
        propagator_count=len(engine.make_propagators(norm, Mode.INT)),
        bit_width=engine.bit_width(norm),
    )
    return FixpointResult(Outcome.EMPTY, None, stats)


def _solve(norm: Instance, method: str, mode: Mode, limits, order) -> FixpointResult:
    tags = classify(norm)
    if method == "lp":
        if mode is Mode.CONT:
            return lp.gfp_cont(norm)
        if not (tags.linear_only and tags.unit):
            raise UnsupportedInstanceError(
                "--method lp in integer mode needs unit coefficients and no "
                "square/max constraints; use --method naive or --mode cont"
            )
        return lp.gfp_unit(norm)
    if method == "auto":
        if mode is Mode.CONT:
            if tags.linear_only:
                return lp.gfp_cont(norm)
            return engine.gfp_naive(norm, mode, order=order, limits=limits)
        if tags.linear_only and tags.unit:
            return lp.gfp_unit(norm)
        if tags.linear_only and not lp.cont_fixpoint_exists(norm):
            # no rational fixpoint, hence no integer one; skip the walk
            return _empty_lp_result(norm)
        return engine.gfp_naive(norm, mode, order=order, limits=limits)
    return engine.gfp_naive(norm, mode, order=order, limits=limits)


def _cmd_solve(args) -> int:
    inst = _load(args.file)
    norm = normalize(inst)
    mode = Mode(args.mode)
    result = _solve(norm, args.method, mode, _limits(args), args.order_seed)
    return _emit_result(norm, result)


def _cmd_trace(args) -> int:
    inst = _load(args.file)
    norm = normalize(inst)
    mode = Mode(args.mode)
    result, events = engine.run_traced(
        norm, mode, order=args.order_seed, limits=_limits(args)
    )
    for ev in events:
        print(engine.format_trace_event(norm, ev))
    return _emit_result(norm, result)


_BOX_ENTRY_RE = re.compile(
    r"([A-Za-z_][A-Za-z_0-9]*)\s*=\s*\[\s*(-?\d+(?:/\d+)?)\s*,\s*(-?\d+(?:/\d+)?)\s*\]"
)


def _parse_value(tok: str):
    return Fraction(tok) if "/" in tok else int(tok)


def _parse_box(inst: Instance, spec: str):
    """``x=[0,5],y=[2,3]`` with every variable present; ``EMPTY`` is allowed."""
    if spec.strip() == "EMPTY":
        return EMPTY
    found: dict[str, tuple] = {}
    rest = spec
    for m in _BOX_ENTRY_RE.finditer(spec):
        name = m.group(1)
        if name in found:
            raise InstanceError(f"variable {name!r} given twice in --box")
        found[name] = (_parse_value(m.group(2)), _parse_value(m.group(3)))
        rest = rest.replace(m.group(0), "", 1)
    if rest.strip(", \t"):
        raise InstanceError(f"could not parse --box near {rest.strip()!r}")
    bounds = []
    for name in inst.names:
        if name not in found:
            raise InstanceError(f"--box is missing variable {name!r}")
        bounds.append(found.pop(name))
    if found:
        unknown = ", ".join(sorted(found))
        raise InstanceError(f"--box names unknown variables: {unknown}")
    return Box(tuple(bounds))


def _cmd_check(args) -> int:
    inst = _load(args.file)
    box = _parse_box(inst, args.box)
    verdict = engine.verify_fixpoint(inst, box)
    if verdict.ok:
        print("FIXPOINT")
        return 0
    print(f"VIOLATION: {verdict.violation.message}")
    return 1


def _cmd_oracle(args) -> int:
    inst = _load(args.file)
    guard = oracle.SizeGuard(
        max_enumeration_points=args.max_points, max_box_count=args.max_boxes
    )
    result = oracle.gfp_brute(inst, guard)
    if result.outcome is Outcome.EMPTY:
        print("gfp: EMPTY")
    else:
        pairs = " ".join(
            f"{name}=[{result.box.lo(i)},{result.box.hi(i)}]"
            for i, name in enumerate(inst.names)
        )
        print(f"gfp: {pairs}")
    witness = oracle.enum_feasible(inst, guard)
    if witness is None:
        print("enum: NONE")
    else:
        print("enum: " + " ".join(f"{n}={v}" for n, v in zip(inst.names, witness.values)))
    return 0 if result.outcome is Outcome.NONEMPTY else 1


def _cmd_reduce_maxatom(args) -> int:
    ma = reductions.parse_max_atom(_read_text(args.file))
    sys.stdout.write(serialize_instance(reductions.encode_max_atom(ma)))
    return 0


def _cmd_reduce_tvpi(args) -> int:
    norm = normalize(_load(args.file))
    witness = reductions.decide_monotone_tvpi(norm)
    if witness is None:
        print("INFEASIBLE")
        return 1
    print("FEASIBLE " + " ".join(f"{n}={v}" for n, v in zip(norm.names, witness.values)))
    return 0


def _cmd_reduce_quad(args) -> int:
    inst = reductions.gen_quadratic_family(args.a1, args.a2, args.c)
    solvable = reductions.quadratic_equation_solvable(args.a1, args.a2, args.c)
    result = engine.gfp_naive(normalize(inst))
    nonempty = result.outcome is Outcome.NONEMPTY
    print(f"equation: {'SOLVABLE' if solvable else 'UNSOLVABLE'}")
    print(f"fixpoint: {result.outcome.value}")
    if solvable != nonempty:
        raise InternalError(
            "fixpoint existence disagrees with the equation check for "
            f"a1={args.a1} a2={args.a2} c={args.c}"
        )
    return 0 if nonempty else 1


def _cmd_gen_slow(args) -> int:
    sys.stdout.write(serialize_instance(reductions.gen_slow(args.width)))
    return 0


def _cmd_gen_quad(args) -> int:
    sys.stdout.write(
        serialize_instance(reductions.gen_quadratic_family(args.a1, args.a2, args.c))
    )
    return 0


def _tvpi_bench_instance(width: int, seed: int) -> Instance:
    """Random unit monotone two-variable system over [0, width]^3."""
    rng = random.Random(f"{seed}:{width}")
    decls = tuple(VarDecl(f"x{i + 1}", 0, width) for i in range(3))
    rows = []
    for _ in range(4):
        i, j = rng.sample(range(3), 2)
        if i > j:
            i, j = j, i
        sign = rng.choice((1, -1))
        rhs = rng.randint(-(width // 2) - 1, width // 2 + 1)
        rows.append(
            LinConstraint((LinTerm(sign, i), LinTerm(-sign, j)), Relation.GEQ, rhs)
        )
    return Instance(decls, tuple(rows), (), ())


def _bench_rows(args):
    widths = [int(tok) for tok in args.widths.split(",") if tok.strip()]
    methods = [tok.strip() for tok in args.methods.split(",") if tok.strip()]
    for name in methods:
        if name not in ("naive", "lp"):
            raise InstanceError(f"unknown bench method {name!r}")
    for width in widths:
        if args.family == "slow":
            inst = reductions.gen_slow(width)
        elif args.family == "quad":
            inst = reductions.gen_quadratic_family(1, 1, width)
        else:
            inst = _tvpi_bench_instance(width, args.seed)
        norm = normalize(inst)
        tags = classify(norm)
        label = f"{args.family}-{width}"
        for method in methods:
            if method == "lp" and not (tags.linear_only and tags.unit):
                continue
            start = time.perf_counter_ns()
            if method == "lp":
                result = lp.gfp_unit(norm)
            else:
                result = engine.gfp_naive(norm)
            us = (time.perf_counter_ns() - start) // 1000
            s = result.stats
            yield [
                label,
                norm.domain_size,
                method,
                s.sweeps,
                s.applications,
                s.tightenings,
                us,
                result.outcome.value,
            ]


def _cmd_bench(args) -> int:
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(
            ["label", "d", "method", "sweeps", "applications", "tightenings", "us", "outcome"]
        )
        for row in _bench_rows(args):
            writer.writerow(row)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="boundprop",
        description="Bound propagation for integer interval constraints "
        "(linear, squaring, max), with an exact LP alternative.",
    )
    sub = p.add_subparsers(dest="cmd", required=True)

    def add_run_flags(sp, with_method):
        sp.add_argument("file", help="instance file, or - for stdin")
        if with_method:
            sp.add_argument(
                "--method",
                choices=("auto", "naive", "lp"),
                default="auto",
                help="auto picks the LP route when coefficients are unit",
            )
        sp.add_argument("--mode", choices=("int", "cont"), default="int")
        sp.add_argument("--max-sweeps", type=int, default=None)
        sp.add_argument("--max-apps", type=int, default=None)
        sp.add_argument(
            "--order-seed",
            type=int,
            default=None,
            help="shuffle the propagator order (naive runs only)",
        )

    sp = sub.add_parser("solve", help="tighten to the greatest fixpoint")
    add_run_flags(sp, with_method=True)
    sp.set_defaults(func=_cmd_solve)

    sp = sub.add_parser("trace", help="solve while printing each bound change")
    add_run_flags(sp, with_method=False)
    sp.set_defaults(func=_cmd_trace)

    sp = sub.add_parser("check", help="verify a box against the stability conditions")
    sp.add_argument("file")
    sp.add_argument("--box", required=True, help='e.g. "x=[0,5],y=[2,3]" or EMPTY')
    sp.set_defaults(func=_cmd_check)

    sp = sub.add_parser("oracle", help="brute-force fixpoint and feasibility")
    sp.add_argument("file")
    sp.add_argument("--max-points", type=int, default=10**6)
    sp.add_argument("--max-boxes", type=int, default=10**6)
    sp.set_defaults(func=_cmd_oracle)

    sp = sub.add_parser("reduce", help="decision procedures on top of the engine")
    rsub = sp.add_subparsers(dest="what", required=True)
    rp = rsub.add_parser("maxatom", help="encode a max-atom system as an instance")
    rp.add_argument("file")
    rp.set_defaults(func=_cmd_reduce_maxatom)
    rp = rsub.add_parser(
        "tvpi-witness", help="decide a monotone two-variable system, print a witness"
    )
    rp.add_argument("file")
    rp.set_defaults(func=_cmd_reduce_tvpi)
    rp = rsub.add_parser(
        "quad", help="fixpoint existence vs. a1*v^2 + a2*w = c solvability"
    )
    rp.add_argument("a1", type=int)
    rp.add_argument("a2", type=int)
    rp.add_argument("c", type=int)
    rp.set_defaults(func=_cmd_reduce_quad)

    sp = sub.add_parser("gen", help="emit generated instance families")
    gsub = sp.add_subparsers(dest="what", required=True)
    gp = gsub.add_parser("slow", help="two crossing rows that tighten one step at a time")
    gp.add_argument("width", type=int)
    gp.set_defaults(func=_cmd_gen_slow)
    gp = gsub.add_parser("quad", help="squaring family tied to a Diophantine equation")
    gp.add_argument("a1", type=int)
    gp.add_argument("a2", type=int)
    gp.add_argument("c", type=int)
    gp.set_defaults(func=_cmd_gen_quad)

    sp = sub.add_parser("bench", help="CSV comparison of naive vs lp")
    sp.add_argument("--family", choices=("slow", "tvpi", "quad"), required=True)
    sp.add_argument("--widths", required=True, help="comma-separated widths")
    sp.add_argument("--methods", default="naive,lp")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None, help="CSV path (default stdout)")
    sp.set_defaults(func=_cmd_bench)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except (ParseError, InstanceError, UnsupportedInstanceError, GuardExceeded) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
