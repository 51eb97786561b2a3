"""Round-robin engine: golden traces, confluence, limits, verification."""

import random
from fractions import Fraction

import pytest

from boundprop import (
    EMPTY,
    Box,
    InstanceError,
    Kind,
    Limits,
    Mode,
    Outcome,
    UnsupportedInstanceError,
    encloses,
    format_trace_event,
    gen_slow,
    gfp_naive,
    make_propagators,
    normalize,
    parse_instance,
    run_traced,
    verify_fixpoint,
)
from boundprop.engine import bit_width

from conftest import rand_mixed_small, rand_unit_instance


def test_intro_golden_run(intro):
    norm = normalize(intro)
    result, events = run_traced(norm)
    assert result.outcome is Outcome.NONEMPTY
    assert result.box.bounds == ((4, 5), (2, 3))
    assert result.stats.sweeps == 3
    assert result.stats.applications == 18
    assert result.stats.tightenings == 5
    # the five deductions, in propagation order
    got = [(ev.prop.k, ev.var, ev.side, ev.old, ev.new) for ev in events]
    assert got == [
        (0, 1, "lo", 0, 2),
        (1, 1, "hi", 10, 7),
        (2, 0, "lo", 0, 3),
        (2, 1, "hi", 7, 3),
        (0, 0, "lo", 3, 4),
    ]
    assert [ev.seq for ev in events] == [1, 2, 3, 4, 5]


def test_trace_formatting(intro):
    norm = normalize(intro)
    _, events = run_traced(norm)
    assert format_trace_event(norm, events[0]) == "1 LIN_INT 0 y lo 0 -> 2"


def test_trace_replay_reaches_final_box(intro):
    norm = normalize(intro)
    result, events = run_traced(norm)
    box = Box.initial(norm)
    for ev in events:
        lo, hi = box.lo(ev.var), box.hi(ev.var)
        if ev.side == "lo":
            assert lo == ev.old
            lo = ev.new
        else:
            assert hi == ev.old
            hi = ev.new
        box = box.replace(ev.var, lo, hi)
    assert box.bounds == result.box.bounds


def test_example1_box_unchanged(example1):
    norm = normalize(example1)
    result = gfp_naive(norm)
    assert result.box.bounds == ((0, 1), (0, 1), (0, 1))
    assert result.stats.tightenings == 0


def test_example2_stable_but_infeasible(example2):
    norm = normalize(example2)
    result = gfp_naive(norm)
    assert result.outcome is Outcome.NONEMPTY
    assert result.box.bounds == ((0, 1), (0, 1))


def test_slow_family_tightening_counts():
    for width in (4, 8, 16):
        result = gfp_naive(normalize(gen_slow(width)))
        assert result.outcome is Outcome.EMPTY
        assert result.stats.tightenings == width + 1


def test_requires_normalized(intro):
    with pytest.raises(InstanceError):
        gfp_naive(intro)


def test_empty_short_circuit_stops_midsweep():
    result = gfp_naive(normalize(gen_slow(8)))
    # the crossing application ends the run; nothing after it is counted
    assert result.stats.applications == 9
    assert result.box is None


def test_limits_sweeps():
    norm = normalize(gen_slow(1000))
    result = gfp_naive(norm, limits=Limits(max_sweeps=3))
    assert result.outcome is Outcome.LIMIT
    assert result.stats.sweeps == 3
    # partial progress is reported
    assert result.box is not None
    assert result.box.bounds != ((0, 1000), (0, 1000))


def test_limits_applications():
    norm = normalize(gen_slow(1000))
    result = gfp_naive(norm, limits=Limits(max_applications=10))
    assert result.outcome is Outcome.LIMIT
    assert result.stats.applications == 10


def test_limits_validation():
    with pytest.raises(InstanceError):
        Limits(max_sweeps=0)


def test_limit_box_encloses_untaken_work():
    # anything cut by the partial box is cut by the full run too
    norm = normalize(gen_slow(50))
    partial = gfp_naive(norm, limits=Limits(max_sweeps=2))
    full = gfp_naive(norm)
    assert partial.outcome is Outcome.LIMIT and full.outcome is Outcome.EMPTY
    assert encloses(partial.box, EMPTY)


def test_confluence_over_orderings():
    rng = random.Random(31)
    for _ in range(30):
        inst = normalize(rand_mixed_small(rng))
        base = gfp_naive(inst)
        for seed in range(6):
            other = gfp_naive(inst, order=seed)
            assert other.outcome is base.outcome
            if base.box is not None:
                assert other.box.bounds == base.box.bounds


def test_same_seed_same_run():
    rng = random.Random(8)
    inst = normalize(rand_unit_instance(rng))
    a = run_traced(inst, order=4)
    b = run_traced(inst, order=4)
    assert a[0].stats == b[0].stats
    assert a[1] == b[1]


def test_application_bound_observed():
    rng = random.Random(12)
    for _ in range(40):
        inst = normalize(rand_mixed_small(rng))
        result = gfp_naive(inst)
        n = inst.n
        p = result.stats.propagator_count
        d = inst.domain_size
        assert result.stats.applications <= n * p * d


def test_make_propagators_counts(intro):
    norm = normalize(intro)
    props = make_propagators(norm, Mode.INT)
    assert len(props) == 6
    assert all(p.kind is Kind.LIN_INT for p in props)

    mixed = normalize(parse_instance(
        "var a 0 4\nvar b 0 2\nvar c 0 4\nsq a = b ^ 2\nmax c = max(a, b)\nlin a >= 0\n"
    ))
    props = make_propagators(mixed, Mode.INT)
    kinds = [p.kind for p in props]
    assert kinds == [Kind.LIN_INT, Kind.SQUARE, Kind.MAX]


def test_cont_mode_rejects_square_and_max():
    mixed = normalize(parse_instance("var a 0 4\nvar b 0 2\nsq a = b ^ 2\n"))
    with pytest.raises(UnsupportedInstanceError):
        gfp_naive(mixed, Mode.CONT)


def test_cont_mode_exact_on_intro(intro):
    norm = normalize(intro)
    result = gfp_naive(norm, Mode.CONT)
    assert result.outcome is Outcome.NONEMPTY
    assert result.box.bounds == ((4, 5), (2, 3))


def test_cont_mode_can_shrink_forever():
    # x <= y/2 and y <= x/2 halve the upper bounds each round; the integer
    # run bottoms out, the rational one needs the iteration limit
    text = "var x 0 8\nvar y 0 8\nlin x - 2*y >= 0\nlin y - 2*x >= 0\n"
    norm = normalize(parse_instance(text))

    int_run = gfp_naive(norm, Mode.INT)
    assert int_run.outcome is Outcome.NONEMPTY
    assert int_run.box.bounds == ((0, 0), (0, 0))

    cont_run = gfp_naive(norm, Mode.CONT, limits=Limits(max_sweeps=40))
    assert cont_run.outcome is Outcome.LIMIT
    assert 0 < cont_run.box.hi(0) < Fraction(1, 10**6)


def test_bit_width(intro):
    assert bit_width(normalize(intro)) == 4  # |-10..10| fits, 10 needs 4 bits
    wide = normalize(parse_instance("var x 0 1024\nlin x >= 3\n"))
    assert bit_width(wide) == 11


# -- verify_fixpoint ----------------------------------------------------------


def test_verify_accepts_engine_results():
    rng = random.Random(77)
    for _ in range(60):
        inst = normalize(rand_mixed_small(rng))
        result = gfp_naive(inst)
        box = result.box if result.box is not None else EMPTY
        assert verify_fixpoint(inst, box).ok


def test_verify_accepts_empty(intro):
    assert verify_fixpoint(intro, EMPTY).ok


def test_verify_rejects_relaxations(intro):
    norm = normalize(intro)
    gfp = gfp_naive(norm).box
    for i in range(norm.n):
        lo, hi = gfp.lo(i), gfp.hi(i)
        if lo > norm.vars[i].lo:
            assert not verify_fixpoint(norm, gfp.replace(i, lo - 1, hi)).ok
        if hi < norm.vars[i].hi:
            assert not verify_fixpoint(norm, gfp.replace(i, lo, hi + 1)).ok


def test_verify_reports_unsupported_bound(intro):
    norm = normalize(intro)
    verdict = verify_fixpoint(norm, Box(((3, 5), (2, 3))))
    assert not verdict.ok
    v = verdict.violation
    assert v.kind == "linear" and v.var == 0 and v.side == "lo"
    assert '"x + y >= 7" gives no support at the lo bound of x' == v.message


def test_verify_reports_out_of_domain(intro):
    verdict = verify_fixpoint(normalize(intro), Box(((-1, 5), (0, 10))))
    assert not verdict.ok
    assert verdict.violation.kind == "bounds"


def test_verify_square_and_max_conditions():
    sq = normalize(parse_instance("var a 0 16\nvar b 0 4\nsq a = b ^ 2\n"))
    assert verify_fixpoint(sq, Box(((0, 16), (0, 4)))).ok
    assert not verify_fixpoint(sq, Box(((5, 16), (3, 4)))).ok   # 3^2 != 5
    assert verify_fixpoint(sq, Box(((9, 16), (3, 4)))).ok

    mx = normalize(parse_instance(
        "var h 0 9\nvar i 0 9\nvar j 0 9\nmax h = max(i, j)\n"
    ))
    assert verify_fixpoint(mx, Box(((0, 9), (0, 9), (0, 9)))).ok
    # raising lo_h alone is still stable: the operator only ever raises it
    assert verify_fixpoint(mx, Box(((1, 9), (0, 9), (0, 9)))).ok
    assert not verify_fixpoint(mx, Box(((0, 9), (1, 9), (2, 9)))).ok  # lo_h below lo_i
    assert not verify_fixpoint(mx, Box(((0, 5), (0, 9), (0, 5)))).ok  # hi_i above hi_h


def test_verify_wrong_arity(intro):
    with pytest.raises(InstanceError):
        verify_fixpoint(normalize(intro), Box(((0, 1),)))
