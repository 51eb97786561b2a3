# A first walk through the engine: what one tightening looks like, how a run
# terminates, and how to check the result against the stability conditions.

from boundprop import (
    Outcome,
    format_trace_event,
    gfp_naive,
    normalize,
    parse_instance,
    run_traced,
    verify_fixpoint,
)

TEXT = """\
var x 0 5
var y 0 10
lin x + y = 7
lin x - 2*y >= -1
"""

inst = normalize(parse_instance(TEXT))

# Each propagator reads the current box and pushes one bound of one variable
# as far as the single row allows.  run_traced records every strict change.
result, events = run_traced(inst)
print("deductions, in order:")
for ev in events:
    print("  " + format_trace_event(inst, ev))

print("\nfinal box:")
for i, name in enumerate(inst.names):
    print(f"  {name} in [{result.box.lo(i)}, {result.box.hi(i)}]")
print(f"stats: {result.stats.sweeps} sweeps, {result.stats.applications} applications,"
      f" {result.stats.tightenings} tightenings")

# The result is the greatest fixpoint: stable, and no bound can be relaxed.
assert verify_fixpoint(inst, result.box).ok
relaxed = result.box.replace(0, result.box.lo(0) - 1, result.box.hi(0))
verdict = verify_fixpoint(inst, relaxed)
print(f"\nrelaxing x's lower bound by one: {verdict.violation.message}")

# A stable box is a cheap certificate, not a solution.  This system is stable
# as given, yet brute force shows only (1,1,0) satisfies it; and the crossing
# pair below is stable at EMPTY because no box survives both rows.
stable = normalize(parse_instance(
    "var x 0 1\nvar y 0 1\nvar z 0 1\nlin 2*x + 2*y + 3*z = 4\n"
))
print("\nalready-stable instance:", gfp_naive(stable).stats.tightenings, "tightenings")

crossing = normalize(parse_instance(
    "var x 0 8\nvar y 0 8\nlin -x + y >= 1\nlin x - y >= 1\n"
))
print("crossing pair outcome:", gfp_naive(crossing).outcome is Outcome.EMPTY and "EMPTY")
