# Two reductions that show how much the fixpoint question can carry.
#
# First: with a single squaring constraint, deciding whether the greatest
# fixpoint is nonempty answers whether a1*v^2 + a2*w = c has a nonnegative
# integer solution.  The instance forces x1 + x2 to sit on the line
# a1*x1 + a2*x2 = c while x1 must be a perfect square of x3.

import itertools

from boundprop import (
    Outcome,
    encode_max_atom,
    gen_quadratic_family,
    gfp_naive,
    max_atom_satisfied,
    normalize,
    parse_max_atom,
    quadratic_equation_solvable,
    serialize_instance,
)

print("fixpoint existence vs. equation solvability (a1=3, a2=5):")
for c in range(0, 20):
    run = gfp_naive(normalize(gen_quadratic_family(3, 5, c)))
    left = run.outcome is Outcome.NONEMPTY
    right = quadratic_equation_solvable(3, 5, c)
    assert left == right
    print(f"  c={c:>2}  {'solvable  ' if right else 'unsolvable'}  fixpoint "
          f"{'nonempty' if left else 'empty'}")

# Second: systems of max-atoms, max(v_i, v_j) + c >= v_h.  Each atom becomes
# one max constraint plus one unit row over a fresh variable, so satisfiability
# of the atom system becomes fixpoint existence for the encoded instance.

ATOMS = """\
atom a b 2 c
atom c c 0 b
atom b a 1 a
"""

ma = parse_max_atom(ATOMS)
encoded = encode_max_atom(ma)
print("\nencoded instance:")
print(serialize_instance(encoded), end="")

run = gfp_naive(normalize(encoded))
u = sum(max(atom.c, 0) for atom in ma.atoms)
direct = any(
    max_atom_satisfied(ma, p)
    for p in itertools.product(range(u + 1), repeat=len(ma.names))
)
print(f"\nfixpoint: {run.outcome.value}, direct enumeration over [0,{u}]^3:",
      "satisfiable" if direct else "unsatisfiable")
assert (run.outcome is Outcome.NONEMPTY) == direct
