"""
Solving a small discounted game through its LCP
================================================

A three-vertex game is reduced to a 3x3 linear complementarity problem,
solved by both pivoting methods, and lifted back to values and strategies.
Every number below is an exact fraction.
"""

from fractions import Fraction

from dglcp import (
    IndexOrdering,
    brute_force_equilibrium,
    cottle_dantzig_solve,
    lemke_solve,
    lift_solution,
    make_game,
    reduce_to_lcp,
    strategy_tie_audit,
    value_iteration,
)

# Max owns vertices 0 and 2, Min owns vertex 1.  Each vertex has two edges,
# written as (target, reward).
game = make_game(
    ["max", "min", "max"],
    [[(1, 0), (2, 5)],
     [(0, -3), (2, 1)],
     [(0, 2), (1, -1)]],
    Fraction(1, 2),
)

# The reduction yields one complementary pair per vertex.
cert = reduce_to_lcp(game)
print("M =", [[str(x) for x in row] for row in cert.lcp.M])
print("q =", [str(x) for x in cert.lcp.q])

# Lemke with the all-ones covering vector
lemke = lemke_solve(cert.lcp)
print("\nLemke pivots:", " ".join(f"{a}<->{b}" for a, b in lemke.trace.events))
values, smax, smin = lift_solution(cert, lemke.solution)
print("values:", [str(v) for v in values])
print("Max plays", smax.choice, " Min plays", smin.choice)

# Cottle-Dantzig, processing the indices in reverse order
cd = cottle_dantzig_solve(cert.lcp, IndexOrdering.explicit([3, 2, 1]))
print("\nCottle-Dantzig:", cd.trace.pivot_count, "pivots in", cd.trace.major_cycles, "major cycles")
assert lift_solution(cert, cd.solution)[0] == values

# Cross-checks that do not touch the LCP at all
oracle = brute_force_equilibrium(game)[0]
approx, bound = value_iteration(game, 30)
print("\nbrute force agrees:", oracle == values)
print("value iteration after 30 steps is within", bound, "of", [float(v) for v in approx])
print("vertices with two optimal edges:", strategy_tie_audit(cert, lemke.solution).tied)
