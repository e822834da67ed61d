"""Reduction of binary discounted games to P-matrix LCPs, and lifting back.

Every vertex ``u`` has two edges, edge 0 to ``s(u)`` and edge 1 to ``t(u)``.
With ``sign(u) = +1`` for Max and ``-1`` for Min, the slack of each edge is

    z(u) = sign(u) * (v(u) - r0(u) - beta * v(s(u)))
    w(u) = sign(u) * (v(u) - r1(u) - beta * v(t(u)))

Optimality means both slacks are nonnegative and at least one edge is
tight.  Writing ``S = diag(sign)``, ``P0``/``P1`` for the successor matrices
and ``N = (I - beta P0)^-1``, the first equation gives ``v = N (S z + r0)``
and substituting into the second:

    w = S (I - beta P1) N S z + S ((I - beta P1) N r0 - r1)

so ``M = S (I - beta P1) N S`` and ``q = S ((I - beta P1) N r0 - r1)``.
``M`` is a P-matrix for every ``0 <= beta < 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .game import (
    DiscountedGame,
    InvalidGameError,
    Owner,
    Strategy,
    ValueVector,
    bellman_violations,
    optimal_actions,
    require_valid,
    strategies_from_choice,
)
from .lcp import LCPInstance, LCPSolution, check_solution
from .rational import Matrix, identity, inverse, matmul, matvec


@dataclass(frozen=True)
class PairLift:
    """How complementary pair ``i`` maps back to the game."""

    vertex: int
    sign: int
    z_zero_edge: int = 0  # z_i = 0  <=>  this edge is tight
    w_zero_edge: int = 1  # w_i = 0  <=>  this edge is tight


@dataclass(frozen=True)
class ReductionCertificate:
    game: DiscountedGame
    lcp: LCPInstance
    lift_map: tuple[PairLift, ...]
    # v = value_map @ (S z + r0); stored so lifting never recomputes the reduction
    value_map: tuple[tuple[Fraction, ...], ...]
    base_rewards: tuple[Fraction, ...]


class LiftError(RuntimeError):
    pass


def _successor_matrix(g: DiscountedGame, edge: int) -> Matrix:
    n = g.n
    p = [[Fraction(0)] * n for _ in range(n)]
    for u in range(n):
        p[u][g.edges[u][edge].target] += 1
    return p


def reduce_to_lcp(g: DiscountedGame) -> ReductionCertificate:
    require_valid(g)
    bad = [f"v{u} has out-degree {len(out)}, expected 2" for u, out in enumerate(g.edges)
           if len(out) != 2]
    if bad:
        raise InvalidGameError(bad)
    n, beta = g.n, g.discount
    sign = [g.owners[u].sign for u in range(n)]
    eye = identity(n)
    p0, p1 = _successor_matrix(g, 0), _successor_matrix(g, 1)
    a0 = [[eye[i][j] - beta * p0[i][j] for j in range(n)] for i in range(n)]
    a1 = [[eye[i][j] - beta * p1[i][j] for j in range(n)] for i in range(n)]
    value_map = inverse(a0)
    core = matmul(a1, value_map)
    r0 = [g.edges[u][0].reward for u in range(n)]
    r1 = [g.edges[u][1].reward for u in range(n)]
    M = [[sign[i] * core[i][j] * sign[j] for j in range(n)] for i in range(n)]
    q = [sign[i] * (x - r1[i]) for i, x in enumerate(matvec(core, r0))]
    return ReductionCertificate(
        game=g,
        lcp=LCPInstance(M, q),
        lift_map=tuple(PairLift(u, sign[u]) for u in range(n)),
        value_map=tuple(map(tuple, value_map)),
        base_rewards=tuple(r0),
    )


def lifted_values(cert: ReductionCertificate, sol: LCPSolution) -> ValueVector:
    rhs = [pl.sign * sol.z[i] + cert.base_rewards[pl.vertex] for i, pl in enumerate(cert.lift_map)]
    return tuple(matvec(cert.value_map, rhs))


def lift_solution(cert: ReductionCertificate, sol: LCPSolution
                  ) -> tuple[ValueVector, Strategy, Strategy]:
    """Game values and optimal positional strategies from an LCP solution.

    Where both edges are tight the lower edge index is chosen.
    """
    problems = check_solution(cert.lcp, sol)
    if problems:
        raise LiftError("not an LCP solution: " + "; ".join(problems))
    g = cert.game
    v = lifted_values(cert, sol)
    bad = bellman_violations(g, v)
    if bad:
        raise LiftError(f"lifted values violate Bellman optimality at vertices {bad}")
    choice = [0] * g.n
    for i, pl in enumerate(cert.lift_map):
        choice[pl.vertex] = pl.z_zero_edge if sol.z[i] == 0 else pl.w_zero_edge
    acts = optimal_actions(g, v)
    if any(choice[u] not in acts[u] for u in range(g.n)):
        raise LiftError("lifted strategy does not attain the lifted values")
    return (v, *strategies_from_choice(g, choice))


@dataclass(frozen=True)
class TieReport:
    tied: tuple[int, ...]

    def __bool__(self):
        return bool(self.tied)


def strategy_tie_audit(cert: ReductionCertificate, sol: LCPSolution) -> TieReport:
    """Vertices where both edges are optimal, i.e. ``w_i = z_i = 0``."""
    return TieReport(tuple(sorted(pl.vertex for i, pl in enumerate(cert.lift_map)
                                  if sol.w[i] == 0 and sol.z[i] == 0)))
