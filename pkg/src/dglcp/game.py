"""Discounted two-player graph games with exact rational payoffs.

A play from vertex ``u`` following edges ``e0, e1, ...`` is worth
``r(e0) + beta * r(e1) + beta**2 * r(e2) + ...``; Max maximises it, Min
minimises it.  Values are therefore the unique solution of

    v(u) = max/min over edges (u, t, r) of  r + beta * v(t)

with no ``(1 - beta)`` normalisation of rewards.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .rational import as_fraction, format_rational, parse_rational, solve_vector


class Owner(str, enum.Enum):
    MAX = "max"
    MIN = "min"

    @property
    def sign(self) -> int:
        return 1 if self is Owner.MAX else -1


@dataclass(frozen=True)
class Edge:
    target: int
    reward: Fraction

    def __post_init__(self):
        object.__setattr__(self, "reward", as_fraction(self.reward))


@dataclass(frozen=True)
class DiscountedGame:
    """Finite game graph with a single global discount factor.

    Vertices are ``0..n-1``.  The position of an edge in ``edges[u]`` is its
    action identifier.  Construction does not validate; see
    :func:`validate_game`.
    """

    owners: tuple[Owner, ...]
    edges: tuple[tuple[Edge, ...], ...]
    discount: Fraction

    def __post_init__(self):
        object.__setattr__(self, "owners", tuple(Owner(o) for o in self.owners))
        object.__setattr__(self, "edges", tuple(
            tuple(e if isinstance(e, Edge) else Edge(*e) for e in out) for out in self.edges))
        object.__setattr__(self, "discount", as_fraction(self.discount))

    @property
    def n(self) -> int:
        return len(self.owners)

    def vertices(self, owner: Owner | None = None) -> list[int]:
        return [u for u in range(self.n) if owner is None or self.owners[u] is owner]

    def is_binary(self) -> bool:
        return all(len(out) == 2 for out in self.edges)

    def max_abs_reward(self) -> Fraction:
        return max((abs(e.reward) for out in self.edges for e in out), default=Fraction(0))


@dataclass(frozen=True)
class Strategy:
    """Positional strategy: one edge index for every vertex of ``player``."""

    player: Owner
    choice: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "player", Owner(self.player))
        object.__setattr__(self, "choice", dict(sorted(self.choice.items())))

    def __hash__(self):
        return hash((self.player, tuple(self.choice.items())))


ValueVector = tuple[Fraction, ...]


class InvalidGameError(ValueError):
    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class ProfileCapExceeded(RuntimeError):
    pass


def validate_game(g: DiscountedGame) -> list[str]:
    """Return every violated game invariant; an empty list means the game is valid."""
    violations = []
    if len(g.edges) != len(g.owners):
        violations.append(f"edge lists for {len(g.edges)} vertices but {len(g.owners)} owners")
    if g.n == 0:
        violations.append("game has no vertices")
    if not (0 <= g.discount < 1):
        violations.append(f"discount not < 1 or negative: {format_rational(g.discount)}")
    for u, out in enumerate(g.edges):
        if not out:
            violations.append(f"out-degree 0 at v{u}")
        for i, e in enumerate(out):
            if not (0 <= e.target < g.n):
                violations.append(f"edge {i} at v{u} targets unknown vertex {e.target}")
    return violations


def require_valid(g: DiscountedGame) -> None:
    violations = validate_game(g)
    if violations:
        raise InvalidGameError(violations)


def _bellman_candidates(g: DiscountedGame, v: Sequence[Fraction], u: int) -> list[Fraction]:
    return [e.reward + g.discount * v[e.target] for e in g.edges[u]]


def _best(g: DiscountedGame, u: int, candidates: Sequence[Fraction]) -> Fraction:
    return max(candidates) if g.owners[u] is Owner.MAX else min(candidates)


def bellman_operator(g: DiscountedGame, v: Sequence[Fraction]) -> ValueVector:
    return tuple(_best(g, u, _bellman_candidates(g, v, u)) for u in range(g.n))


def bellman_violations(g: DiscountedGame, v: Sequence[Fraction]) -> list[int]:
    """Vertices where ``v`` is not a fixed point of the Bellman operator."""
    return [u for u in range(g.n) if v[u] != _best(g, u, _bellman_candidates(g, v, u))]


def optimal_actions(g: DiscountedGame, v: Sequence[Fraction]) -> list[list[int]]:
    """Edge indices attaining the Bellman optimum at each vertex."""
    out = []
    for u in range(g.n):
        cand = _bellman_candidates(g, v, u)
        best = _best(g, u, cand)
        out.append([i for i, c in enumerate(cand) if c == best])
    return out


def _profile_choice(g, sigma_max: Strategy, sigma_min: Strategy) -> list[int]:
    choice = []
    for u in range(g.n):
        sigma = sigma_max if g.owners[u] is Owner.MAX else sigma_min
        if u not in sigma.choice:
            raise ValueError(f"strategy for {g.owners[u].value} does not cover v{u}")
        i = sigma.choice[u]
        if not (0 <= i < len(g.edges[u])):
            raise ValueError(f"edge index {i} out of range at v{u}")
        choice.append(i)
    return choice


def _evaluate_choice(g: DiscountedGame, choice: Sequence[int]) -> ValueVector:
    n, beta = g.n, g.discount
    a = [[Fraction(0)] * n for _ in range(n)]
    r = []
    for u, i in enumerate(choice):
        e = g.edges[u][i]
        a[u][u] += 1
        a[u][e.target] -= beta
        r.append(e.reward)
    return tuple(solve_vector(a, r))


def evaluate_profile(g: DiscountedGame, sigma_max: Strategy, sigma_min: Strategy) -> ValueVector:
    """Exact values of the play induced by two positional strategies.

    Solves ``(I - beta P) v = r`` by rational elimination.
    """
    require_valid(g)
    return _evaluate_choice(g, _profile_choice(g, sigma_max, sigma_min))


def strategies_from_choice(g: DiscountedGame, choice: Sequence[int]) -> tuple[Strategy, Strategy]:
    smax = Strategy(Owner.MAX, {u: choice[u] for u in g.vertices(Owner.MAX)})
    smin = Strategy(Owner.MIN, {u: choice[u] for u in g.vertices(Owner.MIN)})
    return smax, smin


def brute_force_equilibrium(g: DiscountedGame, cap: int = 2 ** 20
                            ) -> tuple[ValueVector, Strategy, Strategy]:
    """Find optimal values and strategies by enumerating every positional profile.

    Independent of the LCP machinery; meant as a checking oracle on small
    games.  Profiles are visited in lexicographic order of edge indices and
    the returned strategies pick the lowest-index optimal edge everywhere.
    """
    require_valid(g)
    count = 1
    for out in g.edges:
        count *= len(out)
    if count > cap:
        raise ProfileCapExceeded(f"{count} strategy profiles exceed the cap of {cap}")
    for choice in itertools.product(*(range(len(out)) for out in g.edges)):
        v = _evaluate_choice(g, choice)
        if not bellman_violations(g, v):
            best = [acts[0] for acts in optimal_actions(g, v)]
            return (v, *strategies_from_choice(g, best))
    raise AssertionError("no positional equilibrium found; discounted games always have one")


def value_iteration(g: DiscountedGame, iterations: int) -> tuple[ValueVector, Fraction]:
    """Apply the Bellman operator ``iterations`` times from zero.

    Returns the iterate and the certified bound
    ``beta**k * R / (1 - beta)`` on its distance (sup norm) to the game value,
    where ``R`` is the largest absolute reward.
    """
    require_valid(g)
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    v: ValueVector = tuple(Fraction(0) for _ in range(g.n))
    for _ in range(iterations):
        v = bellman_operator(g, v)
    bound = g.discount ** iterations * g.max_abs_reward() / (1 - g.discount)
    return v, bound


# -- text format -------------------------------------------------------------

def game_to_dict(g: DiscountedGame) -> dict:
    return {
        "discount": format_rational(g.discount),
        "vertices": [
            {"owner": g.owners[u].value,
             "edges": [{"to": e.target, "reward": format_rational(e.reward)} for e in g.edges[u]]}
            for u in range(g.n)
        ],
    }


def game_from_dict(data: Mapping, strict: bool = False) -> DiscountedGame:
    try:
        verts = data["vertices"]
        owners = [Owner(v["owner"]) for v in verts]
        edges = [[Edge(int(e["to"]), parse_rational(e["reward"], strict)) for e in v["edges"]]
                 for v in verts]
        discount = parse_rational(data["discount"], strict)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed game object: {exc!r}") from None
    return DiscountedGame(tuple(owners), tuple(map(tuple, edges)), discount)


def dumps_game(g: DiscountedGame) -> str:
    return json.dumps(game_to_dict(g), indent=1) + "\n"


def loads_game(text: str, strict: bool = False) -> DiscountedGame:
    return game_from_dict(json.loads(text), strict)


def make_game(owners: Iterable, edges: Iterable[Iterable], discount) -> DiscountedGame:
    """Convenience constructor taking ``(target, reward)`` pairs."""
    return DiscountedGame(tuple(owners), tuple(tuple(Edge(t, r) for t, r in out) for out in edges),
                          as_fraction(discount))
