"""Instance generators: the two exponential "tent" families and random games.

Both lower-bound families share one layout.  Vertex 0 is a sink with two
zero-reward self-loops.  Level ``k = 1..n`` adds a Max vertex ``x_k`` and a
Min vertex ``y_k`` (vertex ids ``2k-1`` and ``2k``) whose edges lead to level
``k-1``:

    x_k: edge 0 -> x_{k-1} reward -c_k,  edge 1 -> y_{k-1} reward 0
    y_k: edge 0 -> y_{k-1} reward 0,     edge 1 -> x_{k-1} reward -c_k

so that ``x_k - y_k = beta * |(x_{k-1} - y_{k-1}) - c_k / beta|``.  Each level
folds the difference of the level below around the midpoint of its range,
doubling the number of times it crosses any threshold.  A homotopy that
sweeps the bottom of the stack therefore makes the top levels switch
exponentially often.

* Lemke with the unit covering vector sweeps a uniform penalty on every
  edge 1.  Each fold halves the range, ``c_k ~ 2**-k``, and the discount must
  approach 1 (``1 - 2**-(n+2)``) so the penalty's own slope does not
  flatten the folds.  Measured: ``2**n + 1`` pivots.
* Cottle-Dantzig processing top levels first sweeps one vertex value at a
  time with no penalty, so the plain fold ``c_k ~ (beta/2)**k`` works with
  ``beta = 1/2``.  Measured: ``2**n`` pivots under the emitted ordering.

Rewards are scaled to integers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .game import DiscountedGame, Owner, make_game
from .rational import as_fraction
from .solvers import IndexOrdering

LEMKE_FAMILY = "lemke-lower-bound"
CD_FAMILY = "cd-lower-bound"
RANDOM_FAMILY = "random-binary"
FAMILIES = (LEMKE_FAMILY, CD_FAMILY, RANDOM_FAMILY)

# Sizes for which the measured growth was checked; larger n are valid games
# but the fold may need a discount even closer to 1.
LEMKE_SIZES = range(1, 11)
CD_SIZES = range(1, 13)


def _tent_stack(n: int, discount: Fraction, base_reward: int, level_rewards: list[int]
                ) -> DiscountedGame:
    owners = [Owner.MAX]
    edges = [[(0, 0), (0, 0)]]
    for k in range(1, n + 1):
        if k == 1:
            owners += [Owner.MAX, Owner.MIN]
            edges += [[(0, -base_reward), (0, 0)], [(0, base_reward), (0, 0)]]
            continue
        x, y = 2 * k - 3, 2 * k - 2
        c = level_rewards[k - 2]
        owners += [Owner.MAX, Owner.MIN]
        edges += [[(x, -c), (y, 0)], [(y, 0), (x, -c)]]
    return make_game(owners, edges, discount)


def _check_size(n, sizes, family):
    if not isinstance(n, int) or n not in sizes:
        raise ValueError(f"{family} is defined for n in {sizes.start}..{sizes.stop - 1}, got {n!r}")


def lemke_discount(n: int) -> Fraction:
    return 1 - Fraction(1, 2 ** (n + 2))


def gen_lemke_lower_bound(n: int) -> DiscountedGame:
    """Family on which Lemke with the unit covering vector takes ``2**n + 1`` pivots."""
    _check_size(n, LEMKE_SIZES, LEMKE_FAMILY)
    return _tent_stack(n, lemke_discount(n), 2 ** n, [2 ** (n + 1 - k) for k in range(2, n + 1)])


def gen_cd_lower_bound(n: int) -> tuple[DiscountedGame, IndexOrdering]:
    """Family plus the top-down ordering that makes Cottle-Dantzig take ``2**n`` pivots."""
    _check_size(n, CD_SIZES, CD_FAMILY)
    g = _tent_stack(n, Fraction(1, 2), 4 ** (n - 1), [4 ** (n - k) for k in range(2, n + 1)])
    return g, IndexOrdering.explicit(range(g.n, 0, -1))


@dataclass(frozen=True)
class RandomGameParams:
    discount: Fraction = Fraction(1, 2)
    reward_min: int = -10
    reward_max: int = 10

    def __post_init__(self):
        object.__setattr__(self, "discount", as_fraction(self.discount))
        if not (0 <= self.discount < 1):
            raise ValueError("discount must lie in [0, 1)")
        if self.reward_min > self.reward_max:
            raise ValueError("empty reward range")


def gen_random_binary_game(n: int, seed: int, params: RandomGameParams = RandomGameParams()
                           ) -> DiscountedGame:
    """Owners by fair coin; two edges per vertex with uniform targets and integer rewards."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    rng = random.Random(seed)
    owners, edges = [], []
    for _ in range(n):
        owners.append(Owner.MAX if rng.random() < 0.5 else Owner.MIN)
        edges.append([(rng.randrange(n), rng.randint(params.reward_min, params.reward_max))
                      for _ in range(2)])
    return make_game(owners, edges, params.discount)


@dataclass(frozen=True)
class FamilySpec:
    family: str
    size: int
    seed: int | None = None
    params: RandomGameParams = field(default_factory=RandomGameParams)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if (self.seed is not None) != (self.family == RANDOM_FAMILY):
            raise ValueError("a seed is required for the random family and only for it")


def generate(spec: FamilySpec) -> tuple[DiscountedGame, IndexOrdering | None]:
    """Instance for ``spec`` plus the ordering the family prescribes, if any."""
    if spec.family == LEMKE_FAMILY:
        return gen_lemke_lower_bound(spec.size), None
    if spec.family == CD_FAMILY:
        return gen_cd_lower_bound(spec.size)
    return gen_random_binary_game(spec.size, spec.seed, spec.params), None
