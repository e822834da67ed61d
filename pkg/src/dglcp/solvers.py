"""Lemke's method and the Cottle-Dantzig principal pivoting method.

Both run on the exact tableau from :mod:`dglcp.lcp` with the lexicographic
ratio test, so every run is deterministic and pivot counts are reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .lcp import (
    InvariantError,
    Label,
    LCPInstance,
    LCPSolution,
    PivotTrace,
    Tableau,
    W,
    Z,
    Z0,
    init_tableau,
    lex_min_row,
    lex_positive,
    lex_ratio_test,
    pivot,
    pivot_budget,
)
from .rational import vector


@dataclass(frozen=True)
class CoveringVector:
    """How Lemke's covering vector ``d`` is chosen.

    ``kind`` is ``"unit"``, ``"explicit"`` (``values``) or ``"random"``
    (entries uniform over the integers ``low..high`` drawn with ``seed``).
    """

    kind: str = "unit"
    values: tuple[Fraction, ...] | None = None
    seed: int | None = None
    low: int = 1
    high: int = 1000

    @classmethod
    def unit(cls) -> "CoveringVector":
        return cls("unit")

    @classmethod
    def explicit(cls, values: Sequence) -> "CoveringVector":
        return cls("explicit", vector(values))

    @classmethod
    def random(cls, seed: int, low: int = 1, high: int = 1000) -> "CoveringVector":
        return cls("random", seed=seed, low=low, high=high)

    @property
    def variant_id(self) -> str:
        if self.kind == "explicit":
            return "explicit"
        return self.kind


@dataclass(frozen=True)
class IndexOrdering:
    """Order in which Cottle-Dantzig picks distinguished indices (1-based)."""

    kind: str = "identity"
    permutation: tuple[int, ...] | None = None
    seed: int | None = None

    @classmethod
    def identity(cls) -> "IndexOrdering":
        return cls("identity")

    @classmethod
    def explicit(cls, permutation: Sequence[int]) -> "IndexOrdering":
        return cls("explicit", tuple(int(p) for p in permutation))

    @classmethod
    def random(cls, seed: int) -> "IndexOrdering":
        return cls("random", seed=seed)

    @property
    def variant_id(self) -> str:
        return self.kind


def realize_covering(c: CoveringVector, n: int) -> tuple[Fraction, ...]:
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if c.kind == "unit":
        return tuple(Fraction(1) for _ in range(n))
    if c.kind == "explicit":
        d = vector(c.values or ())
        if len(d) != n:
            raise ValueError(f"covering vector has length {len(d)}, expected {n}")
        if any(x <= 0 for x in d):
            raise ValueError("covering vector entries must be strictly positive")
        return d
    if c.kind == "random":
        if c.seed is None:
            raise ValueError("random covering vector needs a seed")
        if not (1 <= c.low <= c.high):
            raise ValueError("random covering range must satisfy 1 <= low <= high")
        rng = random.Random(c.seed)
        return tuple(Fraction(rng.randint(c.low, c.high)) for _ in range(n))
    raise ValueError(f"unknown covering kind {c.kind!r}")


def realize_ordering(o: IndexOrdering, n: int) -> tuple[int, ...]:
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if o.kind == "identity":
        return tuple(range(1, n + 1))
    if o.kind == "explicit":
        perm = tuple(o.permutation or ())
        if sorted(perm) != list(range(1, n + 1)):
            raise ValueError(f"{perm} is not a permutation of 1..{n}")
        return perm
    if o.kind == "random":
        if o.seed is None:
            raise ValueError("random ordering needs a seed")
        rng = random.Random(o.seed)
        perm = list(range(1, n + 1))
        for i in range(n - 1, 0, -1):  # Fisher-Yates
            j = rng.randint(0, i)
            perm[i], perm[j] = perm[j], perm[i]
        return tuple(perm)
    raise ValueError(f"unknown ordering kind {o.kind!r}")


@dataclass(frozen=True)
class Ray:
    """Unbounded edge ``point + t * direction`` (``t >= 0``) of the augmented system."""

    point: dict[Label, Fraction]
    direction: dict[Label, Fraction]


@dataclass
class SolveResult:
    solution: LCPSolution | None
    trace: PivotTrace = field(default_factory=PivotTrace)
    ray: Ray | None = None
    message: str = ""
    basis: tuple[Label, ...] | None = None  # terminal basis when solved

    @property
    def z_basic(self) -> frozenset[int] | None:
        """Indices whose ``z`` is basic at termination."""
        if self.basis is None:
            return None
        return frozenset(lab.index for lab in self.basis if lab.kind == "z")

    @property
    def outcome(self) -> str:
        return self.trace.outcome


def _solution(t: Tableau) -> LCPSolution:
    vals = t.values()
    return LCPSolution([vals[W(i)] for i in range(t.n)], [vals[Z(i)] for i in range(t.n)])


def _trivial(lcp: LCPInstance) -> SolveResult | None:
    if all(x >= 0 for x in lcp.q):
        return SolveResult(LCPSolution(lcp.q, [0] * lcp.n), basis=tuple(W(i) for i in range(lcp.n)))
    return None


def _check_lemke(t: Tableau) -> None:
    if Z0 not in t.basis:
        raise InvariantError("z0 left the basis without termination")
    if len(set(t.basis)) != t.n:
        raise InvariantError("duplicate basic labels")
    both_out = [i for i in range(t.n) if W(i) not in t.basis and Z(i) not in t.basis]
    if len(both_out) != 1:
        raise InvariantError(f"basis not almost complementary: pairs {both_out} nonbasic")
    if not all(lex_positive(t, i) for i in range(t.n)):
        raise InvariantError("lexicographic feasibility lost")


def lemke_solve(lcp: LCPInstance, covering: CoveringVector = CoveringVector(),
                check_invariants: bool = True, budget: int | None = None) -> SolveResult:
    """Lemke's complementary pivoting method with covering vector ``d``.

    The trace includes the initial pivot that brings ``z0`` in.  A secondary
    ray is returned as ``outcome == "ray"`` with the unbounded direction.
    """
    trivial = _trivial(lcp)
    if trivial is not None:
        return trivial
    n = lcp.n
    budget = pivot_budget(n) if budget is None else budget
    d = realize_covering(covering, n)
    t = init_tableau(lcp, d)
    trace = PivotTrace()

    # z0 enters at the level that makes the most negative q_i / d_i zero;
    # ties fall to the lexicographic order of (q_i, e_i) / d_i.
    row = lex_min_row(t, Z0, [i for i in range(n) if lcp.q[i] < 0], scale=-1)
    leaving = t.basis[row]
    t = pivot(t, Z0, row)
    trace.events.append((Z0, leaving))
    entering = leaving.complement
    while True:
        if check_invariants:
            _check_lemke(t)
        if trace.pivot_count >= budget:
            trace.outcome = "budget-exceeded"
            return SolveResult(None, trace, message=f"no termination within {budget} pivots")
        row = lex_ratio_test(t, entering)
        if row is None:
            trace.outcome = "ray"
            j = t.col_index(entering)
            direction = {lab: Fraction(0) for lab in t.labels}
            direction[entering] = Fraction(1)
            for i, lab in enumerate(t.basis):
                direction[lab] = -t.rows[i][j]
            return SolveResult(None, trace, Ray(t.values(), direction),
                               message=f"secondary ray on entering {entering}")
        leaving = t.basis[row]
        t = pivot(t, entering, row)
        trace.events.append((entering, leaving))
        if leaving == Z0:
            if check_invariants and any(t.basis.count(W(i)) + t.basis.count(Z(i)) != 1
                                        for i in range(n)):
                raise InvariantError("terminal Lemke basis is not complementary")
            return SolveResult(_solution(t), trace, basis=t.basis)
        entering = leaving.complement


def _pair_label(t: Tableau, k: int) -> Label:
    return W(k) if W(k) in t.basis else Z(k)


def _check_complementary(t: Tableau) -> None:
    for i in range(t.n):
        if (W(i) in t.basis) == (Z(i) in t.basis):
            raise InvariantError(f"basis not complementary at pair {i + 1}")


def cottle_dantzig_solve(lcp: LCPInstance, ordering: IndexOrdering = IndexOrdering(),
                         check_invariants: bool = True, budget: int | None = None) -> SolveResult:
    """Principal pivoting with one distinguished index per major cycle.

    Indices are visited in ``ordering``.  For each whose basic variable is
    (lexicographically) negative, its complement is driven up while every
    nonnegative basic variable is kept nonnegative.  A blocking variable other
    than the distinguished one is swapped for its complement, which becomes
    the next driving variable; the cycle ends when the distinguished variable
    itself reaches zero and leaves.
    """
    trivial = _trivial(lcp)
    if trivial is not None:
        return trivial
    n = lcp.n
    budget = pivot_budget(n) if budget is None else budget
    order = [k - 1 for k in realize_ordering(ordering, n)]
    t = init_tableau(lcp)
    trace = PivotTrace()
    for k in order:
        distinguished = _pair_label(t, k)
        if lex_positive(t, t.row_of(distinguished)):
            continue
        trace.major_cycles += 1
        feasible = {t.basis[i] for i in range(n) if lex_positive(t, i)}
        driving = distinguished.complement
        while True:
            r = t.row_of(distinguished)
            j = t.col_index(driving)
            cand = [i for i in range(n)
                    if i != r and t.rows[i][j] > 0 and lex_positive(t, i)]
            if t.rows[r][j] < 0:
                cand.append(r)
            row = lex_min_row(t, driving, cand)
            if row is None:
                trace.outcome = "failure"
                return SolveResult(None, trace, message=(
                    f"no blocking variable for driving {driving} in major cycle on "
                    f"pair {k + 1}; the matrix is probably not a P-matrix"))
            if trace.pivot_count >= budget:
                trace.outcome = "budget-exceeded"
                return SolveResult(None, trace, message=f"no termination within {budget} pivots")
            leaving = t.basis[row]
            t = pivot(t, driving, row)
            trace.events.append((driving, leaving))
            if check_invariants:
                kept = {t.basis[i] for i in range(n) if lex_positive(t, i)}
                lost = {lab for lab in feasible if lab in t.basis} - kept
                if lost:
                    raise InvariantError(f"nonnegative variables {sorted(map(str, lost))} went negative")
            if leaving == distinguished:
                break
            feasible.discard(leaving)
            feasible.add(driving)
            driving = leaving.complement
            if check_invariants:
                if distinguished not in t.basis or lex_positive(t, t.row_of(distinguished)):
                    raise InvariantError("distinguished variable reached zero without blocking")
                if sum(W(i) in t.basis and Z(i) in t.basis for i in range(n)) != 1:
                    raise InvariantError("more than one pair doubly basic inside a major cycle")
        if check_invariants:
            _check_complementary(t)
            now = {i for i in range(n) if lex_positive(t, t.row_of(_pair_label(t, i)))}
            before = {lab.index for lab in feasible}
            if not (before | {k}) <= now:
                raise InvariantError("set of nonnegative pairs shrank over a major cycle")
    return SolveResult(_solution(t), trace, basis=t.basis)
