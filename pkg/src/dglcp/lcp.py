"""LCP model, exact solution checks and the shared pivoting tableau.

The problem is: find ``w, z >= 0`` with ``w = q + M z`` and ``w.z = 0``.
Lemke's method adds an artificial variable ``z0`` with covering vector
``d``: ``w = q + d z0 + M z``.

Tableau convention: each row ``i`` reads ``x_B[i] + sum_j A[i][j] x_j = rhs[i]``
over *all* variables, ordered ``w_1..w_n, z_1..z_n, z0``.  Initially ``A`` is
``[I | -M | -d]`` and ``rhs = q``.  Because the ``w`` block starts as the
identity it always holds the current inverse basis, which doubles as the
lexicographic tie-break key of each row.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

from .rational import (
    SingularMatrixError,
    as_fraction,
    determinant,
    format_rational,
    matrix,
    parse_rational,
    solve,
    vector,
)


class Label(NamedTuple):
    kind: str  # "w", "z" or "z0"
    index: int  # 0-based pair index; -1 for z0

    def __str__(self):
        return "z0" if self.kind == "z0" else f"{self.kind}{self.index + 1}"

    @property
    def complement(self) -> "Label":
        if self.kind == "z0":
            raise ValueError("z0 has no complement")
        return Label("z" if self.kind == "w" else "w", self.index)

    @classmethod
    def parse(cls, text: str) -> "Label":
        if text == "z0":
            return Z0
        kind, idx = text[0], int(text[1:])
        if kind not in "wz" or idx < 1:
            raise ValueError(f"bad label {text!r}")
        return cls(kind, idx - 1)


def W(i: int) -> Label:
    return Label("w", i)


def Z(i: int) -> Label:
    return Label("z", i)


Z0 = Label("z0", -1)


@dataclass(frozen=True)
class LCPInstance:
    M: tuple[tuple[Fraction, ...], ...]
    q: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "M", matrix(self.M))
        object.__setattr__(self, "q", vector(self.q))
        n = len(self.q)
        if n < 1:
            raise ValueError("LCP dimension must be >= 1")
        if len(self.M) != n or any(len(row) != n for row in self.M):
            raise ValueError(f"M must be {n}x{n} to match q")

    @property
    def n(self) -> int:
        return len(self.q)


@dataclass(frozen=True)
class LCPSolution:
    w: tuple[Fraction, ...]
    z: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "w", vector(self.w))
        object.__setattr__(self, "z", vector(self.z))


def check_solution(lcp: LCPInstance, sol: LCPSolution) -> list[str]:
    """Exact feasibility and complementarity check; returns all violations."""
    n = lcp.n
    if len(sol.w) != n or len(sol.z) != n:
        raise ValueError(f"solution dimensions ({len(sol.w)}, {len(sol.z)}) do not match n={n}")
    out = []
    for i in range(n):
        lhs = lcp.q[i] + sum(lcp.M[i][j] * sol.z[j] for j in range(n))
        if sol.w[i] != lhs:
            out.append(f"row {i + 1}: w{i + 1} = {format_rational(sol.w[i])} "
                       f"but q + Mz = {format_rational(lhs)}")
        if sol.w[i] < 0:
            out.append(f"sign: w{i + 1} = {format_rational(sol.w[i])} < 0")
        if sol.z[i] < 0:
            out.append(f"sign: z{i + 1} = {format_rational(sol.z[i])} < 0")
        if sol.w[i] * sol.z[i] != 0:
            out.append(f"complementarity: w{i + 1}z{i + 1} = "
                       f"{format_rational(sol.w[i] * sol.z[i])} != 0")
    return out


class CapExceeded(ValueError):
    pass


def is_p_matrix(M: Sequence[Sequence], cap: int = 14) -> bool:
    """True iff every principal minor of ``M`` is strictly positive (exact)."""
    M = matrix(M)
    n = len(M)
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the principal-minor cap {cap}")
    for size in range(1, n + 1):
        for idx in itertools.combinations(range(n), size):
            if determinant([[M[i][j] for j in idx] for i in idx]) <= 0:
                return False
    return True


def _lex_positive_row(row: Sequence[Fraction]) -> bool:
    for x in row:
        if x:
            return x > 0
    return False


def complementary_solutions(lcp: LCPInstance, lexicographic: bool = False
                            ) -> list[tuple[frozenset[int], LCPSolution]]:
    """Enumerate all 2^n complementary bases and keep the feasible ones.

    A basis is identified by the set of indices whose ``z`` is basic.  Bases
    with a singular principal submatrix are skipped.  With ``lexicographic``
    a basis counts as feasible only if every row of ``B^-1 [q | I]`` is
    lexicographically positive (feasibility for the perturbed right-hand
    side ``q + (eps, eps^2, ...)``), which singles out one basis per
    P-matrix instance even when the solution is degenerate.
    """
    n = lcp.n
    found = []
    for mask in range(1 << n):
        s = [i for i in range(n) if mask >> i & 1]
        # basis matrix columns: e_i for basic w_i, -M[:, i] for basic z_i
        basis = [[(-lcp.M[r][i] if i in s else Fraction(int(r == i))) for i in range(n)]
                 for r in range(n)]
        rhs = [[lcp.q[r]] + [Fraction(int(r == c)) for c in range(n)] for r in range(n)]
        try:
            table = solve(basis, rhs)
        except SingularMatrixError:
            continue
        if lexicographic:
            if not all(_lex_positive_row(row) for row in table):
                continue
        elif any(row[0] < 0 for row in table):
            continue
        z = [table[i][0] if i in s else Fraction(0) for i in range(n)]
        w = [table[i][0] if i not in s else Fraction(0) for i in range(n)]
        found.append((frozenset(s), LCPSolution(w, z)))
    return found


class ZeroPivotError(ArithmeticError):
    pass


class InvariantError(AssertionError):
    """A solver or tableau invariant failed; always an implementation bug."""


class Tableau:
    """Dense exact tableau over ``w``, ``z`` and (optionally) ``z0``.

    Instances are treated as values: :func:`pivot` returns a new tableau.
    """

    __slots__ = ("n", "basis", "rows", "rhs", "has_z0")

    def __init__(self, n: int, basis: Sequence[Label], rows: Sequence[Sequence[Fraction]],
                 rhs: Sequence[Fraction], has_z0: bool):
        self.n = n
        self.basis = tuple(basis)
        self.rows = tuple(tuple(r) for r in rows)
        self.rhs = tuple(rhs)
        self.has_z0 = has_z0

    def col_index(self, label: Label) -> int:
        if label.kind == "w":
            return label.index
        if label.kind == "z":
            return self.n + label.index
        if not self.has_z0:
            raise KeyError("tableau has no z0 column")
        return 2 * self.n

    @property
    def labels(self) -> list[Label]:
        out = [W(i) for i in range(self.n)] + [Z(i) for i in range(self.n)]
        return out + [Z0] if self.has_z0 else out

    def column(self, label: Label) -> tuple[Fraction, ...]:
        j = self.col_index(label)
        return tuple(row[j] for row in self.rows)

    def dictionary_column(self, label: Label) -> tuple[Fraction, ...]:
        """Coefficients of ``label`` in the solved form ``x_B = rhs - A x``.

        Initially this reads ``w = q + d z0 + M z``.
        """
        return tuple(-x for x in self.column(label))

    def lex_key(self, row: int) -> tuple[Fraction, ...]:
        """Row of the current inverse basis (the ``w`` block)."""
        return self.rows[row][: self.n]

    def row_of(self, label: Label) -> int | None:
        try:
            return self.basis.index(label)
        except ValueError:
            return None

    def is_basic(self, label: Label) -> bool:
        return label in self.basis

    def values(self) -> dict[Label, Fraction]:
        """Current basic solution: basic labels take ``rhs``, the rest zero."""
        vals = {lab: Fraction(0) for lab in self.labels}
        vals.update(zip(self.basis, self.rhs))
        return vals

    def __eq__(self, other):
        return (isinstance(other, Tableau) and self.basis == other.basis
                and self.rows == other.rows and self.rhs == other.rhs)

    def __repr__(self):
        return f"Tableau(basis={[str(b) for b in self.basis]}, rhs={[str(x) for x in self.rhs]})"


def init_tableau(lcp: LCPInstance, covering: Sequence | None = None) -> Tableau:
    n = lcp.n
    d = None
    if covering is not None:
        d = vector(covering)
        if len(d) != n:
            raise ValueError(f"covering vector has length {len(d)}, expected {n}")
        if any(x <= 0 for x in d):
            raise ValueError("covering vector must be strictly positive")
    rows = []
    for i in range(n):
        row = [Fraction(int(i == j)) for j in range(n)] + [-x for x in lcp.M[i]]
        if d is not None:
            row.append(-d[i])
        rows.append(row)
    return Tableau(n, [W(i) for i in range(n)], rows, lcp.q, d is not None)


def pivot(t: Tableau, entering: Label, leaving_row: int) -> Tableau:
    """Exchange ``entering`` into the basis at ``leaving_row``."""
    j = t.col_index(entering)
    prow = t.rows[leaving_row]
    a = prow[j]
    if a == 0:
        raise ZeroPivotError(f"zero pivot element for {entering} in row {leaving_row + 1}")
    new_prow = tuple(x / a if x else x for x in prow)
    new_prhs = t.rhs[leaving_row] / a
    rows, rhs = [], []
    for i, (row, b) in enumerate(zip(t.rows, t.rhs)):
        if i == leaving_row:
            rows.append(new_prow)
            rhs.append(new_prhs)
            continue
        f = row[j]
        if f:
            rows.append(tuple(x - f * y if y else x for x, y in zip(row, new_prow)))
            rhs.append(b - f * new_prhs)
        else:
            rows.append(row)
            rhs.append(b)
    basis = list(t.basis)
    basis[leaving_row] = entering
    return Tableau(t.n, basis, rows, rhs, t.has_z0)


def lex_min_row(t: Tableau, entering: Label, rows: Iterable[int], scale: int = 1) -> int | None:
    """Row minimising ``(rhs, lex key) / (scale * coefficient)`` lexicographically.

    The caller chooses which rows compete; coefficients must be nonzero.
    Lex keys are rows of a nonsingular matrix, so the minimum is unique.
    """
    j = t.col_index(entering)
    cand = list(rows)
    if not cand:
        return None
    ratios = {i: t.rhs[i] / (scale * t.rows[i][j]) for i in cand}
    best = min(ratios.values())
    cand = [i for i in cand if ratios[i] == best]
    k = 0
    while len(cand) > 1:
        if k >= t.n:
            raise AssertionError(f"lexicographic tie between rows {cand}")
        vals = {i: t.rows[i][k] / (scale * t.rows[i][j]) for i in cand}
        best = min(vals.values())
        cand = [i for i in cand if vals[i] == best]
        k += 1
    return cand[0]


def lex_ratio_test(t: Tableau, entering: Label, eligible_rows: Iterable[int] | None = None
                   ) -> int | None:
    """Lexicographic minimum-ratio test; ``None`` means the column is unblocked."""
    j = t.col_index(entering)
    rows = range(t.n) if eligible_rows is None else eligible_rows
    return lex_min_row(t, entering, [i for i in rows if t.rows[i][j] > 0])


def lex_positive(t: Tableau, row: int) -> bool:
    """Whether ``(rhs, lex key)`` of ``row`` is lexicographically positive."""
    if t.rhs[row] != 0:
        return t.rhs[row] > 0
    for x in t.lex_key(row):
        if x:
            return x > 0
    return False


@dataclass
class PivotTrace:
    events: list[tuple[Label, Label]] = field(default_factory=list)
    major_cycles: int = 0
    outcome: str = "solved"  # solved | ray | budget-exceeded | failure

    @property
    def pivot_count(self) -> int:
        return len(self.events)

    def to_dict(self) -> dict:
        return {
            "outcome": self.outcome,
            "pivot_count": self.pivot_count,
            "major_cycles": self.major_cycles,
            "events": [[str(a), str(b)] for a, b in self.events],
        }


def pivot_budget(n: int) -> int:
    return 2 ** (n + 2)


# -- text format -------------------------------------------------------------

def lcp_to_dict(lcp: LCPInstance) -> dict:
    return {"M": [[format_rational(x) for x in row] for row in lcp.M],
            "q": [format_rational(x) for x in lcp.q]}


def lcp_from_dict(data: Mapping, strict: bool = False) -> LCPInstance:
    try:
        M = [[parse_rational(x, strict) for x in row] for row in data["M"]]
        q = [parse_rational(x, strict) for x in data["q"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed LCP object: {exc!r}") from None
    return LCPInstance(M, q)


def dumps_lcp(lcp: LCPInstance) -> str:
    return json.dumps(lcp_to_dict(lcp), indent=1) + "\n"


def loads_lcp(text: str, strict: bool = False) -> LCPInstance:
    return lcp_from_dict(json.loads(text), strict)


def solution_to_dict(sol: LCPSolution) -> dict:
    return {"w": [format_rational(x) for x in sol.w], "z": [format_rational(x) for x in sol.z]}


def solution_from_dict(data: Mapping) -> LCPSolution:
    return LCPSolution([parse_rational(x) for x in data["w"]], [parse_rational(x) for x in data["z"]])


def as_lcp(M, q) -> LCPInstance:
    return LCPInstance(tuple(tuple(as_fraction(x) for x in row) for row in M), vector(q))
