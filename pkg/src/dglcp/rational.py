"""Exact rational helpers and the canonical ``"p/q"`` text encoding."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Matrix = list[list[Fraction]]


def parse_rational(text, strict: bool = False) -> Fraction:
    """Parse ``"p/q"``, ``"-p/q"`` or an integer into a Fraction.

    With ``strict`` the string must already be in canonical reduced form
    (``q >= 1``, ``gcd(p, q) == 1``, integers written as ``"p/1"`` or ``"p"``).
    """
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"rationals must be strings or integers, got {text!r}")
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"not a rational: {text!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator: {text!r}")
    value = Fraction(p, q)
    if strict and (q < 0 or value.numerator != p or value.denominator != q):
        raise ValueError(f"rational not in reduced form: {text!r}")
    return value


def format_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def as_fraction(x) -> Fraction:
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, float):
        raise TypeError("floats are not accepted in exact paths")
    return Fraction(x)


def vector(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(as_fraction(v) for v in values)


def matrix(rows: Iterable[Iterable]) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(vector(r) for r in rows)


# Exact dense linear algebra.  Sizes here are desk-scale, so plain
# Gaussian elimination over Fractions is adequate.

def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    cols = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col) if x and y), Fraction(0))
             for col in cols] for row in a]


def matvec(a: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> list[Fraction]:
    return [sum((p * v for p, v in zip(row, x) if p and v), Fraction(0)) for row in a]


def determinant(a: Sequence[Sequence[Fraction]]) -> Fraction:
    m = [list(map(Fraction, row)) for row in a]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        piv = m[c][c]
        det *= piv
        for r in range(c + 1, n):
            f = m[r][c]
            if f:
                f /= piv
                row_r, row_c = m[r], m[c]
                for k in range(c + 1, n):
                    if row_c[k]:
                        row_r[k] -= f * row_c[k]
    return det


class SingularMatrixError(ArithmeticError):
    pass


def solve(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    """Solve ``a X = b`` exactly for a square nonsingular ``a``.

    ``b`` is a list of rows (an n x k matrix); the result has the same shape.
    """
    n = len(a)
    aug = [list(map(Fraction, a[i])) + list(map(Fraction, b[i])) for i in range(n)]
    width = len(aug[0]) if n else 0
    for c in range(n):
        p = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if p is None:
            raise SingularMatrixError("matrix is singular")
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        row_c = [x / piv for x in aug[c]]
        aug[c] = row_c
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                row_r = aug[r]
                for k in range(c, width):
                    if row_c[k]:
                        row_r[k] -= f * row_c[k]
    return [row[n:] for row in aug]


def solve_vector(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction]:
    return [row[0] for row in solve(a, [[x] for x in b])]


def inverse(a: Sequence[Sequence[Fraction]]) -> Matrix:
    return solve(a, identity(len(a)))
