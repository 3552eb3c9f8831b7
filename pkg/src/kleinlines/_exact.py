"""Exact rational helpers shared by every module.

Scalars are :class:`fractions.Fraction`; projective objects are stored as
tuples of coprime Python ints so they hash by projective class.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

Scalar = Fraction


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and "n/d" strings to a Fraction (floats rejected)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact scalar")


def parse_scalar(text: str) -> Fraction:
    s = text.strip()
    if not s:
        raise ValueError("empty scalar")
    try:
        if "/" in s:
            num, den = s.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational 'n/d': {text!r}") from exc


def format_scalar(x) -> str:
    x = as_fraction(x)
    return f"{x.numerator}/{x.denominator}"


def vec(xs: Iterable) -> tuple[Fraction, ...]:
    return tuple(as_fraction(x) for x in xs)


def canonical_ints(coords: Sequence) -> tuple[int, ...]:
    """Projective normal form: cleared denominators, coprime, first nonzero > 0.

    Raises ValueError on the zero tuple.
    """
    fr = [as_fraction(c) for c in coords]
    if all(c == 0 for c in fr):
        raise ValueError("zero tuple has no projective class")
    den = 1
    for c in fr:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in fr]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    ints = [v // g for v in ints]
    first = next(v for v in ints if v != 0)
    if first < 0:
        ints = [-v for v in ints]
    return tuple(ints)


def sign_normalized(coords: Sequence) -> tuple:
    """Flip the sign so the first nonzero entry is positive; no rescaling."""
    for c in coords:
        if c != 0:
            return tuple(coords) if c > 0 else tuple(-x for x in coords)
    return tuple(coords)


def dot(u: Sequence, w: Sequence):
    return sum((a * b for a, b in zip(u, w)), start=0)


def cross(u: Sequence, w: Sequence) -> tuple:
    return (
        u[1] * w[2] - u[2] * w[1],
        u[2] * w[0] - u[0] * w[2],
        u[0] * w[1] - u[1] * w[0],
    )


def det2(m) -> Fraction:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def det(m) -> Fraction:
    """Determinant by fraction Gaussian elimination."""
    a = [[as_fraction(x) for x in row] for row in m]
    n = len(a)
    sign = 1
    out = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        out *= a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            if f:
                for k in range(col, n):
                    a[r][k] -= f * a[col][k]
    return out * sign


def rref(rows) -> tuple[list[list[Fraction]], list[int]]:
    a = [[as_fraction(x) for x in row] for row in rows]
    if not a:
        return a, []
    ncols = len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def nullspace(rows, ncols: int | None = None) -> list[tuple[Fraction, ...]]:
    """Basis of {x : rows @ x = 0} over the rationals."""
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            x[pc] = -red[i][f]
        basis.append(tuple(x))
    return basis


def null_vector_rank3(rows: Sequence[Sequence[int]]) -> tuple[int, ...] | None:
    """Null vector of a rank-3 integer matrix with four columns.

    Uses the 4D generalised cross product of the first independent row
    triple; returns None if no triple is independent (rank < 3).
    """
    n = len(rows)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                r1, r2, r3 = rows[i], rows[j], rows[k]
                cand = []
                for col in range(4):
                    keep = [c for c in range(4) if c != col]
                    m = [[r[c] for c in keep] for r in (r1, r2, r3)]
                    cand.append((-1) ** col * det3(m))
                if any(cand):
                    return tuple(cand)
    return None


def is_rational_square(x: Fraction) -> bool:
    if x < 0:
        return False
    return math.isqrt(x.numerator) ** 2 == x.numerator and math.isqrt(x.denominator) ** 2 == x.denominator


def rational_sqrt(x: Fraction) -> Fraction:
    if not is_rational_square(x):
        raise ValueError(f"{x} is not the square of a rational")
    return Fraction(math.isqrt(x.numerator), math.isqrt(x.denominator))
