"""Exact projective primitives in FP^3 and the Klein quadric in FP^5.

Plücker coordinates are ordered (P01:P02:P03:P23:P31:P12) = (omega : v), with
omega the direction and v = q x omega the moment about the origin.  All
projective objects are stored in canonical integer form so that equal
projective classes compare and hash equal.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from ._exact import (
    as_fraction,
    canonical_ints,
    cross,
    dot,
    format_scalar,
    null_vector_rank3,
    parse_scalar,
    rank,
)
from .errors import CoincidentPoints, EqualLines, NotIncident, RankDeficient, ZeroTuple

PLUCKER_INDEX = ((0, 1), (0, 2), (0, 3), (2, 3), (3, 1), (1, 2))


def _canonical(coords, n: int) -> tuple[int, ...]:
    if len(coords) != n:
        raise ValueError(f"expected {n} homogeneous coordinates, got {len(coords)}")
    try:
        return canonical_ints(coords)
    except ValueError as exc:
        raise ZeroTuple(str(exc)) from None


@dataclass(frozen=True)
class ProjPoint3:
    """Point (q0:q1:q2:q3); affine iff q0 != 0."""

    h: tuple[int, int, int, int]

    def __post_init__(self):
        object.__setattr__(self, "h", _canonical(self.h, 4))

    @classmethod
    def affine(cls, x) -> "ProjPoint3":
        return cls((1, *x))

    @property
    def is_ideal(self) -> bool:
        return self.h[0] == 0

    def affine_coords(self) -> tuple[Fraction, Fraction, Fraction]:
        if self.is_ideal:
            raise ValueError("ideal point has no affine coordinates")
        q0 = self.h[0]
        return tuple(Fraction(c, q0) for c in self.h[1:])

    def to_json(self) -> list[str]:
        return [format_scalar(c) for c in self.h]

    @classmethod
    def from_json(cls, data) -> "ProjPoint3":
        return cls(tuple(parse_scalar(s) for s in data))


@dataclass(frozen=True)
class ProjPlane3:
    """Plane (pi0:pi1:pi2:pi3) with incidence pi . x = 0.

    The affine plane u . q = -1 is (1:u1:u2:u3); the plane at infinity is (1:0:0:0).
    """

    d: tuple[int, int, int, int]

    def __post_init__(self):
        object.__setattr__(self, "d", _canonical(self.d, 4))

    @classmethod
    def from_u(cls, u) -> "ProjPlane3":
        return cls((1, *u))

    @property
    def u(self) -> tuple[Fraction, Fraction, Fraction] | None:
        """The vector u of u . q = -1, or None for planes through the origin."""
        if self.d[0] == 0:
            return None
        return tuple(Fraction(c, self.d[0]) for c in self.d[1:])

    def contains(self, point: ProjPoint3) -> bool:
        return dot(self.d, point.h) == 0

    def to_json(self) -> list[str]:
        return [format_scalar(c) for c in self.d]

    @classmethod
    def from_json(cls, data) -> "ProjPlane3":
        return cls(tuple(parse_scalar(s) for s in data))


def klein_form(coords: Sequence) -> Fraction:
    """omega . v for a raw six-tuple (generic over the number type)."""
    return coords[0] * coords[3] + coords[1] * coords[4] + coords[2] * coords[5]


def klein_membership(coords: Sequence) -> bool:
    """True iff P01 P23 + P02 P31 + P03 P12 == 0 exactly."""
    if len(coords) != 6:
        raise ValueError("Plücker tuples have six coordinates")
    fr = [as_fraction(c) for c in coords]
    if all(c == 0 for c in fr):
        raise ZeroTuple("zero tuple is not a point of FP^5")
    return klein_form(fr) == 0


@dataclass(frozen=True)
class PlueckerLine:
    """A line of FP^3 as a canonical point of the Klein quadric."""

    coords: tuple[int, int, int, int, int, int]

    def __post_init__(self):
        c = _canonical(self.coords, 6)
        if klein_form(c) != 0:
            raise ValueError(f"{c} is not on the Klein quadric")
        object.__setattr__(self, "coords", c)

    @property
    def omega(self) -> tuple[int, int, int]:
        return self.coords[:3]

    @property
    def v(self) -> tuple[int, int, int]:
        return self.coords[3:]

    @property
    def is_ideal(self) -> bool:
        """Line in the plane at infinity (omega = 0)."""
        return not any(self.omega)

    def point_rows(self) -> list[tuple[int, int, int, int]]:
        """Rows R with R x = 0 exactly for the points x of the line."""
        w1, w2, w3 = self.omega
        v1, v2, v3 = self.v
        return [
            (0, v1, v2, v3),
            (-v1, 0, w3, -w2),
            (-v2, -w3, 0, w1),
            (-v3, w2, -w1, 0),
        ]

    def plane_rows(self) -> list[tuple[int, int, int, int]]:
        """Rows R with R pi = 0 exactly for the planes pi containing the line."""
        w1, w2, w3 = self.omega
        v1, v2, v3 = self.v
        return [
            (0, w1, w2, w3),
            (-w1, 0, v3, -v2),
            (-w2, -v3, 0, v1),
            (-w3, v2, -v1, 0),
        ]

    def contains_point(self, point: ProjPoint3) -> bool:
        return all(dot(r, point.h) == 0 for r in self.point_rows())

    def lies_in(self, plane: ProjPlane3) -> bool:
        return all(dot(r, plane.d) == 0 for r in self.plane_rows())

    def affine_points(self, ts: Sequence = (0, 1)) -> list[tuple[Fraction, ...]]:
        """Affine points q0 + t omega, where q0 is the foot of the perpendicular from the origin."""
        if self.is_ideal:
            raise ValueError("line at infinity has no affine points")
        w = self.omega
        ww = dot(w, w)
        base = tuple(Fraction(c, ww) for c in cross(w, self.v))
        return [tuple(b + as_fraction(t) * wi for b, wi in zip(base, w)) for t in ts]

    def to_json(self) -> list[str]:
        return [format_scalar(c) for c in self.coords]

    @classmethod
    def from_json(cls, data) -> "PlueckerLine":
        return cls(tuple(parse_scalar(s) for s in data))


def plucker_vector(P: Sequence, Q: Sequence) -> tuple:
    """Raw P_ij = P_i Q_j - P_j Q_i in the (01,02,03,23,31,12) order."""
    return tuple(P[i] * Q[j] - P[j] * Q[i] for i, j in PLUCKER_INDEX)


def plucker_from_points(P, Q) -> PlueckerLine:
    """Line through two projective points of FP^3.

    Accepts :class:`ProjPoint3` or raw four-tuples.  Raises
    :class:`CoincidentPoints` if the points are projectively equal.
    """
    hp = P.h if isinstance(P, ProjPoint3) else tuple(as_fraction(x) for x in P)
    hq = Q.h if isinstance(Q, ProjPoint3) else tuple(as_fraction(x) for x in Q)
    raw = plucker_vector(hp, hq)
    if all(c == 0 for c in raw):
        raise CoincidentPoints(f"{hp} and {hq} are the same projective point")
    return PlueckerLine(raw)


def reciprocal_product(L, M):
    """omega . v' + v . omega' on the given representatives.

    Works on :class:`PlueckerLine` values or on raw six-sequences of any
    ring elements; the zero set does not depend on representatives.
    """
    a = L.coords if isinstance(L, PlueckerLine) else L
    b = M.coords if isinstance(M, PlueckerLine) else M
    return a[0] * b[3] + a[1] * b[4] + a[2] * b[5] + a[3] * b[0] + a[4] * b[1] + a[5] * b[2]


def _check_meeting(L: PlueckerLine, M: PlueckerLine) -> None:
    if L == M:
        raise EqualLines(f"{L.coords} given twice")
    if reciprocal_product(L, M) != 0:
        raise NotIncident(f"lines {L.coords} and {M.coords} are skew")


def meet_point(L: PlueckerLine, M: PlueckerLine) -> ProjPoint3:
    """Common point of two distinct meeting lines (ideal when they are parallel)."""
    _check_meeting(L, M)
    x = null_vector_rank3(L.point_rows() + M.point_rows())
    if x is None:
        raise EqualLines("point system has rank < 3")
    pt = ProjPoint3(x)
    assert L.contains_point(pt) and M.contains_point(pt)
    return pt


def common_plane(L: PlueckerLine, M: PlueckerLine) -> ProjPlane3:
    """The plane spanned by two distinct meeting lines."""
    _check_meeting(L, M)
    x = null_vector_rank3(L.plane_rows() + M.plane_rows())
    if x is None:
        raise EqualLines("plane system has rank < 3")
    pl = ProjPlane3(x)
    assert L.lies_in(pl) and M.lies_in(pl)
    return pl


# -- regulus quadric ---------------------------------------------------------
# Polynomials in (q1, q2, q3) as {exponent triple: Fraction}.

def _padd(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v != 0}


def _pmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for (ka, va), (kb, vb) in product(a.items(), b.items()):
        k = (ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2])
        out[k] = out.get(k, 0) + va * vb
    return {k: v for k, v in out.items() if v != 0}


def _pneg(a: dict) -> dict:
    return {k: -v for k, v in a.items()}


def _pdet3(m) -> dict:
    total: dict = {}
    for cols, sign in (((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
                       ((0, 2, 1), -1), ((2, 1, 0), -1), ((1, 0, 2), -1)):
        term = _pmul(_pmul(m[0][cols[0]], m[1][cols[1]]), m[2][cols[2]])
        total = _padd(total, term if sign > 0 else _pneg(term))
    return total


@dataclass(frozen=True)
class QuadraticSurface3:
    """Point set {x : x^T S x = 0} of FP^3 for a symmetric 4x4 rational S."""

    S: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        S = tuple(tuple(as_fraction(x) for x in row) for row in self.S)
        if len(S) != 4 or any(len(r) != 4 for r in S):
            raise ValueError("S must be 4x4")
        if any(S[i][j] != S[j][i] for i in range(4) for j in range(4)):
            raise ValueError("S must be symmetric")
        object.__setattr__(self, "S", S)

    def evaluate(self, x: Sequence) -> Fraction:
        x = [as_fraction(c) for c in x]
        return sum((x[i] * self.S[i][j] * x[j] for i in range(4) for j in range(4)), Fraction(0))

    def evaluate_affine(self, q: Sequence) -> Fraction:
        return self.evaluate((1, *q))

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for row in self.S for c in row)


def _adjoint_poly() -> list[list[dict]]:
    # Q(q) w = w x q, so v = q x omega reads v = -Q(q) omega
    q1, q2, q3 = {(1, 0, 0): Fraction(1)}, {(0, 1, 0): Fraction(1)}, {(0, 0, 1): Fraction(1)}
    z: dict = {}
    return [[z, q3, _pneg(q2)], [_pneg(q3), z, q1], [q2, _pneg(q1), z]]


def regulus_polynomial(A, B) -> dict:
    """det(A - B Q(q)) as an exponent-dict polynomial in (q1, q2, q3), with Q(q) w = w x q.

    A point q lies on a line of Pi exactly when (A - B Q(q)) omega = 0.
    """
    A = [[as_fraction(x) for x in row] for row in A]
    B = [[as_fraction(x) for x in row] for row in B]
    Q = _adjoint_poly()
    m = []
    for i in range(3):
        row = []
        for j in range(3):
            entry = {(0, 0, 0): A[i][j]} if A[i][j] else {}
            for k in range(3):
                if B[i][k]:
                    entry = _padd(entry, _pneg(_pmul({(0, 0, 0): B[i][k]}, Q[k][j])))
            row.append(entry)
        m.append(row)
    return _pdet3(m)


def regulus_quadric(A, B) -> QuadraticSurface3:
    """Union of affine lines in Pi ∩ K for the two-plane Pi: A omega + B v = 0.

    The cubic part of det(A - B Q(q)) vanishes because det Q(q) = 0, so the
    result is a quadric; it is homogenised with q0 and returned as a
    symmetric matrix.
    """
    AB = [list(A[i]) + list(B[i]) for i in range(3)]
    if rank(AB) != 3:
        raise RankDeficient("(A|B) must have rank 3")
    poly = regulus_polynomial(A, B)
    if any(sum(k) == 3 for k in poly):
        raise AssertionError("cubic term survived in det(A - B Q(q))")
    S = [[Fraction(0)] * 4 for _ in range(4)]
    for (e1, e2, e3), c in poly.items():
        # homogenise: variables x0..x3 with x0 carrying the missing degree
        vars_ = [0] * (2 - (e1 + e2 + e3)) + [1] * e1 + [2] * e2 + [3] * e3
        i, j = vars_
        if i == j:
            S[i][i] += c
        else:
            S[i][j] += c / 2
            S[j][i] += c / 2
    return QuadraticSurface3(tuple(tuple(r) for r in S))
