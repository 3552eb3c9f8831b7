"""Cl(3,0) over the rationals, rotors acting on sphere points, and the rotor line of (p, q).

Basis order is (1, e1, e2, e3, e23, e31, e12, e123) with e31 = e3 e1 = -e1 e3.
Conjugation negates grades 1 and 2 and fixes grades 0 and 3.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ._exact import format_scalar, nullspace, parse_scalar, vec
from .errors import Antipodal, DegenerateRotor, NotOnSurface, RankUnexpected
from .klein import PlueckerLine, plucker_from_points

BASIS = ("1", "e1", "e2", "e3", "e23", "e31", "e12", "e123")
_MASK = (0b000, 0b001, 0b010, 0b100, 0b110, 0b101, 0b011, 0b111)
_SIGN = (1, 1, 1, 1, 1, -1, 1, 1)   # e31 is minus the canonical blade e1e3
_GRADE = tuple(bin(m).count("1") for m in _MASK)
_CONJ = {0: 1, 1: -1, 2: -1, 3: 1}
_INDEX = {m: k for k, m in enumerate(_MASK)}


def _reorder_sign(a: int, b: int) -> int:
    """Sign of concatenating canonical blades a and b into canonical order (e_i^2 = 1)."""
    swaps = 0
    a >>= 1
    while a:
        swaps += bin(a & b).count("1")
        a >>= 1
    return -1 if swaps & 1 else 1


def _table():
    tab = {}
    for k, mk in enumerate(_MASK):
        for l, ml in enumerate(_MASK):
            r = _INDEX[mk ^ ml]
            tab[k, l] = (r, _SIGN[k] * _SIGN[l] * _SIGN[r] * _reorder_sign(mk, ml))
    return tab


_PRODUCT = _table()


@dataclass(frozen=True)
class CliffordElement:
    c: tuple[Fraction, ...]

    def __post_init__(self):
        c = vec(self.c)
        if len(c) != 8:
            raise ValueError("a Cl(3,0) element has 8 components")
        object.__setattr__(self, "c", c)

    @classmethod
    def basis(cls, name: str, coeff=1) -> "CliffordElement":
        out = [0] * 8
        out[BASIS.index(name)] = coeff
        return cls(out)

    @classmethod
    def scalar(cls, x) -> "CliffordElement":
        return cls.basis("1", x)

    @classmethod
    def vector(cls, p: Sequence) -> "CliffordElement":
        return cls((0, *p, 0, 0, 0, 0))

    @classmethod
    def even(cls, s: Sequence) -> "CliffordElement":
        """s0 + s1 e23 + s2 e31 + s3 e12."""
        return cls((s[0], 0, 0, 0, s[1], s[2], s[3], 0))

    @classmethod
    def bivector(cls, u: Sequence) -> "CliffordElement":
        return cls.even((0, *u))

    def __add__(self, other):
        return CliffordElement(tuple(a + b for a, b in zip(self.c, other.c)))

    def __sub__(self, other):
        return CliffordElement(tuple(a - b for a, b in zip(self.c, other.c)))

    def __neg__(self):
        return CliffordElement(tuple(-a for a in self.c))

    def __mul__(self, other):
        if not isinstance(other, CliffordElement):
            return CliffordElement(tuple(a * other for a in self.c))
        return geometric_product(self, other)

    __rmul__ = lambda self, k: CliffordElement(tuple(k * a for a in self.c))  # noqa: E731

    def conjugate(self) -> "CliffordElement":
        return CliffordElement(tuple(_CONJ[_GRADE[k]] * a for k, a in enumerate(self.c)))

    def grade(self, r: int) -> "CliffordElement":
        return CliffordElement(tuple(a if _GRADE[k] == r else 0 for k, a in enumerate(self.c)))

    def is_grade(self, r: int) -> bool:
        return all(a == 0 for k, a in enumerate(self.c) if _GRADE[k] != r)

    @property
    def is_even(self) -> bool:
        return all(a == 0 for k, a in enumerate(self.c) if _GRADE[k] % 2)

    @property
    def vector_part(self) -> tuple[Fraction, Fraction, Fraction]:
        return self.c[1:4]

    @property
    def even_part(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.c[0], *self.c[4:7])

    def to_json(self) -> list[str]:
        return [format_scalar(a) for a in self.c]

    @classmethod
    def from_json(cls, data) -> "CliffordElement":
        return cls(tuple(parse_scalar(s) for s in data))


def geometric_product(x: CliffordElement, y: CliffordElement) -> CliffordElement:
    out = [Fraction(0)] * 8
    for k, a in enumerate(x.c):
        if a == 0:
            continue
        for l, b in enumerate(y.c):
            if b == 0:
                continue
            r, s = _PRODUCT[k, l]
            out[r] += s * a * b
    return CliffordElement(out)


def norm_scalar(g: CliffordElement) -> Fraction:
    """g g^- for an even element (a scalar)."""
    n = g * g.conjugate()
    if not n.is_grade(0):
        raise DegenerateRotor(f"g g^- is not scalar for {g}")
    return n.c[0]


def rotor_action(g: CliffordElement, p) -> CliffordElement:
    """g p g^-; for gp = qg this is (g g^-) q."""
    if not g.is_even:
        raise DegenerateRotor("a rotor must be even")
    if norm_scalar(g) == 0:
        raise DegenerateRotor("g g^- = 0")
    pv = p if isinstance(p, CliffordElement) else CliffordElement.vector(p)
    out = g * pv * g.conjugate()
    assert out.is_grade(1)
    return out


def _check_pair(p, q):
    p, q = vec(p), vec(q)
    np_, nq = sum(x * x for x in p), sum(x * x for x in q)
    if np_ != nq or np_ == 0:
        raise NotOnSurface("p and q must have the same nonzero norm")
    if all(a == -b for a, b in zip(p, q)):
        raise Antipodal(f"{p} and {q} are antipodal")
    return p, q


_EQ_ROWS = (1, 2, 3, 7)   # e1, e2, e3, e123


def rotor_system(p, q) -> list[list[Fraction]]:
    """Coefficients of e1, e2, e3, e123 in gp - qg as a 4x4 matrix acting on (s0, s1, s2, s3)."""
    pv, qv = CliffordElement.vector(vec(p)), CliffordElement.vector(vec(q))
    cols = []
    for k in range(4):
        s = [0, 0, 0, 0]
        s[k] = 1
        g = CliffordElement.even(s)
        d = g * pv - qv * g
        cols.append([d.c[r] for r in _EQ_ROWS])
    return [[cols[k][r] for k in range(4)] for r in range(4)]


def rotor_line(p, q) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Two independent homogeneous points (s0:s1:s2:s3) spanning the solutions of gp = qg."""
    p, q = _check_pair(p, q)
    basis = nullspace(rotor_system(p, q))
    if len(basis) != 2:
        raise RankUnexpected(f"solution space has dimension {len(basis)}, expected 2")
    return tuple(tuple(b) for b in basis)


def lpq_rotor(p, q, c, s, variant: str = "e31") -> CliffordElement:
    """[(p1+q1)e23 + (p2+q2)e31 + (p3+q3)e12] [c + s(p1 e23 + p2 e31 + p3 e12)].

    A rotation by pi about p + q composed with the rotations about p.  With
    ``variant="e13"`` the middle coefficient multiplies e1e3 instead, which
    does not solve gp = qg in general.
    """
    p, q = vec(p), vec(q)
    k = 1 if variant == "e31" else -1
    first = CliffordElement.bivector((p[0] + q[0], k * (p[1] + q[1]), p[2] + q[2]))
    second = CliffordElement.scalar(c) + CliffordElement.bivector((p[0], k * p[1], p[2])) * s
    return first * second


def rotor_line_to_plucker(p, q, variant: str = "e31") -> PlueckerLine:
    """Line through the rotors at (c, s) = (1, 0) and (0, 1), in (s0:s1:s2:s3) coordinates."""
    p, q = _check_pair(p, q)
    x = lpq_rotor(p, q, 1, 0, variant).even_part
    y = lpq_rotor(p, q, 0, 1, variant).even_part
    return plucker_from_points(x, y)
