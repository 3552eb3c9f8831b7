"""Energy counts over ordered quadruples, and their cross-check against line incidences.

All counts are ordered: E = #{(p, p', q, q') : f(p, p') = g(q, q')}, so a
single point set contributes its N self-pairs.  The pair (p, p') feeds the
first slot of the lines l_pq, l_p'q', matching the audit's ordered pair count.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Sequence

from ._exact import format_scalar, vec
from .audit import audit, tagged_lines
from .errors import CoverageFailure, NotOnSurface
from .reductions import DirGFamily, FormConfig, case_matrices, genr_holds, on_hyperboloid, preset_config, quad

NAMED = ("euclidean", "sphere", "hyperboloid")


# -- value specification -------------------------------------------------------------

def _sub(x, y):
    return tuple(a - b for a, b in zip(x, y))


def _dot(x, y):
    return sum((a * b for a, b in zip(x, y)), Fraction(0))


def _mink(x, y):
    return x[2] * y[2] - x[0] * y[0] - x[1] * y[1]


def _proj_key(u):
    """Projective class of a 2-vector, or None for the zero vector (matches every class)."""
    if u[0] != 0:
        return (Fraction(1), Fraction(u[1]) / u[0])
    if u[1] != 0:
        return (Fraction(0), Fraction(1))
    return None


@dataclass(frozen=True)
class PairValueSpec:
    """Which pair function is counted.

    ``family`` is 'euclidean', 'sphere', 'hyperboloid', a FormConfig, or a
    pair of DirGFamily objects (one per line family).
    """

    family: object

    def __post_init__(self):
        f = self.family
        if isinstance(f, list):
            object.__setattr__(self, "family", tuple(f))
            f = self.family
        if isinstance(f, tuple):
            if len(f) != 2 or not all(isinstance(x, DirGFamily) for x in f):
                raise ValueError("a dirG spec needs exactly two DirGFamily objects")
        elif not isinstance(f, FormConfig) and f not in NAMED:
            raise ValueError(f"unknown pair-value family {f!r}")

    @classmethod
    def named(cls, name: str, **params) -> "PairValueSpec":
        return cls(name if name in NAMED else preset_config(name, **params))

    @property
    def kind(self) -> str:
        f = self.family
        if isinstance(f, str):
            return f
        if isinstance(f, tuple):
            return "dirG"
        return case_matrices(f).kind

    @property
    def is_directions(self) -> bool:
        return self.kind in ("directions", "directions_diagonal")

    @property
    def hashable(self) -> bool:
        return self.kind not in ("dirG", "mixed")

    @property
    def symmetric(self) -> bool:
        """Left and right value functions coincide, so Cauchy-Schwarz applies."""
        if isinstance(self.family, str):
            return True
        if not self.hashable:
            return False
        cm = case_matrices(self.family)
        if self.is_directions:
            return all(_proj_key(self._dir_maps[0](x)) == _proj_key(self._dir_maps[1](x))
                       for x in ((1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1)))
        sym = lambda m: (m[0][0], m[0][1] + m[1][0], m[1][1])  # noqa: E731
        return sym(cm.M1) == sym(cm.M2)

    @property
    def _dir_maps(self) -> tuple[Callable, Callable]:
        m = case_matrices(self.family).M3
        if self.kind == "directions":
            return (lambda d: (m[0][1] * d[0], -m[1][0] * d[1])), (lambda d: (d[0], d[1]))
        return (lambda d: (m[0][0] * d[0], m[1][1] * d[1])), (lambda d: (d[1], -d[0]))

    def value_functions(self) -> tuple[Callable, Callable]:
        """(f, g) with f(p, p') = g(q, q') iff the lines l_pq and l_p'q' meet."""
        f = self.family
        if f == "euclidean":
            v = lambda x, y: _dot(_sub(x, y), _sub(x, y))  # noqa: E731
            return v, v
        if f == "sphere":
            return _dot, _dot
        if f == "hyperboloid":
            return _mink, _mink
        if self.is_directions:
            lm, rm = self._dir_maps
            return (lambda x, y: _proj_key(lm(_sub(x, y)))), (lambda x, y: _proj_key(rm(_sub(x, y))))
        if not self.hashable:
            raise ValueError(f"{self.kind} family has no separated value functions")
        cm = case_matrices(f)
        return (lambda x, y: quad(cm.M1, _sub(x, y))), (lambda x, y: quad(cm.M2, _sub(x, y)))

    def check_points(self, S: Sequence) -> list:
        pts = [vec(p) for p in S]
        if not pts:
            raise ValueError("point set is empty")
        dim = 3 if self.family in ("sphere", "hyperboloid") else 2
        if any(len(p) != dim for p in pts):
            raise NotOnSurface(f"{self.kind} family needs points of dimension {dim}")
        if self.family == "sphere":
            norms = {_dot(p, p) for p in pts}
            if len(norms) != 1 or 0 in norms:
                raise NotOnSurface("sphere points must share one nonzero norm")
        if self.family == "hyperboloid":
            bad = [p for p in pts if not on_hyperboloid(p)]
            if bad:
                raise NotOnSurface(f"{bad[0]} is not on the upper hyperboloid sheet")
        return pts

    def map_family(self):
        """What line_map / tagged_lines takes for this spec (the first family for dirG)."""
        return self.family[0] if isinstance(self.family, tuple) else self.family

    def to_json(self):
        f = self.family
        if isinstance(f, str):
            return {"family": f}
        if isinstance(f, tuple):
            return {"family": "dirG", "families": [x.to_json() for x in f]}
        return {"family": "forms", "config": f.to_json()}

    @classmethod
    def from_json(cls, data) -> "PairValueSpec":
        fam = data["family"]
        if fam in NAMED:
            return cls(fam)
        if fam == "dirG":
            return cls(tuple(DirGFamily.from_json(x) for x in data["families"]))
        if fam == "forms":
            return cls(FormConfig.from_json(data["config"]))
        raise ValueError(f"unknown pair-value family {fam!r}")


# -- reports ---------------------------------------------------------------------------

@dataclass
class EnergyReport:
    n: int
    E_total: int
    E_nonzero: int | None
    distinct_nonzero: int | None
    pairs_nonzero: int | None
    cs_bound: Fraction | None
    method: str
    spec: dict = field(default_factory=dict)

    @property
    def ratio(self) -> float | None:
        """E_nonzero / (N^3 ln N), reported as a trend only."""
        if self.E_nonzero is None or self.n < 2:
            return None
        return self.E_nonzero / (self.n ** 3 * math.log(self.n))

    def to_json(self) -> dict:
        s = lambda x: None if x is None else str(x)  # noqa: E731
        return {
            "N": self.n,
            "E_total": s(self.E_total),
            "E_nonzero": s(self.E_nonzero),
            "distinct_nonzero": s(self.distinct_nonzero),
            "pairs_nonzero": s(self.pairs_nonzero),
            "cs_bound": None if self.cs_bound is None else format_scalar(self.cs_bound),
            "ratio": None if self.ratio is None else f"{self.ratio:.6g}",
            "method": self.method,
            "spec": self.spec,
        }


def _ordered_pairs(S):
    return product(S, repeat=2)


def quadruple_count(S: Sequence, spec: PairValueSpec) -> EnergyReport:
    """Ordered quadruple counts by hashing pair values, O(N^2) pairs.

    Families with no separated value functions (dirG, mixed forms) fall back
    to the direct O(N^4) count.
    """
    pts = spec.check_points(S)
    if not spec.hashable:
        rep = quadruple_count_naive(pts, spec)
        rep.method = "direct"
        return rep
    f, g = spec.value_functions()
    left = Counter(f(x, y) for x, y in _ordered_pairs(pts))
    right = left if spec.symmetric else Counter(g(x, y) for x, y in _ordered_pairs(pts))
    n2 = len(pts) ** 2

    if spec.is_directions:
        zl = left.pop(None, 0)
        zr = zl if right is left else right.pop(None, 0)
        matched = sum(m * right.get(v, 0) for v, m in left.items())
        e_total = matched + zl * n2 + zr * n2 - zl * zr
        lm, rm = spec._dir_maps
        lslope = Counter(u[1] / u[0] for u in (lm(_sub(x, y)) for x, y in _ordered_pairs(pts)) if u[0] != 0)
        rslope = Counter(w[1] / w[0] for w in (rm(_sub(x, y)) for x, y in _ordered_pairs(pts)) if w[0] != 0)
        e_nz = sum(m * rslope.get(v, 0) for v, m in lslope.items())
        distinct, pairs = len(lslope), sum(lslope.values())
    else:
        e_total = sum(m * right.get(v, 0) for v, m in left.items())
        nz = {v: m for v, m in left.items() if v != 0}
        e_nz = sum(m * right.get(v, 0) for v, m in nz.items())
        distinct, pairs = len(nz), sum(nz.values())
    cs = Fraction(pairs * pairs, e_nz) if spec.symmetric and e_nz else None
    return EnergyReport(len(pts), e_total, e_nz, distinct, pairs, cs, "hash", spec.to_json())


def _direct_predicates(spec: PairValueSpec):
    """(equal, nonzero) predicates on a quadruple, written from the defining equations."""
    fam = spec.family
    if fam == "euclidean":
        d2 = lambda x, y: (x[0] - y[0]) ** 2 + (x[1] - y[1]) ** 2  # noqa: E731
        return (lambda p, pp, q, qq: d2(p, pp) == d2(q, qq)), (lambda p, pp, q, qq: d2(p, pp) != 0)
    if fam == "sphere":
        return (lambda p, pp, q, qq: _dot(p, pp) == _dot(q, qq)), (lambda p, pp, q, qq: _dot(p, pp) != 0)
    if fam == "hyperboloid":
        return (lambda p, pp, q, qq: _mink(p, pp) == _mink(q, qq)), (lambda p, pp, q, qq: _mink(p, pp) != 0)
    if isinstance(fam, tuple):
        F, G = fam
        return (lambda p, pp, q, qq: genr_holds(F.values(p, q), G.values(pp, qq))), None

    def nonlin(p, pp, q, qq):
        L, M = fam.forms(p, q), fam.forms(pp, qq)
        return -((L[0] - M[0]) * (L[2] - M[2]) + (L[1] - M[1]) * (L[3] - M[3]))

    equal = lambda p, pp, q, qq: nonlin(p, pp, q, qq) == 0  # noqa: E731
    if spec.is_directions:
        return equal, (lambda p, pp, q, qq: p[0] != pp[0] and q[0] != qq[0])
    if spec.kind == "mixed":
        return equal, None
    # q = q' isolates the first-slot value
    return equal, (lambda p, pp, q, qq: nonlin(p, pp, q, q) != 0)


def quadruple_count_naive(S: Sequence, spec: PairValueSpec) -> EnergyReport:
    """The O(N^4) loop over all ordered quadruples, independent of the value hashing."""
    pts = spec.check_points(S)
    equal, nonzero = _direct_predicates(spec)
    e_total = e_nz = 0
    for p, pp, q, qq in product(pts, repeat=4):
        if equal(p, pp, q, qq):
            e_total += 1
            if nonzero is not None and nonzero(p, pp, q, qq):
                e_nz += 1
    return EnergyReport(len(pts), e_total, e_nz if nonzero is not None else None,
                        None, None, None, "naive", spec.to_json())


# -- cross validation -------------------------------------------------------------------

@dataclass(frozen=True)
class CrossValidation:
    E_total: int
    intersecting_pairs: int
    fraction_form: int | None
    energy: EnergyReport

    @property
    def equal(self) -> bool:
        return self.E_total == self.intersecting_pairs

    def to_json(self) -> dict:
        return {
            "E_total": str(self.E_total),
            "intersecting_pair_count": str(self.intersecting_pairs),
            "equal": self.equal,
            "fraction_form_count": None if self.fraction_form is None else str(self.fraction_form),
            "energy": self.energy.to_json(),
        }


def cross_validate(S: Sequence, spec: PairValueSpec, workers: int | None = None) -> CrossValidation:
    """Quadruple count versus ordered intersecting pairs of the mapped lines."""
    pts = spec.check_points(S)
    rep = quadruple_count(pts, spec)
    if isinstance(spec.family, tuple):
        F, G = spec.family
        count = audit(tagged_lines(pts, F, 1), tagged_lines(pts, G, 2),
                      n_points=len(pts), histograms=False, workers=workers).intersecting_pair_count
    else:
        count = audit(tagged_lines(pts, spec.family), n_points=len(pts),
                      histograms=False, workers=workers).intersecting_pair_count
    frac = rep.E_nonzero if spec.is_directions else None
    return CrossValidation(rep.E_total, count, frac, rep)


# -- subset splitting ---------------------------------------------------------------------

@dataclass(frozen=True)
class Cover:
    entries: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    min_size: int
    diagnostic: str = ""
    roles: tuple[str, ...] = ()

    def role(self, k: int) -> str:
        """'both', or 'left'/'right' for an entry that only captures M1-pairs or M2-pairs."""
        return self.roles[k] if self.roles else "both"

    def to_json(self) -> dict:
        return {"entries": [[list(a), list(b)] for a, b in self.entries],
                "roles": [self.role(k) for k in range(len(self.entries))],
                "min_size": self.min_size, "diagnostic": self.diagnostic}


def split_cover(S: Sequence, M1, M2) -> Cover:
    """Pairs (S1, S2) of index sets, each of size >= ceil(N/16), on which the forms never vanish.

    Each ordered quadruple with equal nonzero value M1(p - p') = M2(q - q') has
    (p, p') captured by an entry on which M1 never vanishes and (q, q') by one
    on which M2 never vanishes.  When the two forms share their zero pairs on S
    every entry serves both sides; otherwise entries are tagged 'left' (M1) or
    'right' (M2).  Built greedily: (S, S) when it is already valid, otherwise
    bicliques grown from uncovered needed pairs.  The result is re-verified.
    """
    pts = [vec(p) for p in S]
    n = len(pts)
    idx = range(n)
    v1 = {(i, j): quad(M1, _sub(pts[i], pts[j])) for i in idx for j in idx}
    v2 = {(i, j): quad(M2, _sub(pts[i], pts[j])) for i in idx for j in idx}
    min_size = max(1, -(-n // 16))

    if all(v == 0 for v in v1.values()):
        return Cover((), min_size, "only value it returns is zero")

    def good1(i, j):
        return i != j and v1[i, j] != 0

    def good2(i, j):
        return i != j and v2[i, j] != 0

    def good(i, j):
        return good1(i, j) and good2(i, j)

    right_vals = Counter(v for v in v2.values() if v != 0)
    left_vals = Counter(v for v in v1.values() if v != 0)
    need_left = {e for e, v in v1.items() if v != 0 and v in right_vals}
    need_right = {e for e, v in v2.items() if v != 0 and v in left_vals}
    for e in sorted(need_left | need_right):
        if e[0] == e[1]:
            raise CoverageFailure(f"pair {e} has a nonzero self-value", witness=(e[0], e[1], e[0], e[1]))

    if all(good(i, j) for i in idx for j in idx if i != j):
        cover = Cover(((tuple(idx), tuple(idx)),), min_size)
    elif all(good(*e) for e in need_left | need_right):
        cover = Cover(tuple(_greedy_bicliques(n, need_left | need_right, good, min_size)), min_size)
    else:
        left = _greedy_bicliques(n, need_left, good1, min_size)
        right = _greedy_bicliques(n, need_right, good2, min_size)
        cover = Cover(tuple(left + right), min_size, "forms vanish on different pairs; entries are one-sided",
                      ("left",) * len(left) + ("right",) * len(right))
    verify_cover(pts, M1, M2, cover)
    return cover


def _witness(e, v1, v2):
    for f, v in v1.items():
        if v != 0 and (v == v2.get(e) or v == v1[e]):
            return (e[0], e[1], f[0], f[1])
    return (e[0], e[1], e[0], e[1])


def _greedy_bicliques(n: int, needed: set, good, min_size: int):
    uncovered = set(needed)
    entries = []
    while uncovered:
        u, w = min(uncovered)
        A, B = {u}, {w}
        while True:
            best, best_gain = None, 0
            for x in range(n):
                if x not in A and x not in B and all(good(x, b) for b in B):
                    gain = sum((x, b) in uncovered for b in B)
                    if gain > best_gain:
                        best, best_gain = ("A", x), gain
                if x not in A and x not in B and all(good(a, x) for a in A):
                    gain = sum((a, x) in uncovered for a in A)
                    if gain > best_gain:
                        best, best_gain = ("B", x), gain
            if best is None:
                break
            (A if best[0] == "A" else B).add(best[1])
        for side, other, ok in ((A, B, lambda x: all(good(x, b) for b in B)),
                                (B, A, lambda x: all(good(a, x) for a in A))):
            for x in range(n):
                if len(side) >= min_size:
                    break
                if x not in side and x not in other and ok(x):
                    side.add(x)
        if len(A) < min_size or len(B) < min_size:
            raise CoverageFailure(f"cannot grow a valid pair of subsets of size {min_size} around {(u, w)}",
                                  witness=(u, w, u, w))
        uncovered -= {(a, b) for a in A for b in B}
        entries.append((tuple(sorted(A)), tuple(sorted(B))))
    return entries


def verify_cover(S: Sequence, M1, M2, cover: Cover) -> None:
    """Brute-force check of validity, sizes and capture; raises CoverageFailure with a witness."""
    pts = [vec(p) for p in S]
    n = len(pts)
    forms = {"left": (M1,), "right": (M2,), "both": (M1, M2)}
    cap_left, cap_right = set(), set()
    for k, (A, B) in enumerate(cover.entries):
        role = cover.role(k)
        if role not in forms:
            raise CoverageFailure(f"entry {k} has unknown role {role!r}", witness=None)
        if len(A) < cover.min_size or len(B) < cover.min_size:
            raise CoverageFailure(f"entry {(A, B)} has a side below {cover.min_size}", witness=None)
        for i in A:
            for j in B:
                if i != j and any(quad(M, _sub(pts[i], pts[j])) == 0 for M in forms[role]):
                    raise CoverageFailure(f"form vanishes on cross pair {(i, j)}", witness=(i, j, i, j))
        cross = {(i, j) for i in A for j in B}
        if role != "right":
            cap_left |= cross
        if role != "left":
            cap_right |= cross
    # a quadruple (i, j, k, l) with equal nonzero value is uncaptured iff one of its
    # two pairs is; so it suffices to find one uncaptured pair with a partner
    left: dict = {}
    right: dict = {}
    for i, j in product(range(n), repeat=2):
        v = quad(M1, _sub(pts[i], pts[j]))
        if v != 0:
            left.setdefault(v, []).append((i, j))
        w = quad(M2, _sub(pts[i], pts[j]))
        if w != 0:
            right.setdefault(w, []).append((i, j))
    for v in sorted(set(left) & set(right)):
        for (i, j) in left[v]:
            for (k, l) in right[v]:
                if (i, j) not in cap_left or (k, l) not in cap_right:
                    raise CoverageFailure(f"quadruple {(i, j, k, l)} is not captured", witness=(i, j, k, l))
                break
        for (k, l) in right[v]:
            if (k, l) not in cap_right:
                i, j = left[v][0]
                raise CoverageFailure(f"quadruple {(i, j, k, l)} is not captured", witness=(i, j, k, l))
