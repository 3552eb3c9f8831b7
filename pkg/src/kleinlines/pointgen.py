"""Deterministic exact point sets for the experiments.

Randomness comes from SplitMix64 so a (spec, seed) pair names the same set
in any implementation.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Sequence

from ._exact import as_fraction, format_scalar, is_rational_square, parse_scalar, rational_sqrt, vec
from .errors import InvalidSpec

MASK64 = (1 << 64) - 1
DEFAULT_BOUND = 1000
DEFAULT_DEN = 16


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform-ish integer in [lo, hi] (modulo reduction)."""
        if hi < lo:
            raise ValueError("empty range")
        return lo + self.next_u64() % (hi - lo + 1)

    def rational(self, bound: int = DEFAULT_BOUND, den: int = DEFAULT_DEN) -> Fraction:
        return Fraction(self.randint(-bound, bound), self.randint(1, den))

    def choice_index(self, n: int) -> int:
        return self.randint(0, n - 1)


@dataclass(frozen=True)
class PointSet:
    """Ordered, duplicate-free points; ``surface`` tags sphere/hyperboloid sets."""

    points: tuple[tuple[Fraction, ...], ...]
    surface: str | None = None

    def __post_init__(self):
        pts = tuple(vec(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if len(set(pts)) != len(pts):
            raise InvalidSpec("point set contains duplicates")
        dims = {len(p) for p in pts}
        if len(dims) > 1:
            raise InvalidSpec("mixed dimensions")
        if self.surface not in (None, "sphere", "hyperboloid"):
            raise InvalidSpec(f"unknown surface {self.surface!r}")
        if self.surface == "sphere":
            norms = {sum(x * x for x in p) for p in pts}
            if len(norms) > 1:
                raise InvalidSpec("sphere-tagged points have different norms")
        if self.surface == "hyperboloid":
            for p in pts:
                if p[0] ** 2 + p[1] ** 2 - p[2] ** 2 != -1 or p[2] <= 0:
                    raise InvalidSpec(f"{p} is not on the upper hyperboloid sheet")

    @property
    def dim(self) -> int:
        return len(self.points[0]) if self.points else 2

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[tuple[Fraction, ...]]:
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "surface": self.surface,
            "points": [[format_scalar(x) for x in p] for p in self.points],
        }

    @classmethod
    def from_json(cls, data) -> "PointSet":
        pts = tuple(tuple(parse_scalar(s) for s in row) for row in data["points"])
        ps = cls(pts, data.get("surface"))
        if pts and data.get("dim", ps.dim) != ps.dim:
            raise InvalidSpec("declared dim does not match the points")
        return ps

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1) + "\n")


def load_points(path, surface: str | None = None) -> PointSet:
    """Read a point-set JSON file, or a CSV of "n/d" fields (one point per row)."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        with path.open(newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
        return PointSet(tuple(tuple(parse_scalar(s) for s in r) for r in rows), surface)
    return PointSet.from_json(json.loads(path.read_text()))


# -- generators ------------------------------------------------------------------------

def lattice(k: int) -> PointSet:
    if k < 0:
        raise InvalidSpec("lattice size must be non-negative")
    return PointSet(tuple((Fraction(i), Fraction(j)) for i in range(k) for j in range(k)))


def _distinct(draw, n: int, limit: int = 10_000) -> list:
    seen: dict = {}
    tries = 0
    while len(seen) < n:
        tries += 1
        if tries > limit + 50 * n:
            raise InvalidSpec(f"could not draw {n} distinct points")
        pt = draw()
        if pt is not None and pt not in seen:
            seen[pt] = None
    return list(seen)


def random2(n: int, seed: int = 0, bound: int = DEFAULT_BOUND, den: int = DEFAULT_DEN) -> PointSet:
    rng = SplitMix64(seed)
    return PointSet(tuple(_distinct(lambda: (rng.rational(bound, den), rng.rational(bound, den)), n)))


def sphere_point(u, v) -> tuple[Fraction, Fraction, Fraction]:
    """Inverse stereographic projection from the south pole parameterisation."""
    u, v = as_fraction(u), as_fraction(v)
    s = u * u + v * v
    return (2 * u / (s + 1), 2 * v / (s + 1), (s - 1) / (s + 1))


def hyperboloid_point(u, v) -> tuple[Fraction, Fraction, Fraction]:
    """Upper-sheet point from the unit disk (u^2 + v^2 < 1)."""
    u, v = as_fraction(u), as_fraction(v)
    s = u * u + v * v
    if s >= 1:
        raise InvalidSpec("hyperboloid parameter must lie in the open unit disk")
    return (2 * u / (1 - s), 2 * v / (1 - s), (1 + s) / (1 - s))


def sphere(n: int, seed: int = 0, bound: int = 12, den: int = 8) -> PointSet:
    rng = SplitMix64(seed)
    pts = _distinct(lambda: sphere_point(rng.rational(bound, den), rng.rational(bound, den)), n)
    return PointSet(tuple(pts), "sphere")


def hyperboloid(n: int, seed: int = 0, den: int = 12) -> PointSet:
    rng = SplitMix64(seed)

    def draw():
        u, v = rng.rational(den - 1, den), rng.rational(den - 1, den)
        if u * u + v * v >= 1:
            return None
        return hyperboloid_point(u, v)

    return PointSet(tuple(_distinct(draw, n)), "hyperboloid")


def isotropic_lines(M) -> list[tuple[Fraction, Fraction]]:
    """Rational directions x with x^T M x = 0 (one or two), for indefinite or degenerate M."""
    m = [[as_fraction(x) for x in row] for row in M]
    A, B, C = m[0][0], (m[0][1] + m[1][0]) / 2, m[1][1]
    disc = B * B - A * C
    if A == 0 and B == 0 and C == 0:
        raise InvalidSpec("zero form: every direction is isotropic")
    if disc < 0:
        raise InvalidSpec("definite form has no isotropic directions")
    if not is_rational_square(disc):
        raise InvalidSpec("isotropic directions are irrational")
    r = rational_sqrt(disc)
    if A != 0:
        dirs = [(-B + r, A), (-B - r, A)]
    elif C != 0:
        dirs = [(C, -B + r), (C, -B - r)]
    else:
        dirs = [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))]
    out = []
    for d in dirs:
        if d not in out and (d[0] or d[1]):
            out.append(d)
    return out


def isotropic_adversarial(n: int, M=((1, 0), (0, -1))) -> PointSet:
    """ceil(n/2) points on the first isotropic line of M through the origin, the rest on the second.

    When M has a single isotropic direction the second line is the parallel
    through (1, 0) or (0, 1).
    """
    dirs = isotropic_lines(M)
    k1 = (n + 1) // 2
    d1 = dirs[0]
    pts = [(t * d1[0], t * d1[1]) for t in range(1, k1 + 1)]
    if len(dirs) > 1:
        d2, off = dirs[1], (Fraction(0), Fraction(0))
    else:
        d2 = d1
        off = (Fraction(0), Fraction(1)) if d1[0] != 0 else (Fraction(1), Fraction(0))
    pts += [(off[0] + t * d2[0], off[1] + t * d2[1]) for t in range(1, n - k1 + 1)]
    return PointSet(tuple(pts))


def collinear_heavy(n: int, m: int, seed: int = 0, bound: int = 50, den: int = 4) -> PointSet:
    """m points on one random rational line (listed first), n - m random points off it."""
    if not 2 <= m <= n:
        raise InvalidSpec("collinear_heavy needs 2 <= m <= n")
    rng = SplitMix64(seed)
    base = (rng.rational(bound, den), rng.rational(bound, den))
    while True:
        d = (Fraction(rng.randint(-5, 5)), Fraction(rng.randint(-5, 5)))
        if d != (0, 0):
            break
    line_pts = [(base[0] + t * d[0], base[1] + t * d[1]) for t in range(m)]

    def draw():
        pt = (rng.rational(bound, den), rng.rational(bound, den))
        on_line = (pt[0] - base[0]) * d[1] - (pt[1] - base[1]) * d[0] == 0
        return None if on_line or pt in line_pts else pt

    others = _distinct(draw, n - m) if n > m else []
    return PointSet(tuple(line_pts + others))


def _ints(parts: Sequence[str], names: Sequence[str], spec: str) -> list[int]:
    if len(parts) != len(names):
        raise InvalidSpec(f"{spec!r}: expected {':'.join(names)}")
    try:
        return [int(x) for x in parts]
    except ValueError:
        raise InvalidSpec(f"{spec!r}: non-integer argument") from None


def generate(spec: str, seed: int = 0, matrix=None) -> PointSet:
    """Dispatch a textual spec such as ``lattice:4`` or ``collinear_heavy:12:6``.

    Kinds: lattice:k, random2:n[:bound], sphere:n, hyperboloid:n,
    isotropic_adversarial:n (``matrix`` defaults to diag(1,-1)), collinear_heavy:n:m.
    """
    kind, *args = spec.split(":")
    if kind == "lattice":
        (k,) = _ints(args, ["k"], spec)
        return lattice(k)
    if kind == "random2":
        if len(args) == 2:
            n, bound = _ints(args, ["n", "bound"], spec)
            return random2(n, seed, bound)
        (n,) = _ints(args, ["n"], spec)
        return random2(n, seed)
    if kind == "sphere":
        (n,) = _ints(args, ["n"], spec)
        return sphere(n, seed)
    if kind == "hyperboloid":
        (n,) = _ints(args, ["n"], spec)
        return hyperboloid(n, seed)
    if kind == "isotropic_adversarial":
        (n,) = _ints(args, ["n"], spec)
        return isotropic_adversarial(n, matrix if matrix is not None else ((1, 0), (0, -1)))
    if kind == "collinear_heavy":
        n, m = _ints(args, ["n", "m"], spec)
        return collinear_heavy(n, m, seed)
    raise InvalidSpec(f"unknown point-set kind {kind!r}")
