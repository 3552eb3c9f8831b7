"""Incidence audits for finite line families.

Counts ordered intersecting pairs, buckets meeting pairs by their common
point and common plane, samples the regulus condition, and checks rich
buckets against the algebraic characterisations of the exceptional cases.
"""
from __future__ import annotations

import os
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np

from ._exact import canonical_ints, format_scalar
from .errors import CoincidentLines, InconsistentReport, NonCanonicalInput, TooFewLines
from .klein import PlueckerLine, ProjPlane3, ProjPoint3, common_plane, meet_point, reciprocal_product
from .pointgen import SplitMix64
from .reductions import DirGFamily, FormConfig, case_matrices, line_map, quad

WORKERS_ENV = "KLEINLINES_WORKERS"
BLOCK = 256


@dataclass(frozen=True)
class TaggedLine:
    line: PlueckerLine
    origin: tuple[int, int]
    family: int = 1

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.family, *self.origin)


def tagged_lines(points: Sequence, family, fam_id: int = 1) -> list[TaggedLine]:
    """All N^2 lines l_pq of a point set, tagged with their (i, j) origin."""
    f = line_map(family)
    return [TaggedLine(f(p, q), (i, j), fam_id)
            for i, p in enumerate(points) for j, q in enumerate(points)]


# -- counting engine -------------------------------------------------------------------

def _as_arrays(lines: Sequence[PlueckerLine]):
    coords = np.array([l.coords for l in lines], dtype=object).reshape(len(lines), 6)
    duals = coords[:, [3, 4, 5, 0, 1, 2]] if len(lines) else coords
    return coords, duals


def _zero_block(args):
    duals_block, coords_b, row0, upper = args
    rp = duals_block.dot(coords_b.T)
    ii, jj = np.nonzero(rp == 0)
    out = []
    for i, j in zip(ii.tolist(), jj.tolist()):
        gi = i + row0
        if upper and j <= gi:
            continue
        out.append((gi, j))
    return out


def zero_pairs(a: Sequence[PlueckerLine], b: Sequence[PlueckerLine] | None = None,
               workers: int | None = None) -> list[tuple[int, int]]:
    """Index pairs with zero reciprocal product.

    With one family, unordered pairs i < j; with two, all (i, j) in a x b.
    Row blocks may be farmed out to worker processes; the merged result is
    independent of scheduling.
    """
    same = b is None
    _, duals_a = _as_arrays(a)
    coords_b, _ = _as_arrays(a if same else b)
    jobs = [(duals_a[r:r + BLOCK], coords_b, r, same) for r in range(0, len(a), BLOCK)]
    workers = workers if workers is not None else int(os.environ.get(WORKERS_ENV, "1"))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_zero_block, jobs))
    else:
        parts = [_zero_block(j) for j in jobs]
    return [pair for part in parts for pair in part]


def count_intersecting(lines: Sequence[PlueckerLine], lines2: Sequence[PlueckerLine] | None = None,
                       workers: int | None = None) -> int:
    """Ordered intersecting pairs; one family counts self-pairs too."""
    if lines2 is None:
        return len(lines) + 2 * len(zero_pairs(lines, workers=workers))
    return len(zero_pairs(lines, lines2, workers=workers))


# -- report types ----------------------------------------------------------------------

@dataclass(frozen=True)
class Bucket:
    """Lines through one point (kind 'point') or in one plane (kind 'plane')."""

    kind: str
    where: ProjPoint3 | ProjPlane3
    members: tuple[tuple[int, int, int], ...]

    @property
    def multiplicity(self) -> int:
        return len(self.members)

    def by_family(self) -> dict[int, int]:
        out: dict[int, int] = defaultdict(int)
        for fam, _, _ in self.members:
            out[fam] += 1
        return dict(out)

    def to_json(self) -> dict:
        coords = self.where.h if self.kind == "point" else self.where.d
        return {
            "kind": self.kind,
            "coords": [format_scalar(c) for c in coords],
            "multiplicity": self.multiplicity,
            "members": [list(m) for m in self.members],
        }


@dataclass(frozen=True)
class RegulusResult:
    max_count: int
    triples_checked: int
    witness: tuple[int, int, int] | None
    diagnostic: str = ""


@dataclass
class AuditReport:
    n_points: int
    n_lines: int
    n_lines2: int | None
    intersecting_pair_count: int
    coincident_pairs: int
    point_buckets: list[Bucket]
    plane_buckets: list[Bucket]
    threshold: int
    regulus: RegulusResult | None = None
    exceptional: list = field(default_factory=list)

    @property
    def two_family(self) -> bool:
        return self.n_lines2 is not None

    @property
    def max_concurrency(self) -> int:
        return self.point_buckets[0].multiplicity if self.point_buckets else 0

    @property
    def max_coplanarity(self) -> int:
        return self.plane_buckets[0].multiplicity if self.plane_buckets else 0

    @property
    def regulus_spotcheck_max(self) -> int | None:
        return None if self.regulus is None else self.regulus.max_count

    @property
    def rich_points(self) -> list[Bucket]:
        return [b for b in self.point_buckets if b.multiplicity > self.threshold]

    @property
    def rich_planes(self) -> list[Bucket]:
        return [b for b in self.plane_buckets if b.multiplicity > self.threshold]

    def verdict(self) -> dict:
        n = max(self.n_points, 1)

        def block(m):
            return {"max": m, "bound_constant_observed": None if m is None else format_scalar(Fraction(m, n))}

        return {
            "condition_i": block(self.max_concurrency),
            "condition_ii": block(self.max_coplanarity),
            "condition_iii": block(self.regulus_spotcheck_max),
        }

    def to_json(self, top: int = 20) -> dict:
        out = {
            "n_points": self.n_points,
            "n_lines": self.n_lines,
            "n_lines2": self.n_lines2,
            "intersecting_pair_count": str(self.intersecting_pair_count),
            "coincident_pairs": str(self.coincident_pairs),
            "max_concurrency": self.max_concurrency,
            "max_coplanarity": self.max_coplanarity,
            "regulus_spotcheck_max": self.regulus_spotcheck_max,
            "threshold": self.threshold,
            "top_points": [b.to_json() for b in self.point_buckets[:top]],
            "top_planes": [b.to_json() for b in self.plane_buckets[:top]],
            "verdict": self.verdict(),
            "exceptional": [e.to_json() for e in self.exceptional],
        }
        if self.regulus is not None:
            out["regulus"] = {
                "max": self.regulus.max_count,
                "triples_checked": self.regulus.triples_checked,
                "diagnostic": self.regulus.diagnostic,
            }
        return out


def _sorted_buckets(kind: str, hist: dict) -> list[Bucket]:
    buckets = [Bucket(kind, where, tuple(sorted(members))) for where, members in hist.items()]
    key = (lambda b: (-b.multiplicity, b.where.h)) if kind == "point" else (lambda b: (-b.multiplicity, b.where.d))
    return sorted(buckets, key=key)


def audit(lines: Sequence[TaggedLine], lines2: Sequence[TaggedLine] | None = None, *,
          n_points: int | None = None, threshold: int | None = None,
          regulus_samples: int = 0, seed: int = 0, histograms: bool = True,
          workers: int | None = None) -> AuditReport:
    """Count intersecting pairs and bucket them by meeting point and common plane.

    Within one family the count is over ordered pairs including self-pairs,
    so it equals the number of quadruples solving the planar equation.  With
    ``lines2`` only cross-family pairs are counted and bucketed.  Buckets with
    more than ``threshold`` lines (default: the number of points) are rich.
    """
    for t in list(lines) + list(lines2 or []):
        if not isinstance(t.line, PlueckerLine):
            raise NonCanonicalInput(f"{t!r} does not carry a canonical PlueckerLine")
    if n_points is None:
        n_points = int(round(len(lines) ** 0.5))
    if threshold is None:
        threshold = n_points

    a = [t.line for t in lines]
    if lines2 is None:
        seen: dict[PlueckerLine, TaggedLine] = {}
        for t in lines:
            if t.line in seen:
                raise CoincidentLines(f"origins {seen[t.line].origin} and {t.origin} give the same line")
            seen[t.line] = t
        pairs = zero_pairs(a, workers=workers)
        count = len(a) + 2 * len(pairs)
        other = lines
        coincident = 0
    else:
        b = [t.line for t in lines2]
        pairs = zero_pairs(a, b, workers=workers)
        count = len(pairs)
        other = lines2
        coincident = sum(1 for i, j in pairs if a[i] == b[j])

    points: dict = defaultdict(set)
    planes: dict = defaultdict(set)
    if histograms:
        for i, j in pairs:
            L, M = lines[i], other[j]
            if L.line == M.line:
                continue
            pt = meet_point(L.line, M.line)
            pl = common_plane(L.line, M.line)
            points[pt].update((L.key, M.key))
            planes[pl].update((L.key, M.key))

    report = AuditReport(
        n_points=n_points,
        n_lines=len(lines),
        n_lines2=None if lines2 is None else len(lines2),
        intersecting_pair_count=count,
        coincident_pairs=coincident,
        point_buckets=_sorted_buckets("point", points),
        plane_buckets=_sorted_buckets("plane", planes),
        threshold=threshold,
    )
    if regulus_samples:
        pool = list(lines) + list(lines2 or [])
        report.regulus = regulus_spotcheck(pool, regulus_samples, seed)
    return report


def pairs_in_buckets(buckets: Sequence[Bucket]) -> int:
    return sum(comb(b.multiplicity, 2) for b in buckets)


# -- regulus condition ------------------------------------------------------------------

def regulus_spotcheck(lines: Sequence, samples: int = 200, seed: int = 0,
                      max_attempts: int | None = None) -> RegulusResult:
    """Sample triples of mutually skew lines; return the most family lines meeting all three.

    Enumerates every triple when there are no more than ``samples`` of them.
    """
    ls = [t.line if isinstance(t, TaggedLine) else t for t in lines]
    n = len(ls)
    if n < 3:
        raise TooFewLines("need at least three lines")
    coords, duals = _as_arrays(ls)

    def skew(i, j):
        return reciprocal_product(ls[i], ls[j]) != 0

    if comb(n, 3) <= samples:
        triples = ((i, j, k) for i in range(n) for j in range(i + 1, n) for k in range(j + 1, n))
    else:
        rng = SplitMix64(seed)
        attempts = max_attempts if max_attempts is not None else 50 * samples

        def gen():
            for _ in range(attempts):
                i, j, k = rng.choice_index(n), rng.choice_index(n), rng.choice_index(n)
                if len({i, j, k}) == 3:
                    yield tuple(sorted((i, j, k)))

        triples = gen()

    best, witness, checked = 0, None, 0
    for i, j, k in triples:
        if checked >= samples:
            break
        if not (skew(i, j) and skew(i, k) and skew(j, k)):
            continue
        checked += 1
        hits = (duals.dot(coords[i]) == 0) & (duals.dot(coords[j]) == 0) & (duals.dot(coords[k]) == 0)
        c = int(np.count_nonzero(hits))
        if c > best or witness is None:
            best, witness = max(best, c), (i, j, k)
    diag = "" if checked else "no mutually skew triple found"
    return RegulusResult(best, checked, witness if checked else None, diag)


# -- exceptional structures ---------------------------------------------------------------

@dataclass(frozen=True)
class ExceptionalStructure:
    kind: str
    bucket: Bucket
    confirmed: bool
    witness: dict

    def to_json(self) -> dict:
        return {"kind": self.kind, "confirmed": self.confirmed, "bucket": self.bucket.to_json(),
                "witness": _jsonable(self.witness)}


def _jsonable(x):
    if isinstance(x, Fraction):
        return format_scalar(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def line2_through(points: Sequence) -> tuple[int, int, int] | None:
    """Canonical (A:B:C) with A x + B y + C = 0 through all points, or None if not collinear.

    A single distinct point gives None as well.
    """
    pts = list(dict.fromkeys(tuple(p) for p in points))
    if len(pts) < 2:
        return None
    (x0, y0), (x1, y1) = pts[0], pts[1]
    A, B = y1 - y0, x0 - x1
    C = -(A * x0 + B * y0)
    if any(A * x + B * y + C != 0 for x, y in pts[2:]):
        return None
    return canonical_ints((A, B, C))


def _coordinate_form(bucket: Bucket) -> str:
    if bucket.kind == "point":
        h = bucket.where.h
        if h[0] == 0:
            return "ideal point"
        return "u3=+-1" if abs(h[3]) == abs(h[0]) else "generic"
    d = bucket.where.d
    if d[0] == 0:
        return "plane through origin"
    return "u1=+-u2" if abs(d[1]) == abs(d[2]) else "generic"


def detect_exceptional(family, points: Sequence, report: AuditReport) -> list[ExceptionalStructure]:
    """Match every rich bucket of ``report`` against the case's algebraic characterisation.

    Signature (1,1): member pairs must have zero M1-form on p - p' and zero
    M2-form on q - q'.  Degenerate: p - p' in a kernel of M1, q - q' in a
    kernel of M2.  Directions: member p's and q's are collinear in S.  Other
    families should have no rich buckets; any found is returned unconfirmed.
    """
    n = len(points)
    if report.n_points != n or report.n_lines != n * n:
        raise InconsistentReport("report was not produced from this point set")
    f = line_map(family)
    kind = "other"
    cm = None
    if isinstance(family, FormConfig):
        cm = case_matrices(family)
        kind = cm.kind
    elif isinstance(family, DirGFamily):
        kind = "dirG"

    out = []
    for bucket in report.rich_points + report.rich_planes:
        for _, i, j in bucket.members:
            if not (0 <= i < n and 0 <= j < n):
                raise InconsistentReport(f"member origin {(i, j)} out of range")
            line = f(points[i], points[j])
            ok = line.contains_point(bucket.where) if bucket.kind == "point" else line.lies_in(bucket.where)
            if not ok:
                raise InconsistentReport(f"line from {(i, j)} is not in bucket {bucket.where}")
        origins = [(points[i], points[j]) for _, i, j in bucket.members]
        out.append(_characterise(kind, cm, family, bucket, origins))
    return out


def _characterise(kind, cm, family, bucket: Bucket, origins) -> ExceptionalStructure:
    tag = f"{kind}_{bucket.kind}"
    form = _coordinate_form(bucket)
    if kind == "signature_1_1":
        bad = None
        pairs = 0
        for x in range(len(origins)):
            for y in range(x + 1, len(origins)):
                (p, q), (pp, qq) = origins[x], origins[y]
                dp = (p[0] - pp[0], p[1] - pp[1])
                dq = (q[0] - qq[0], q[1] - qq[1])
                pairs += 1
                if quad(cm.M1, dp) != 0 or quad(cm.M2, dq) != 0:
                    bad = (p, pp, q, qq)
                    break
            if bad:
                break
        return ExceptionalStructure(tag, bucket, bad is None,
                                    {"pairs_checked": pairs, "zero_forms": bad is None,
                                     "coordinate_form": form, "counterexample": bad})
    if kind == "degenerate":
        a, c, be, de = family.a, family.c, family.beta, family.delta
        kernels = set()
        bad = None
        for x in range(len(origins)):
            for y in range(x + 1, len(origins)):
                (p, q), (pp, qq) = origins[x], origins[y]
                dp = (p[0] - pp[0], p[1] - pp[1])
                dq = (q[0] - qq[0], q[1] - qq[1])
                kp = "left" if a[0] * dp[0] + a[1] * dp[1] == 0 else ("right" if c[0] * dp[0] + c[1] * dp[1] == 0 else None)
                kq = "left" if be[0] * dq[0] + be[1] * dq[1] == 0 else ("right" if de[0] * dq[0] + de[1] * dq[1] == 0 else None)
                if kp is None or kq is None:
                    bad = (p, pp, q, qq)
                    break
                kernels.add((kp, kq))
            if bad:
                break
        return ExceptionalStructure(tag, bucket, bad is None,
                                    {"kernels": sorted(kernels), "coordinate_form": form, "counterexample": bad})
    if kind.startswith("directions") or kind == "dirG":
        ps = [o[0] for o in origins]
        qs = [o[1] for o in origins]
        lp, lq = line2_through(ps), line2_through(qs)
        confirmed = lp is not None and lq is not None
        return ExceptionalStructure(tag, bucket, confirmed,
                                    {"p_line": lp, "q_line": lq,
                                     "p_points": len(set(ps)), "q_points": len(set(qs))})
    return ExceptionalStructure(f"unexpected_{bucket.kind}", bucket, False, {"coordinate_form": form})
