import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kleinlines.audit import (TaggedLine, audit, count_intersecting, detect_exceptional, line2_through,
                              pairs_in_buckets, regulus_spotcheck, tagged_lines, zero_pairs)
from kleinlines.errors import CoincidentLines, InconsistentReport, NonCanonicalInput, TooFewLines
from kleinlines.klein import PlueckerLine, plucker_from_points, reciprocal_product
from kleinlines.pointgen import collinear_heavy, isotropic_adversarial, lattice, random2, sphere
from kleinlines.reductions import DirGFamily, genr_holds, preset_config

from conftest import vec2

MINK = preset_config("minkowski", a=(1, 0), b=(0, 1))


def test_single_point_self_pair():
    assert audit(tagged_lines([(0, 0)], "euclidean")).intersecting_pair_count == 1


def test_two_points():
    rep = audit(tagged_lines([(0, 0), (1, 0)], "euclidean"))
    assert rep.intersecting_pair_count == 8


def test_minkowski_diagonal_plane():
    pts = [(t, t) for t in range(6)]
    rep = audit(tagged_lines(pts, MINK), n_points=6)
    assert rep.max_coplanarity >= 30
    assert rep.rich_planes
    found = detect_exceptional(MINK, pts, rep)
    planes = [e for e in found if e.bucket.kind == "plane"]
    assert planes and all(e.confirmed and e.witness["zero_forms"] for e in found)


def test_histogram_soundness():
    pts = lattice(3).points
    lines = tagged_lines(pts, "euclidean")
    rep = audit(lines)
    distinct_pairs = (rep.intersecting_pair_count - len(lines)) // 2
    assert pairs_in_buckets(rep.point_buckets) == distinct_pairs
    assert pairs_in_buckets(rep.plane_buckets) == distinct_pairs


@settings(max_examples=15)
@given(st.lists(vec2(4, 2), min_size=2, max_size=6, unique=True))
def test_histogram_soundness_random(pts):
    lines = tagged_lines(pts, "euclidean")
    rep = audit(lines)
    distinct_pairs = (rep.intersecting_pair_count - len(lines)) // 2
    assert pairs_in_buckets(rep.point_buckets) == distinct_pairs == pairs_in_buckets(rep.plane_buckets)
    for b in rep.point_buckets[:5]:
        members = {t.key: t.line for t in lines}
        assert all(members[m].contains_point(b.where) for m in b.members)


def test_regulus_triangle_has_no_skew_triple():
    tri = [plucker_from_points((1, 0, 0, 0), (1, 1, 0, 0)),
           plucker_from_points((1, 1, 0, 0), (1, 0, 1, 0)),
           plucker_from_points((1, 0, 1, 0), (1, 0, 0, 0))]
    res = regulus_spotcheck(tri, samples=10)
    assert res.max_count == 0 and res.triples_checked == 0 and res.diagnostic
    with pytest.raises(TooFewLines):
        regulus_spotcheck(tri[:2])


def test_regulus_lattice_and_sphere():
    res = regulus_spotcheck(tagged_lines(lattice(3).points, "euclidean"), samples=200, seed=1)
    assert res.triples_checked == 200 and res.max_count <= 18
    res = regulus_spotcheck(tagged_lines(sphere(8, 2).points, "sphere"), samples=100, seed=1)
    assert res.triples_checked == 100 and res.max_count <= 16


def test_regulus_count_matches_direct():
    lines = [t.line for t in tagged_lines(random2(5, 3, bound=3, den=1).points, "euclidean")]
    res = regulus_spotcheck(lines, samples=50, seed=4)
    i, j, k = res.witness
    direct = sum(1 for L in lines if all(reciprocal_product(L, lines[x]) == 0 for x in (i, j, k)))
    assert direct == res.max_count


def test_euclidean_random_has_no_exceptional():
    pts = random2(12, seed=5).points
    rep = audit(tagged_lines(pts, "euclidean"), n_points=12)
    assert detect_exceptional("euclidean", pts, rep) == []
    assert rep.max_concurrency <= 12 and rep.max_coplanarity <= 12


def test_directions_collinear_structure():
    pts = collinear_heavy(8, 5, seed=7).points
    fam = preset_config("directions", lam=1)
    rep = audit(tagged_lines(pts, fam), n_points=8)
    found = detect_exceptional(fam, pts, rep)
    assert len(found) == 1
    assert found[0].confirmed
    assert found[0].witness["p_line"] == line2_through(pts[:5]) == found[0].witness["q_line"]


def test_inconsistent_report():
    pts = [(t, t) for t in range(6)]
    rep = audit(tagged_lines(pts, MINK), n_points=6)
    with pytest.raises(InconsistentReport):
        detect_exceptional(MINK, pts[:5], rep)
    shifted = [(t, t + 1) for t in range(5)] + [(9, 0)]
    with pytest.raises(InconsistentReport):
        detect_exceptional(MINK, shifted, rep)


def test_input_validation():
    with pytest.raises(NonCanonicalInput):
        audit([TaggedLine((1, 0, 0, 0, 0, 0), (0, 0))])
    L = PlueckerLine((1, 0, 0, 0, 0, 0))
    with pytest.raises(CoincidentLines):
        audit([TaggedLine(L, (0, 0)), TaggedLine(L, (0, 1))])


def test_two_family_count_matches_equation():
    pts = random2(5, seed=2, bound=2, den=1).points
    F = DirGFamily.parse(1, "p1", "p2", "q2", "q1")
    G = DirGFamily.parse(2, "p1 + q1", "p2", "q2", "q1*p1")
    rep = audit(tagged_lines(pts, F, 1), tagged_lines(pts, G, 2))
    direct = sum(1 for p in pts for q in pts for pp in pts for qq in pts
                 if genr_holds(F.values(p, q), G.values(pp, qq)))
    assert rep.intersecting_pair_count == direct
    for b in rep.point_buckets:
        assert set(b.by_family()) <= {1, 2}


def test_parallel_merge_is_deterministic():
    pts = random2(17, seed=3, bound=4, den=1).points
    lines = [t.line for t in tagged_lines(pts, "euclidean")]
    assert len(lines) > 256
    assert zero_pairs(lines, workers=1) == zero_pairs(lines, workers=3)
    assert count_intersecting(lines) == count_intersecting(lines, workers=2)


def test_report_json_deterministic():
    pts = isotropic_adversarial(8).points
    a = audit(tagged_lines(pts, MINK), n_points=8, regulus_samples=50, seed=3)
    b = audit(tagged_lines(pts, MINK), n_points=8, regulus_samples=50, seed=3)
    a.exceptional = detect_exceptional(MINK, pts, a)
    b.exceptional = detect_exceptional(MINK, pts, b)
    ja, jb = json.dumps(a.to_json()), json.dumps(b.to_json())
    assert ja == jb
    data = a.to_json()
    assert set(data["verdict"]) == {"condition_i", "condition_ii", "condition_iii"}
    assert len(data["top_planes"]) <= 20
