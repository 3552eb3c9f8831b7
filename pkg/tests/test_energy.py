from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kleinlines.energy import (Cover, PairValueSpec, cross_validate, quadruple_count, quadruple_count_naive,
                               split_cover, verify_cover)
from kleinlines.errors import CoverageFailure, NotOnSurface
from kleinlines.pointgen import collinear_heavy, hyperboloid, isotropic_adversarial, lattice, random2, sphere
from kleinlines.reductions import DirGFamily, preset_config

from conftest import vec2

DIAG = ((1, 0), (0, -1))
PLANAR = [
    PairValueSpec("euclidean"),
    PairValueSpec(preset_config("euclidean")),
    PairValueSpec.named("positive_definite", a=(1, 1), b=(0, 1)),
    PairValueSpec.named("minkowski"),
    PairValueSpec.named("degenerate", a=(1, 2), c=(0, 1)),
    PairValueSpec.named("directions", lam=1),
    PairValueSpec.named("directions", lam=2),
    PairValueSpec.named("directions", lam=Fraction(-1, 2)),
]


def test_energy_examples():
    rep = quadruple_count([(0, 0)], PairValueSpec("euclidean"))
    assert (rep.E_total, rep.E_nonzero) == (1, 0)
    rep = quadruple_count([(0, 0), (1, 0)], PairValueSpec("euclidean"))
    assert (rep.E_total, rep.E_nonzero) == (8, 4)
    assert quadruple_count(lattice(3).points, PairValueSpec("euclidean")).distinct_nonzero == 5


def test_cross_validate_examples():
    cv = cross_validate([(0, 0), (1, 0)], PairValueSpec("euclidean"))
    assert cv.equal and cv.E_total == cv.intersecting_pairs == 8
    cv = cross_validate(sphere(10, 1).points, PairValueSpec("sphere"))
    assert cv.equal
    cv = cross_validate([(t, t) for t in range(8)], PairValueSpec.named("minkowski"))
    assert cv.equal


@pytest.mark.parametrize("spec", PLANAR, ids=lambda s: s.kind)
@settings(max_examples=10)
@given(st.lists(vec2(3, 2), min_size=1, max_size=6, unique=True))
def test_hash_equals_naive_planar(spec, pts):
    h, n = quadruple_count(pts, spec), quadruple_count_naive(pts, spec)
    assert (h.E_total, h.E_nonzero) == (n.E_total, n.E_nonzero)
    assert h.E_total >= h.E_nonzero
    if h.cs_bound is not None:
        assert h.distinct_nonzero >= h.cs_bound


@pytest.mark.parametrize("spec", PLANAR, ids=lambda s: s.kind)
def test_cross_validate_planar(spec):
    for seed in range(3):
        pts = random2(6, seed, bound=3, den=1).points
        assert cross_validate(pts, spec).equal


@pytest.mark.parametrize("model,gen", [("sphere", sphere), ("hyperboloid", hyperboloid)])
def test_curved_models(model, gen):
    pts = gen(7, 2).points
    spec = PairValueSpec(model)
    h, n = quadruple_count(pts, spec), quadruple_count_naive(pts, spec)
    assert (h.E_total, h.E_nonzero) == (n.E_total, n.E_nonzero)
    assert cross_validate(pts, spec).equal


def test_sphere_zero_value_is_orthogonality():
    pts = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    rep = quadruple_count(pts, PairValueSpec("sphere"))
    assert rep.E_total == 9 + 36 and rep.E_nonzero == 9


def test_surface_checks():
    with pytest.raises(NotOnSurface):
        quadruple_count([(1, 0, 0), (0, 2, 0)], PairValueSpec("sphere"))
    with pytest.raises(NotOnSurface):
        quadruple_count([(0, 0, -1)], PairValueSpec("hyperboloid"))
    with pytest.raises(NotOnSurface):
        quadruple_count([(0, 0)], PairValueSpec("sphere"))


def test_directions_conventions():
    pts = collinear_heavy(9, 4, seed=1).points
    spec = PairValueSpec.named("directions", lam=1)
    cv = cross_validate(pts, spec)
    assert cv.equal
    frac = sum(1 for p in pts for pp in pts for q in pts for qq in pts
               if p[0] != pp[0] and q[0] != qq[0] and (p[1] - pp[1]) * (q[0] - qq[0]) == (q[1] - qq[1]) * (p[0] - pp[0]))
    assert cv.fraction_form == frac < cv.E_total


def test_dirg_counts():
    F = DirGFamily.parse(1, "p1", "p2", "q2", "q1")
    G = DirGFamily.parse(2, "p1", "p2", "q2", "q1")
    pts = random2(4, 1, bound=2, den=1).points
    spec = PairValueSpec((F, G))
    rep = quadruple_count(pts, spec)
    assert rep.method == "direct"
    assert rep.E_total == quadruple_count(pts, PairValueSpec.named("directions", lam=1)).E_total
    assert cross_validate(pts, spec).equal
    assert PairValueSpec.from_json(spec.to_json()) == spec


def test_monotone_in_points():
    pts = random2(9, 4, bound=3, den=1).points
    spec = PairValueSpec("euclidean")
    totals = [quadruple_count(pts[:k], spec).E_total for k in range(1, 10)]
    assert totals == sorted(totals)


def test_spec_json_round_trip():
    for spec in PLANAR + [PairValueSpec("sphere")]:
        assert PairValueSpec.from_json(spec.to_json()) == spec


# -- split cover ------------------------------------------------------------------------

def test_split_cover_two_isotropic_lines():
    pts = isotropic_adversarial(16).points
    cover = split_cover(pts, DIAG, DIAG)
    assert cover.entries
    for A, B in cover.entries:
        assert len(A) >= 1 and len(B) >= 1
        assert not set(A) & set(B)
        on_first = {i for i, p in enumerate(pts) if p[0] == -p[1]}
        assert set(A) <= on_first or not set(A) & on_first
    verify_cover(pts, DIAG, DIAG, cover)


def test_split_cover_general_position():
    pts = random2(10, 1).points
    cover = split_cover(pts, DIAG, DIAG)
    assert cover.entries == ((tuple(range(10)), tuple(range(10))),)


def test_split_cover_all_zero():
    cover = split_cover([(t, t) for t in range(5)], DIAG, DIAG)
    assert cover.entries == () and cover.diagnostic == "only value it returns is zero"


def test_split_cover_rank_one_form():
    pts = collinear_heavy(12, 5, seed=3).points
    M = ((1, 0), (0, 0))
    cover = split_cover(pts, M, M)
    verify_cover(pts, M, M, cover)


def test_split_cover_sizes_and_failure():
    pts = isotropic_adversarial(40).points
    cover = split_cover(pts, DIAG, DIAG)
    assert cover.min_size == 3
    assert all(len(A) >= 3 and len(B) >= 3 for A, B in cover.entries)
    one_way = Cover(((tuple(range(20)), tuple(range(20, 40))),), 3)
    with pytest.raises(CoverageFailure) as info:
        verify_cover(pts, DIAG, DIAG, one_way)
    i, j, k, l = info.value.witness
    assert (i < 20 <= j) != (k < 20 <= l)
    both = Cover(one_way.entries + ((tuple(range(20, 40)), tuple(range(20))),), 3)
    verify_cover(pts, DIAG, DIAG, both)
    overlapping = Cover(((tuple(range(21)), tuple(range(20, 40))),), 3)
    with pytest.raises(CoverageFailure):
        verify_cover(pts, DIAG, DIAG, overlapping)


def test_split_cover_different_forms():
    other = ((0, 1), (1, 0))
    pts = isotropic_adversarial(24).points
    cover = split_cover(pts, DIAG, other)
    assert set(cover.to_json()["roles"]) == {"left", "right"}
    verify_cover(pts, DIAG, other, cover)
    as_both = Cover(cover.entries, cover.min_size)
    with pytest.raises(CoverageFailure):
        verify_cover(pts, DIAG, other, as_both)
