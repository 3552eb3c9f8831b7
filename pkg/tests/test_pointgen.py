import json
from fractions import Fraction

import pytest

from kleinlines.errors import InvalidSpec
from kleinlines.pointgen import (PointSet, SplitMix64, collinear_heavy, generate, hyperboloid, hyperboloid_point,
                                 isotropic_adversarial, isotropic_lines, lattice, load_points, random2, sphere,
                                 sphere_point)


def test_splitmix_reference_values():
    # published first outputs for seed 0
    rng = SplitMix64(0)
    assert [rng.next_u64() for _ in range(3)] == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


def test_lattice():
    pts = lattice(3).points
    assert len(pts) == 9 and (0, 0) in pts and (2, 2) in pts


def test_surface_points():
    assert sphere_point(1, 0) == (1, 0, 0)
    assert sphere_point(0, 0) == (0, 0, -1)
    assert hyperboloid_point(Fraction(1, 2), 0) == (Fraction(4, 3), 0, Fraction(5, 3))
    with pytest.raises(InvalidSpec):
        hyperboloid_point(1, 0)


def test_surface_sets_exact():
    for p in sphere(40, seed=3):
        assert sum(x * x for x in p) == 1
    for p in hyperboloid(40, seed=3):
        assert p[2] ** 2 - p[0] ** 2 - p[1] ** 2 == 1 and p[2] > 0


def test_determinism():
    assert random2(30, seed=9) == random2(30, seed=9)
    assert random2(30, seed=9) != random2(30, seed=10)
    assert sphere(10, 4) == generate("sphere:10", 4)


def test_no_duplicates():
    with pytest.raises(InvalidSpec):
        PointSet(((0, 0), (0, 0)))
    pts = random2(40, seed=1, bound=3, den=1).points
    assert len(set(pts)) == 40
    with pytest.raises(InvalidSpec):
        random2(50, seed=1, bound=3, den=1)


def test_isotropic_adversarial_zero_pairs():
    for n in (6, 12, 13, 20):
        pts = isotropic_adversarial(n).points
        zero = sum(1 for p in pts for q in pts if (p[0] - q[0]) ** 2 - (p[1] - q[1]) ** 2 == 0)
        k1 = (n + 1) // 2
        assert zero == k1 ** 2 + (n - k1) ** 2


def test_isotropic_lines():
    for M in (((1, 0), (0, -1)), ((0, 1), (1, 0)), ((2, 3), (3, 4)), ((1, 0), (0, 0))):
        for d in isotropic_lines(M):
            assert d[0] * (M[0][0] * d[0] + M[0][1] * d[1]) + d[1] * (M[1][0] * d[0] + M[1][1] * d[1]) == 0
    with pytest.raises(InvalidSpec):
        isotropic_lines(((1, 0), (0, 1)))
    with pytest.raises(InvalidSpec):
        isotropic_lines(((1, 0), (0, -2)))


def test_collinear_heavy():
    pts = collinear_heavy(12, 6, seed=2).points
    (x0, y0), (x1, y1) = pts[0], pts[1]
    on = [p for p in pts if (p[0] - x0) * (y1 - y0) - (p[1] - y0) * (x1 - x0) == 0]
    assert len(on) == 6 and len(pts) == 12


@pytest.mark.parametrize("spec", ["lattice", "lattice:x", "cube:3", "collinear_heavy:3:5", "lattice:2:2"])
def test_bad_specs(spec):
    with pytest.raises(InvalidSpec):
        generate(spec)


def test_json_and_csv_round_trip(tmp_path):
    ps = sphere(7, seed=1)
    ps.save(tmp_path / "s.json")
    assert load_points(tmp_path / "s.json") == ps
    assert json.loads((tmp_path / "s.json").read_text())["surface"] == "sphere"
    (tmp_path / "s.csv").write_text("# x,y\n1/2,3\n-4/6,0\n")
    assert load_points(tmp_path / "s.csv").points == ((Fraction(1, 2), 3), (Fraction(-2, 3), 0))


def test_surface_tag_validated():
    with pytest.raises(InvalidSpec):
        PointSet(((1, 0, 0), (0, 2, 0)), "sphere")
    with pytest.raises(InvalidSpec):
        PointSet(((0, 0, -1),), "hyperboloid")
