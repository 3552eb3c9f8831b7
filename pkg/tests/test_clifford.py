from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from kleinlines.clifford import (BASIS, CliffordElement, geometric_product, lpq_rotor, norm_scalar, rotor_action,
                                 rotor_line, rotor_line_to_plucker, rotor_system)
from kleinlines.errors import Antipodal, DegenerateRotor, NotOnSurface
from kleinlines.klein import PlueckerLine
from kleinlines.pointgen import sphere_point
from kleinlines.reductions import map_constant_curvature

from conftest import rationals

E = CliffordElement.basis
elements = st.lists(rationals(5, 3), min_size=8, max_size=8).map(CliffordElement)
sphere_points = st.builds(sphere_point, rationals(6, 4), rationals(6, 4))


def test_generators():
    assert E("e1") * E("e1") == CliffordElement.scalar(1)
    assert geometric_product(E("e1"), E("e2")) == E("e12") == E("e1") * E("e2")
    assert E("e2") * E("e1") == -E("e12")
    assert E("e3") * E("e1") == E("e31")
    assert E("e1") * E("e2") * E("e3") == E("e123")
    assert (E("e23") + E("e31")) * (-E("e23") - E("e31")) == CliffordElement.scalar(2)


def test_bivectors_square_to_minus_one():
    for name in ("e23", "e31", "e12"):
        assert E(name) * E(name) == CliffordElement.scalar(-1)
    assert E("e123") * E("e123") == CliffordElement.scalar(-1)


def test_conjugation_signs():
    x = CliffordElement(range(1, 9))
    assert x.conjugate().c == (1, -2, -3, -4, -5, -6, -7, 8)
    assert E("e12").conjugate() == -E("e12")


@given(elements, elements, elements)
def test_associative_and_distributive(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


@given(elements, elements)
def test_conjugation_reverses_products(x, y):
    assert (x * y).conjugate() == y.conjugate() * x.conjugate()


def test_rotor_action_examples():
    p = CliffordElement.vector((3, -1, 2))
    assert rotor_action(CliffordElement.scalar(1), p) == p
    assert rotor_action(E("e23") + E("e31"), (1, 0, 0)) == CliffordElement.vector((0, 2, 0))
    assert rotor_action(E("e12"), (0, 0, 1)) == CliffordElement.vector((0, 0, 1))
    with pytest.raises(DegenerateRotor):
        rotor_action(CliffordElement.even((0, 0, 0, 0)), (1, 0, 0))
    with pytest.raises(DegenerateRotor):
        rotor_action(E("e1"), (1, 0, 0))


@given(st.lists(rationals(5, 3), min_size=4, max_size=4), st.tuples(rationals(), rationals(), rationals()))
def test_norm_scaling(s, p):
    g = CliffordElement.even(s)
    assume(norm_scalar(g) != 0)
    out = rotor_action(g, p)
    pv = CliffordElement.vector(p)
    assert out.is_grade(1)
    assert (out * out.conjugate()).c[0] == norm_scalar(g) ** 2 * (pv * pv.conjugate()).c[0]


def test_rotor_line_examples():
    a, b = rotor_line((1, 0, 0), (0, 1, 0))
    for s in (a, b):
        assert s[0] == -s[3] and s[1] == s[2]
    assert {tuple(x) for x in rotor_line((0, 0, 1), (0, 0, 1))} == {(1, 0, 0, 0), (0, 0, 0, 1)}
    with pytest.raises(Antipodal):
        rotor_line((1, 0, 0), (-1, 0, 0))
    with pytest.raises(NotOnSurface):
        rotor_line((1, 0, 0), (0, 2, 0))


def test_rotor_system_rank_two():
    from kleinlines._exact import rank
    assert rank(rotor_system(sphere_point(1, 2), sphere_point(-3, 1))) == 2


def test_plucker_examples():
    assert rotor_line_to_plucker((1, 0, 0), (0, 1, 0)) == PlueckerLine((1, 1, 0, 1, -1, 0))
    assert rotor_line_to_plucker((1, 0, 0), (0, 1, 0)) == map_constant_curvature("sphere", (1, 0, 0), (0, 1, 0))
    assert rotor_line_to_plucker((0, 0, 1), (0, 0, 1)).coords == (0, 0, 1, 0, 0, 0)
    with pytest.raises(Antipodal):
        rotor_line_to_plucker((1, 0, 0), (-1, 0, 0))


@given(sphere_points, sphere_points)
def test_rotor_line_matches_sphere_family(p, q):
    assume(any(a != -b for a, b in zip(p, q)))
    assert rotor_line_to_plucker(p, q) == map_constant_curvature("sphere", p, q)
    for s in rotor_line(p, q):
        g = CliffordElement.even(s)
        assert rotor_action(g, p) == CliffordElement.vector(q) * norm_scalar(g)


@given(sphere_points, sphere_points, rationals(), rationals())
def test_parameterised_rotors_solve_the_equation(p, q, c, s):
    assume(any(a != -b for a, b in zip(p, q)))
    g = lpq_rotor(p, q, c, s)
    assert g * CliffordElement.vector(p) == CliffordElement.vector(q) * g


def test_e13_variant_fails():
    p, q = sphere_point(1, 2), sphere_point(3, -1)
    assert rotor_line_to_plucker(p, q, variant="e13") != map_constant_curvature("sphere", p, q)


def test_json_round_trip():
    x = CliffordElement((1, 2, 3, 4, 5, 6, 7, 8)) * CliffordElement.scalar(Fraction(3, 7))
    assert CliffordElement.from_json(x.to_json()) == x
    assert len(BASIS) == 8
