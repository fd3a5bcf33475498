from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from regcomplex.exact_geometry import (
    GeometryError,
    Isometry,
    all_signed_permutations,
    apply,
    compose,
    fixed_point,
    fixed_space_dimension,
    half_turn_axis,
    inverse,
    mat_det,
    mat_mul,
    mat_transpose,
    matrix_order,
    norm2,
    reflection_normal,
    rotation_data,
    sub,
    vec,
)

MATS = all_signed_permutations()
IDENT = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
HALVES = [Fraction(k, 2) for k in range(-4, 5)]
SMALL_T = [vec(t) for t in itertools.product((0, 1), repeat=3)] + [vec(Fraction(1, 2), 0, Fraction(-1, 2))]

fractions = st.sampled_from(HALVES)
points = st.tuples(fractions, fractions, fractions)
isometries = st.builds(Isometry, st.sampled_from(MATS), points)


def test_48_distinct_orthogonal_matrices():
    assert len(set(MATS)) == 48
    for m in MATS:
        assert mat_mul(m, mat_transpose(m)) == IDENT
        assert mat_det(m) in (1, -1)
    assert sum(mat_det(m) == 1 for m in MATS) == 24


def test_matrix_group_laws_exhaustive():
    table = {(a, b): mat_mul(a, b) for a in MATS for b in MATS}
    assert set(table.values()) == set(MATS)
    for a in MATS:
        assert table[a, IDENT] == a == table[IDENT, a]
        assert table[a, mat_transpose(a)] == IDENT
    for a, b, c in itertools.product(MATS, repeat=3):
        assert table[table[a, b], c] == table[a, table[b, c]]


def test_isometry_inverse_and_identity_exhaustive():
    e = Isometry.identity()
    for m in MATS:
        for t in SMALL_T:
            g = Isometry(m, t)
            assert compose(g, inverse(g)) == e == compose(inverse(g), g)
            assert compose(g, e) == g == compose(e, g)
            assert inverse(inverse(g)) == g


def test_compose_is_apply_then():
    # right action: compose(a, b) maps x to b(a(x))
    for m1, m2 in itertools.product(MATS[::5], MATS[::7]):
        a = Isometry(m1, (1, 0, Fraction(1, 2)))
        b = Isometry(m2, (0, -1, 1))
        for p in [(0, 0, 0), (1, 2, 3), (Fraction(1, 2), -1, 0)]:
            assert apply(compose(a, b), p) == b.apply(a.apply(p))
            assert a.then(b) == compose(a, b)


@settings(max_examples=300, deadline=None)
@given(isometries, isometries, isometries)
def test_associativity(a, b, c):
    assert compose(compose(a, b), c) == compose(a, compose(b, c))


@settings(max_examples=300, deadline=None)
@given(isometries, points, points)
def test_distances_preserved(g, p, q):
    assert norm2(sub(g.apply(p), g.apply(q))) == norm2(sub(p, q))


@settings(max_examples=200, deadline=None)
@given(isometries)
def test_order_divides_period(g):
    k = g.order()
    if k is None:
        assert g.translation != (0, 0, 0) or matrix_order(g.linear) > 48
    else:
        assert g.power(k).is_identity()
        assert k % matrix_order(g.linear) == 0


def _sympy_fixed_dim(g: Isometry) -> int | None:
    x = sympy.symbols("x0:3")
    m = sympy.Matrix(g.linear)
    t = sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in g.translation]])
    row = sympy.Matrix([list(x)])
    eqs = list(row * m + t - row)
    sol = sympy.linsolve(eqs, *x)
    if sol == sympy.EmptySet:
        return None
    (expr,) = sol
    free = set().union(*(sympy.sympify(e).free_symbols for e in expr))
    return len(free)


def test_fixed_space_dimension_matches_sympy_exhaustive():
    for m in MATS:
        for t in SMALL_T:
            g = Isometry(m, t)
            assert fixed_space_dimension(g) == _sympy_fixed_dim(g), g


def test_fixed_point_is_fixed():
    for m in MATS:
        for t in SMALL_T:
            g = Isometry(m, t)
            p = fixed_point(g)
            if fixed_space_dimension(g) is None:
                assert p is None
            elif p is not None:
                assert g.apply(p) == p


def test_involution_kinds():
    # point reflection, half-turn and plane reflection have fixed spaces of dimension 0, 1, 2
    assert fixed_space_dimension(Isometry.point_reflection((Fraction(1, 2), 0, Fraction(1, 2)))) == 0
    assert fixed_space_dimension(Isometry.from_formula("(-x,y,-z)", (1, 0, 1))) == 1
    assert fixed_space_dimension(Isometry.from_formula("(y,x,z)")) == 2
    assert fixed_space_dimension(Isometry.from_formula("(x,y,z)", (1, 0, 0))) is None


def test_displayed_generators_are_involutions(catalog):
    for e in catalog:
        if e.kind not in ("explicit", "apeir"):
            continue
        gs = catalog.resolve(e.name)
        assert gs.R0.is_involution(), e.name
        assert gs.R1.is_involution(), e.name
        assert gs.R0.apply(gs.base_vertex) != gs.base_vertex


def test_rotation_data_classes():
    assert rotation_data(IDENT).order == 1
    assert half_turn_axis(((-1, 0, 0), (0, 1, 0), (0, 0, -1))) == (0, 1, 0)
    assert reflection_normal(((0, 1, 0), (1, 0, 0), (0, 0, 1))) == (1, -1, 0)
    three = rotation_data(((0, 1, 0), (0, 0, 1), (1, 0, 0)))
    assert (three.order, three.angle_class, three.axis) == (3, "2pi/3", (1, 1, 1))
    counts = {}
    for m in MATS:
        rd = rotation_data(m)
        counts[rd.proper, rd.order] = counts.get((rd.proper, rd.order), 0) + 1
    assert counts[True, 2] == 9 and counts[True, 3] == 8 and counts[True, 4] == 6


def test_formula_round_trip():
    for m in MATS:
        g = Isometry(m, (Fraction(1, 2), -1, 0))
        images = g.describe().split("-> ")[1].split(" +")[0]
        assert Isometry.from_formula(images, g.translation) == g
        assert Isometry.from_json(g.to_json()) == g


@pytest.mark.parametrize("bad", ["(x,y)", "(x,y,w)", "(2x,y,z)"])
def test_formula_errors(bad):
    with pytest.raises(GeometryError):
        Isometry.from_formula(bad)


def test_translation_denominators_restricted():
    with pytest.raises(GeometryError):
        Isometry(IDENT, (Fraction(1, 3), 0, 0))
