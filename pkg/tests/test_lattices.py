from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from regcomplex.lattices import (
    LABELS,
    LatticeError,
    VertexSetLabel,
    box_points,
    contains,
    cube_box,
    enumerate_points,
    grow,
    in_box,
    shrink,
)

BOX4 = cube_box(-4, 4)


def _span(basis, box, reach: int = 8) -> set:
    """Integer combinations of ``basis`` that fall in ``box``."""
    out = set()
    for coeffs in itertools.product(range(-reach, reach + 1), repeat=len(basis)):
        p = tuple(sum(c * b[i] for c, b in zip(coeffs, basis)) for i in range(3))
        if in_box(p, box):
            out.add(p)
    return out


def _shift(points, t) -> set:
    return {tuple(a + b for a, b in zip(p, t)) for p in points}


def _fr(points) -> set:
    return {tuple(Fraction(c) for c in p) for p in points}


FCC = [(1, 1, 0), (1, 0, 1), (0, 1, 1)]
BCC = [(2, 0, 0), (0, 2, 0), (1, 1, 1)]
Z3 = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def _oracle(name: str, box) -> set:
    big = grow(box, 4)
    if name == "aZ3":
        pts = _span(Z3, box)
    elif name == "L_aa0":
        pts = _span(FCC, box)
    elif name == "L_aaa":
        pts = _span(BCC, box)
    elif name == "V_a":
        # Z^3 minus the BCC coset through (0, 0, 1)
        pts = _span(Z3, box) - _shift(_span(BCC, big), (0, 0, 1))
    else:
        fcc2 = [tuple(2 * c for c in b) for b in FCC]
        pts = _span(fcc2, box) | {p for p in _shift(_span(fcc2, big), (1, -1, 1)) if in_box(p, box)}
    return _fr(p for p in pts if in_box(p, box))


@pytest.mark.parametrize("name", LABELS)
def test_enumeration_matches_span_oracle(name):
    assert enumerate_points(name, BOX4) == _oracle(name, BOX4)


@pytest.mark.parametrize("name", LABELS)
def test_membership_agrees_with_enumeration_exhaustive(name):
    members = enumerate_points(name, BOX4)
    for p in box_points(BOX4):
        assert contains(name, p) == (tuple(Fraction(c) for c in p) in members)


def test_w_a_is_union_of_two_cosets():
    fcc2 = enumerate_points("L_aa0", cube_box(-2, 2))
    fcc2 = {tuple(2 * c for c in p) for p in fcc2}
    w = enumerate_points("W_a", BOX4)
    expect = {p for p in fcc2 if in_box(p, BOX4)}
    expect |= {p for p in _shift(fcc2, (1, -1, 1)) if in_box(p, BOX4)}
    assert w == _fr(expect)


def test_lattice_inclusions():
    z = enumerate_points("aZ3", BOX4)
    fcc = enumerate_points("L_aa0", BOX4)
    bcc = enumerate_points("L_aaa", BOX4)
    v = enumerate_points("V_a", BOX4)
    w = enumerate_points("W_a", BOX4)
    assert fcc < z and bcc < z and v < z and w < z
    assert len(z) == 9**3
    assert w < bcc | fcc | v


def test_scaled_labels():
    half = VertexSetLabel("L_aa0", Fraction(1, 2))
    assert contains(half, (Fraction(1, 2), Fraction(1, 2), 0))
    assert not contains(half, (Fraction(1, 2), 0, 0))
    assert not contains("aZ3", (Fraction(1, 2), 0, 0))


@given(st.tuples(*[st.integers(-20, 20)] * 3), st.tuples(*[st.integers(-3, 3)] * 3))
def test_membership_is_translation_invariant_by_own_vectors(p, k):
    for name, basis in (("L_aa0", FCC), ("L_aaa", BCC)):
        t = tuple(sum(c * b[i] for c, b in zip(k, basis)) for i in range(3))
        q = tuple(a + b for a, b in zip(p, t))
        assert contains(name, p) == contains(name, q)


def test_aliases_and_errors():
    assert VertexSetLabel("FCC").name == "L_aa0"
    assert VertexSetLabel("BCC").name == "L_aaa"
    with pytest.raises(LatticeError):
        VertexSetLabel("hcp")


def test_box_helpers():
    b = cube_box(-3, 3)
    assert shrink(b, 2) == cube_box(-1, 1)
    assert grow(shrink(b, 1), 1) == b
    assert len(list(box_points(b))) == 343
