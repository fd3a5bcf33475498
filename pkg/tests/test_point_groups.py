from __future__ import annotations

import itertools

import pytest

from regcomplex.exact_geometry import Isometry, all_signed_permutations, mat_det, mat_mul
from regcomplex.point_groups import (
    InvalidEdgeStabilizerError,
    PointGroupError,
    classify_edge_stabilizer,
    closure,
    identify,
    isometry_closure,
    mirror_vector,
    special_group,
)

MATS = all_signed_permutations()
F = Isometry.from_formula
MINUS_I = ((-1, 0, 0), (0, -1, 0), (0, 0, -1))


def _is_closed(elements) -> bool:
    return all(mat_mul(a, b) in elements for a in elements for b in elements)


def test_closure_idempotent_on_all_pairs():
    seen = {}
    for a, b in itertools.combinations_with_replacement(MATS, 2):
        g = closure([a, b])
        assert a in g.elements and b in g.elements
        seen[g.elements] = g
    # closing an already closed set with all of it as generators adds nothing
    for els, g in seen.items():
        assert closure(els).elements == els
        assert closure([*g.generators, *list(els)[:3]]).elements == els
    for els in list(seen)[::10]:
        assert _is_closed(els)
    # orders of two-generated subgroups of the full group
    assert {g.order for g in seen.values()} <= {1, 2, 3, 4, 6, 8, 12, 16, 24, 48}
    assert 48 in {g.order for g in seen.values()}


def test_closure_order_divides_48():
    for a in MATS:
        assert 48 % closure([a]).order == 0


def test_identify_decision_table():
    full = closure(MATS)
    assert identify(full).name == "[3,4]"
    rot = full.rotation_subgroup()
    assert identify(rot).name == "[3,4]+"
    tetra_rot = closure([((0, 1, 0), (0, 0, 1), (1, 0, 0)), ((-1, 0, 0), (0, -1, 0), (0, 0, 1))])
    assert identify(tetra_rot).name == "[3,3]+"
    assert identify(closure(list(tetra_rot.elements) + [MINUS_I])).name == "[3,3]*"
    td = closure(list(tetra_rot.elements) + [((0, 1, 0), (1, 0, 0), (0, 0, 1))])
    assert identify(td).name == "[3,3]"
    d4h = closure([((0, 1, 0), (-1, 0, 0), (0, 0, 1)), ((1, 0, 0), (0, 1, 0), (0, 0, -1)), ((-1, 0, 0), (0, 1, 0), (0, 0, 1))])
    assert identify(d4h).name == "[4,2]"
    assert identify(closure([((0, 1, 0), (0, 0, 1), (1, 0, 0))])).name == "C3"


def test_identify_is_invariant_under_conjugation():
    groups = {closure([a, b]).elements for a, b in itertools.combinations(MATS[::3], 2)}
    for els in list(groups)[:40]:
        g = closure(els)
        lab = identify(g)
        for c in MATS[::7]:
            ct = tuple(zip(*c))
            conj = closure([mat_mul(mat_mul(ct, m), c) for m in els])
            assert identify(conj).name == lab.name


def test_label_flags_consistent():
    for a, b in itertools.combinations(MATS[::2], 2):
        g = closure([a, b])
        lab = identify(g)
        assert lab.order == g.order
        assert lab.proper == all(mat_det(m) == 1 for m in g.elements)
        assert lab.inversion == (MINUS_I in g.elements)


def test_edge_stabilizer_classification():
    edge = ((0, 0, 0), (1, 0, 0))
    refl_a, refl_b = F("(x,-y,z)"), F("(x,y,-z)")
    assert classify_edge_stabilizer([refl_a, refl_b], edge).label() == "D2"
    quarter = F("(x,-z,y)")
    spec = classify_edge_stabilizer([quarter], edge)
    assert (spec.kind, spec.r) == ("cyclic", 4)
    spec = classify_edge_stabilizer([quarter, refl_a], edge)
    assert (spec.kind, spec.r, spec.label()) == ("dihedral", 8, "D4")
    assert classify_edge_stabilizer([F("(x,-y,-z)")], edge).label() == "C2"
    diag = ((0, 0, 0), (1, 1, 1))
    assert classify_edge_stabilizer([F("(y,z,x)")], diag).label() == "C3"
    assert classify_edge_stabilizer([F("(y,z,x)"), F("(y,x,z)")], diag).label() == "D3"
    with pytest.raises(InvalidEdgeStabilizerError):
        classify_edge_stabilizer([F("(y,x,z)")], edge)


def test_isometry_closure_finite_and_infinite():
    # two involutions sharing the point (1/2, 0, 1/2) generate a group of order 4
    g = isometry_closure([F("(-x,y,-z)", (1, 0, 1)), F("(x,y,-z)", (0, 0, 1))])
    assert len(g) == 4
    # parallel mirrors generate translations
    with pytest.raises(PointGroupError):
        isometry_closure([F("(-x,y,z)", (1, 0, 0)), F("(-x,y,z)")], limit=20)


def test_mirror_vector_and_special_group():
    r0 = F("(-x,y,-z)", (1, 0, 1))
    r1 = F("(-x,z,y)")
    assert mirror_vector(r0, r1) == (1, 1)
    with pytest.raises(PointGroupError):
        mirror_vector(F("(y,z,x)"), r1)
    assert identify(special_group([r0, r1, F("(z,y,x)"), F("(x,y,-z)")])).order >= 8
