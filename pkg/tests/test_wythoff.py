from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from regcomplex import kernel
from regcomplex.exact_geometry import Isometry
from regcomplex.lattices import cube_box
from regcomplex.wythoff import (
    BoundaryError,
    FaceClass,
    GeneratorSet,
    GeneratorSetError,
    ResourceLimitError,
    WythoffError,
    build_complex,
    canonical_face_key,
    faces_per_edge,
    sidecar,
    to_off,
    trace_base_face,
    vertex_figure,
)

F = Isometry.from_formula
coord = st.integers(-6, 6)
point = st.tuples(coord, coord, coord)


def _cube_gs() -> GeneratorSet:
    # 2-skeleton of the cubical tessellation
    return GeneratorSet(F("(-x,y,z)", (1, 0, 0)), F("(y,x,z)"), (F("(x,z,y)"), F("(x,y,-z)")))


@settings(max_examples=200, deadline=None)
@given(st.lists(point, min_size=3, max_size=8, unique=True), st.integers(0, 7), st.booleans())
def test_finite_key_invariant_under_rotation_and_reversal(cycle, shift, rev):
    i = shift % len(cycle)
    other = cycle[i:] + cycle[:i]
    if rev:
        other = other[::-1]
    assert canonical_face_key(cycle, None) == canonical_face_key(other, None)


@settings(max_examples=200, deadline=None)
@given(st.lists(point, min_size=2, max_size=4, unique=True), point, st.integers(-3, 3), st.booleans())
def test_infinite_key_invariant_under_reindexing(seg, period, q, rev):
    if period == (0, 0, 0):
        return
    n = len(seg)

    def at(i):
        k, r = divmod(i, n)
        return tuple(c + k * d for c, d in zip(seg[r], period))

    start = q * n + 1
    moved = [at(start + j) for j in range(n)]
    per = period
    if rev:
        moved = [at(start - j) for j in range(n)]
        per = tuple(-c for c in period)
    assert canonical_face_key(seg, period) == canonical_face_key(moved, per)


def test_face_class_parse_round_trip():
    for text in ("3_c", "6_c", "4_s", "6_s", "inf2", "inf3", "inf4"):
        assert str(FaceClass.parse(text)) == text


def test_cube_skeleton_build():
    gs = _cube_gs()
    face = trace_base_face(gs)
    assert str(face.cls) == "4_c" and face.period is None
    cr = build_complex(gs, cube_box(-3, 3))
    assert len(cr.vertices) == 7**3
    assert len(cr.edges) == 3 * 6 * 49
    assert {faces_per_edge(cr, e) for e in cr.interior_edges()} == {4}
    assert len(vertex_figure(cr, (0, 0, 0)).neighbor_positions) == 6


def test_python_and_compiled_kernels_agree(catalog):
    if kernel.orbit_bfs_ext is None:
        pytest.skip("compiled kernel not built")
    for name in ("K5_1_1", "K8_1_1", "K_0_1", "skel_apeir_3_4", "skel_4_3_4"):
        gs = catalog.resolve(name)
        steps = sorted({kernel.encode(g) for g in (gs.R0, gs.R1, *gs.G2)})
        bounds = (-4, 4, -4, 4, -4, 4)
        a = kernel.orbit_bfs_py(kernel.MUL, kernel.ACT, steps, bounds, 10**6, kernel.IDENTITY_INDEX)
        b = kernel.orbit_bfs_ext(kernel.MUL, kernel.ACT, steps, bounds, 10**6, kernel.IDENTITY_INDEX)
        assert list(a[0]) == list(b[0]) and a[1] == b[1]


def test_backends_build_identical_regions(catalog, monkeypatch):
    gs = catalog.resolve("K_2_1")
    box = cube_box(-2, 2)
    ref = build_complex(gs, box)
    monkeypatch.setattr(kernel, "orbit_bfs", kernel.orbit_bfs_py)
    py = build_complex(gs, box)
    assert (ref.vertices, ref.edges, set(ref.faces)) == (py.vertices, py.edges, set(py.faces))


def test_node_cap_reports_partial_region():
    with pytest.raises(ResourceLimitError) as info:
        build_complex(_cube_gs(), cube_box(-3, 3), node_cap=10)
    assert info.value.partial is not None and not info.value.partial.complete


def test_generator_validation():
    with pytest.raises(GeneratorSetError):
        GeneratorSet(F("(-x,y,z)", (1, 0, 0)), F("(-x,y,z)", (1, 0, 0)), ())
    with pytest.raises(GeneratorSetError):
        GeneratorSet(F("(y,x,z)"), F("(y,x,z)"), ())
    with pytest.raises(GeneratorSetError):
        GeneratorSet(F("(-x,y,z)", (1, 0, 0)), F("(y,x,z)"), (F("(y,x,z)"),))


def test_generator_json_round_trip(catalog):
    for name in ("K5_1_1", "K_0_1", "skel_apeir_3_3"):
        gs = catalog.resolve(name)
        assert GeneratorSet.from_json(gs.to_json()) == gs


def test_box_errors():
    gs = _cube_gs()
    with pytest.raises(WythoffError):
        build_complex(gs, ((0, -1), (0, 1), (0, 1)))
    with pytest.raises(WythoffError):
        build_complex(gs, cube_box(2, 4), require_base=True)
    assert not build_complex(gs, cube_box(2, 4)).vertices


def test_boundary_queries_raise():
    cr = build_complex(_cube_gs(), cube_box(-2, 2))
    with pytest.raises(BoundaryError):
        faces_per_edge(cr, ((2, 2, 2), (1, 2, 2)))
    with pytest.raises(BoundaryError):
        vertex_figure(cr, (2, 0, 0))


def test_off_export(catalog):
    cr = build_complex(catalog.resolve("K_2_2"), cube_box(-2, 2))
    text = to_off(cr)
    lines = text.splitlines()
    assert lines[0] == "OFF"
    nv, nf, ne = map(int, lines[1].split())
    assert nv == len(cr.vertices) and ne == len(cr.edges)
    polys = lines[2 + nv :]
    assert len(polys) == nf > 0
    assert all(p.split()[0] == "3" for p in polys)
    scaled = to_off(cr, Fraction(1, 2)).splitlines()
    assert scaled[1] == lines[1]


def test_off_has_no_polygons_for_helical_faces(catalog):
    cr = build_complex(catalog.resolve("K5_1_1"), cube_box(-2, 2))
    assert to_off(cr).splitlines()[1].split()[1] == "0"
    side = sidecar(cr, {"entry": "K5_1_1"})
    assert side["infinite_faces"] and not side["finite_faces"]
    assert all(f["class"] == "inf4" for f in side["infinite_faces"])
