from __future__ import annotations

import pytest

from regcomplex.lattices import cube_box, enumerate_points
from regcomplex.verify import (
    OracleError,
    Report,
    VerifyError,
    check_subcomplex,
    compare_regions,
    cube_petrie_polygons,
    petrie_window_violations,
    s_tiles,
    semiregular_S,
    triangular_oracle,
    verify_entry,
)
from regcomplex.wythoff import Face, Helix, Zigzag, build_complex

PLANE = ((1, 1, -1), 0)  # x + y - z = 0


def test_semiregular_s_small_box():
    s = semiregular_S(cube_box(0, 2), 1)
    assert len(s.vertices) == 14
    assert s.vertices == enumerate_points("L_aa0", cube_box(0, 2))
    # face centres of the 2x2x2 cube keep the 8 neighbours inside the box
    assert len(s.neighbors((1, 1, 0))) == 8 and len(s.neighbors((1, 0, 1))) == 8


def test_s_triangles_one_octahedron_one_tetrahedron():
    box = cube_box(-2, 2)
    inner = cube_box(-1, 1)
    for face, n_oct, n_tet in s_tiles(box).values():
        if face.vertices_in_box(inner):
            assert (n_oct, n_tet) == (1, 1)


def test_oracles_in_one_plane():
    box = cube_box(-2, 2)
    zig = Face(Zigzag, ((-1, 1, 0), (0, 0, 0)), (2, -1, 1))
    assert zig.key in triangular_oracle(PLANE, "two_zigzag", box)
    pet = Face(Zigzag, ((0, 1, 1), (0, 0, 0)), (1, -1, 0))
    assert pet.key in triangular_oracle(PLANE, "petrie", box)
    holes = triangular_oracle(PLANE, "two_hole", box)
    assert all(f.period is None and len(f.vertices) == 6 for f in holes.values())
    for kind in ("petrie", "two_zigzag"):
        for f in triangular_oracle(PLANE, kind, box).values():
            assert sum(f.period[i] * c for i, c in enumerate((1, 1, -1))) == 0


def test_oracle_errors():
    with pytest.raises(OracleError):
        triangular_oracle(((1, 1, -1), 1), "petrie", cube_box(-1, 1))
    with pytest.raises(OracleError):
        triangular_oracle(PLANE, "three_hole", cube_box(-1, 1))


def test_cube_petrie_polygons_are_petrie():
    polys = cube_petrie_polygons(cube_box(-1, 1))
    assert polys
    for f in polys.values():
        assert f.cls == Helix(3)
        assert all(abs(c) == 1 for c in f.period)
        assert petrie_window_violations(f) == []


def test_subcomplex_checks(cache):
    box = cube_box(-2, 2)
    k2 = cache.region("K2_1_1", box, 1)
    k3 = cache.region("K3_1_1", box, 1)
    assert check_subcomplex(k2, k3)
    assert not check_subcomplex(k3, k2)
    with pytest.raises(VerifyError):
        check_subcomplex(k2, cache.region("K3_1_1", cube_box(-3, 3), 2))
    with pytest.raises(VerifyError):
        compare_regions(k2, cache.region("K3_1_1", cube_box(-3, 3), 2))


@pytest.mark.parametrize("name", ["K8_1_1", "K6_1_1"])
def test_reports_pass(catalog, cache, box3, name):
    rep = verify_entry(name, box3, catalog, cache)
    assert rep.passed, rep.to_text()
    data = rep.to_json()
    assert data["entry"] == name and data["passed"]
    assert "PASS  g2" in rep.to_text()


def test_skeleton_on_small_box(catalog, cache):
    rep = verify_entry("skel_4_3_4", cube_box(0, 3), catalog, cache)
    assert rep.passed, rep.to_text()
    assert rep.interior_margin == 1
    detail = {c.name: c.detail for c in rep.checks}
    assert detail["face_mirror"] == "true"
    assert detail["flag_stabilizer"] == "order 2"


def test_degenerate_box_rejected(catalog):
    with pytest.raises(VerifyError):
        verify_entry("K5_1_1", ((0, 0), (0, 1), (0, 1)), catalog)


def test_skip_needs_reason():
    rep = Report("x")
    with pytest.raises(VerifyError):
        rep.skip("a", "")
    rep.skip("a", "not applicable")
    rep.add("b", False, "broken", {"why": (1, 2)})
    assert rep.status_of("a") == "skipped" and not rep.passed
    assert [c.name for c in rep.failures] == ["b"]
    assert "witness" in rep.to_text()


def test_lambda_image_of_k4_1_2_is_apeir_skeleton(catalog, cache, box3):
    rep = verify_entry("K4_1_2", box3, catalog, cache)
    assert rep.status_of("claim:lambda_image_equals:skel_apeir_3_4") == "pass"


def test_k2_2_equals_s(catalog):
    box = cube_box(-2, 2)
    cr = build_complex(catalog.resolve("K_2_2"), box, 1)
    assert not any(compare_regions(cr, semiregular_S(box, 1)).values())
