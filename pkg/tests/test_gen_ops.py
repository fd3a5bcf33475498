from __future__ import annotations

from fractions import Fraction

import pytest

from regcomplex import gen_ops
from regcomplex.catalog import apply_operation, resolve_element_any
from regcomplex.exact_geometry import Isometry, fixed_space_dimension
from regcomplex.gen_ops import (
    Constraints,
    InvalidElementError,
    PreconditionError,
    ReconstructionError,
    lambda0,
    lambda1,
    petrie_lambda,
    reconstruct_generators,
    resolve_element,
)
from regcomplex.lattices import cube_box
from regcomplex.point_groups import mirror_vector
from regcomplex.verify import compare_regions, congruent_regions
from regcomplex.wythoff import build_complex, trace_base_face

F = Isometry.from_formula

K02_CONSTRAINTS = {
    "mirror_vector": [0, 2],
    "twin": [1, 0, 1],
    "g2": {"kind": "dihedral", "order": 4},
    "r": 4,
    "face": "inf2",
    "vertex_figure": "cuboctahedron",
    "vertex_set": "L_aa0",
    "special_group": "[3,4]",
    "face_prefix": [[0, 1, 1], [0, 0, 0], [1, 0, 1]],
}


def _same(a, b) -> bool:
    return (a.R0, a.R1, set(a.G2)) == (b.R0, b.R1, set(b.G2))


def test_k01_from_k51(catalog):
    base = catalog.resolve("K5_1_1")
    k01 = lambda0(base, resolve_element(base, "R2hat"))
    assert mirror_vector(k01.R0, k01.R1) == (0, 1)
    # the new R0 is the point reflection in (1/2, 0, 1/2)
    assert k01.R0 == Isometry.point_reflection((Fraction(1, 2), 0, Fraction(1, 2)))
    assert fixed_space_dimension(k01.R0) == 0
    assert _same(k01, catalog.resolve("K_0_1"))


@pytest.mark.parametrize("name", ["K_0_1", "K_0_2", "K_2_1", "K_2_2", "K1_1_1", "K2_1_1", "K3_1_1", "K4_1_1"])
def test_double_application_restores_generators(catalog, name):
    e = catalog.entry(name)
    base = catalog.resolve(e.base)
    r = resolve_element_any(base, e.source["element"])
    op = lambda0 if e.source["op"] == "lambda0" else lambda1
    img = op(base, r)
    assert _same(img, catalog.resolve(name))
    assert _same(op(img, r), base)


def test_invalid_element(catalog):
    base = catalog.resolve("K5_1_1")
    with pytest.raises(InvalidElementError):
        lambda0(base, base.R0)
    with pytest.raises(InvalidElementError):
        resolve_element(base, "nope")
    with pytest.raises(InvalidElementError):
        apply_operation(base, "lambda0", "R0")


def test_selectors_resolve_in_g2(catalog):
    gs = catalog.resolve("K_0_2")
    g2 = set(gs.g2_elements())
    ht = resolve_element(gs, "halfturn")
    assert ht in g2 and fixed_space_dimension(ht) == 1
    assert resolve_element(gs, "R2") == ht
    gs = catalog.resolve("K3_1_2")
    assert resolve_element(gs, "perp_R1") in set(gs.g2_elements())


def test_lambda1_needs_involutory_product(catalog):
    gs = catalog.resolve("K2_1_2")  # cyclic G2 of order 3
    rot = gs.G2[0]
    with pytest.raises(PreconditionError):
        lambda1(gs, rot)


def test_petrie_lambda_swaps_mirror_vectors():
    for q in sorted(gen_ops.APEIR_Q):
        ap = gen_ops.apeir(q)
        cyc = ap.skeleton_cyclic()
        pet = petrie_lambda(cyc, ap.T[3])
        assert mirror_vector(cyc.R0, cyc.R1) == (0, 2)
        assert mirror_vector(pet.R0, pet.R1) == (0, 1)
        assert _same(petrie_lambda(pet, ap.T[3]), cyc)


def test_petrie_lambda_preconditions(catalog):
    ap = gen_ops.apeir("octa34")
    with pytest.raises(PreconditionError):
        petrie_lambda(ap.skeleton(), ap.T[3])  # dihedral G2
    with pytest.raises(PreconditionError):
        petrie_lambda(ap.skeleton_cyclic(), F("(x,y,z)", (1, 0, 0)))


def test_apeir_skeleton_forms_build_same_region():
    box = cube_box(-2, 2)
    for q in sorted(gen_ops.APEIR_Q):
        ap = gen_ops.apeir(q)
        a = build_complex(ap.skeleton(), box)
        b = build_complex(ap.skeleton_cyclic(), box)
        assert not any(compare_regions(a, b).values())


def test_k4_1_1_from_k7_1_2(catalog):
    base = catalog.resolve("K7_1_2")
    gs = lambda1(base, resolve_element(base, "perp_R1"))
    face = trace_base_face(gs)
    assert str(face.cls) == "inf4"


def test_unpinned_reconstruction_is_congruent(catalog):
    raw = catalog.entry("K7_1_2").source["constraints"]
    free = {k: v for k, v in raw.items() if k not in ("face_prefix", "r0_axis")}
    res = reconstruct_generators(free)
    assert res.unique and res.n_hits > 1
    box = cube_box(-2, 2)
    regions = [build_complex(gs, box) for gs in res.hits]
    assert all(congruent_regions(regions[0], r) for r in regions[1:])


def test_catalog_reconstructions_unique(catalog):
    for i in range(1, 9):
        res = catalog.reconstruction(f"K{i}_1_2")
        assert res.unique and res.n_hits >= 1, res.summary()


def test_k02_reconstruction_from_computed_period(catalog):
    res = reconstruct_generators({**K02_CONSTRAINTS, "period": [1, -1, 0]})
    region = build_complex(res.generators, cube_box(-2, 2))
    ref = build_complex(catalog.resolve("K_0_2"), cube_box(-2, 2))
    assert congruent_regions(region, ref)


def test_k02_printed_period_has_no_solution():
    # (1,1,0) leaves the plane x+y-z=0 of the three listed vertices
    with pytest.raises(ReconstructionError):
        reconstruct_generators({**K02_CONSTRAINTS, "period": [1, 1, 0]})


def test_constraints_json_round_trip(catalog):
    for i in range(1, 9):
        raw = catalog.entry(f"K{i}_1_2").source["constraints"]
        c = Constraints.from_json(raw)
        assert Constraints.from_json(c.to_json()) == c


def test_malformed_constraints():
    with pytest.raises(ReconstructionError):
        Constraints.from_json({"mirror_vector": [1, 2]})
    with pytest.raises(ReconstructionError):
        reconstruct_generators({**K02_CONSTRAINTS, "g2": {"kind": "dihedral", "order": 3}})
