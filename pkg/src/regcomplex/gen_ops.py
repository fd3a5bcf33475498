"""Operations on generator sets and reconstruction of generator sets.

``lambda0(gs, R)``: ``(R0, R1, G2) -> (R0 R, R1, G2)``.
``lambda1(gs, R)``: ``(R0, R1, G2) -> (R0, R1 R, G2)``.
``petrie_lambda(gs, T3)``: ``(R0, R1, S) -> (R0, T3 R1, S)`` for cyclic ``G2``.

Products are read left to right: ``R0 R`` means "apply R0, then R".
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

from .exact_geometry import (
    Isometry,
    all_signed_permutations,
    compose,
    dot,
    fixed_space_dimension,
    fmt_rational,
    half_turn_axis,
    inverse,
    reflection_normal,
    vec,
    vec_mat,
)
from .lattices import VertexSetLabel, cube_box, enumerate_points
from .point_groups import closure, identify, isometry_closure
from .wythoff import (
    DegenerateFaceError,
    GeneratorSet,
    GeneratorSetError,
    VertexFigure,
    build_complex,
    canonical_face_key,
    edge_key,
    faces_per_edge,
    flag_stabilizer,
    match_vertex_figure,
    trace_base_face,
)


class GenOpsError(ValueError):
    pass


class InvalidElementError(GenOpsError):
    pass


class PreconditionError(GenOpsError):
    pass


class ReconstructionError(GenOpsError):
    pass


class AmbiguityError(ReconstructionError):
    def __init__(self, message: str, candidates: list):
        super().__init__(message)
        self.candidates = candidates


# ---------------------------------------------------------------- elements


def _plane_reflections(elements: Iterable[Isometry]) -> list[Isometry]:
    return [g for g in elements if reflection_normal(g.linear) is not None and fixed_space_dimension(g) == 2]


def _unique(cands: list[Isometry], what: str) -> Isometry:
    if len(cands) != 1:
        listing = ", ".join(g.describe() for g in cands) or "none"
        raise InvalidElementError(f"expected exactly one {what} in G2, found {len(cands)}: {listing}")
    return cands[0]


SELECTORS = {
    "halfturn": "the unique half-turn in G2",
    "perp_R1": "the unique plane reflection in G2 whose mirror is perpendicular to the mirror of R1",
    "perp_R0": "the unique plane reflection in G2 whose mirror is perpendicular to the axis of R0",
}


def resolve_element(gs: GeneratorSet, spec: str) -> Isometry:
    """Resolve an element id: a selector, a name, or a product ``A*B*...``."""
    g2 = gs.g2_elements()
    if spec == "halfturn":
        return _unique([g for g in g2 if half_turn_axis(g.linear) is not None and g.proper], "half-turn")
    if spec == "perp_R1":
        n1 = reflection_normal(gs.R1.linear)
        if n1 is None or fixed_space_dimension(gs.R1) != 2:
            raise InvalidElementError("perp_R1 needs R1 to be a plane reflection")
        return _unique(
            [g for g in _plane_reflections(g2) if dot(reflection_normal(g.linear), n1) == 0], "reflection perpendicular to R1"
        )
    if spec == "perp_R0":
        ax = half_turn_axis(gs.R0.linear)
        if ax is None or fixed_space_dimension(gs.R0) != 1:
            raise InvalidElementError("perp_R0 needs R0 to be a half-turn")
        return _unique(
            [g for g in _plane_reflections(g2) if reflection_normal(g.linear) in (ax, tuple(-c for c in ax))],
            "reflection perpendicular to the axis of R0",
        )
    names = gs.named()
    out = Isometry.identity()
    for part in spec.split("*"):
        part = part.strip()
        if part not in names:
            raise InvalidElementError(f"unknown element {part!r}; known: {sorted(names)} or {sorted(SELECTORS)}")
        out = compose(out, names[part])
    return out


def _inherit_names(gs: GeneratorSet) -> dict:
    return {k: v for k, v in gs.names if k not in ("R0", "R1")}


def _check_in_g2(gs: GeneratorSet, r: Isometry) -> None:
    if r not in set(gs.g2_elements()):
        raise InvalidElementError(f"{r.describe()} is not an element of G2")


def lambda0(gs: GeneratorSet, r: Isometry) -> GeneratorSet:
    _check_in_g2(gs, r)
    new_r0 = compose(gs.R0, r)
    if not new_r0.is_involution():
        raise PreconditionError("R0 R is not an involution")
    return GeneratorSet(new_r0, gs.R1, gs.G2, gs.base_vertex, _inherit_names(gs))


def lambda1(gs: GeneratorSet, r: Isometry) -> GeneratorSet:
    _check_in_g2(gs, r)
    new_r1 = compose(gs.R1, r)
    if not new_r1.is_involution():
        raise PreconditionError("R1 R is not an involution")
    return GeneratorSet(gs.R0, new_r1, gs.G2, gs.base_vertex, _inherit_names(gs))


def lambda0_inverse(gs: GeneratorSet, r: Isometry) -> GeneratorSet:
    """Group-level inverse of ``lambda0(r)``, i.e. ``lambda0(r^-1)``."""
    return lambda0(gs, inverse(r))


def lambda1_inverse(gs: GeneratorSet, r: Isometry) -> GeneratorSet:
    return lambda1(gs, inverse(r))


def petrie_lambda(gs: GeneratorSet, t3: Isometry) -> GeneratorSet:
    if len(gs.G2) != 1:
        raise PreconditionError("petrie_lambda needs a cyclic G2 with a single generator")
    s = gs.G2[0]
    if not s.proper:
        raise PreconditionError("the G2 generator must be a rotation")
    if not t3.is_involution() or fixed_space_dimension(t3) != 2:
        raise PreconditionError("T3 must be a plane reflection")
    if compose(t3, gs.R0) != compose(gs.R0, t3) or compose(t3, gs.R1) != compose(gs.R1, t3):
        raise PreconditionError("T3 must commute with R0 and R1")
    if compose(compose(t3, s), t3) != inverse(s):
        raise PreconditionError("T3 must conjugate S to its inverse")
    return GeneratorSet(gs.R0, compose(t3, gs.R1), gs.G2, gs.base_vertex, _inherit_names(gs))


# ---------------------------------------------------------------- apeir


F = Isometry.from_formula

APEIR_Q = {
    # vertex-figure polyhedron: (initial vertex w, T1, T2, T3)
    "tetra33": ((1, 1, 1), F("(x,-z,-y)"), F("(y,x,z)"), F("(x,z,y)")),
    "octa34": ((1, 0, 0), F("(y,x,z)"), F("(x,z,y)"), F("(x,y,-z)")),
    "cube43": ((1, 1, 1), F("(-x,y,z)"), F("(z,y,x)"), F("(x,z,y)")),
}


@dataclass(frozen=True)
class Apeirotope:
    q: str
    T: tuple[Isometry, Isometry, Isometry, Isometry]
    base_vertex: tuple

    def skeleton(self) -> GeneratorSet:
        t0, t1, t2, t3 = self.T
        return GeneratorSet(t0, t1, (t2, t3), self.base_vertex, {"T0": t0, "T1": t1, "T2": t2, "T3": t3})

    def skeleton_cyclic(self) -> GeneratorSet:
        """Same 2-skeleton generated with the rotation ``S = T2 T3`` in place of ``<T2, T3>``."""
        t0, t1, t2, t3 = self.T
        s = compose(t2, t3)
        return GeneratorSet(t0, t1, (s,), self.base_vertex, {"T0": t0, "T1": t1, "T2": t2, "T3": t3, "S": s})


def apeir(q: str) -> Apeirotope:
    if q not in APEIR_Q:
        raise GenOpsError(f"unknown polyhedron {q!r}; expected one of {sorted(APEIR_Q)}")
    w, t1, t2, t3 = APEIR_Q[q]
    t0 = Isometry.point_reflection(tuple(vec(w)[i] / 2 for i in range(3)))
    return Apeirotope(q, (t0, t1, t2, t3), vec(0, 0, 0))


# ---------------------------------------------------------------- local invariants


def vertex_figure_group(gs: GeneratorSet) -> list[Isometry]:
    return isometry_closure([gs.R1, *gs.G2], limit=48)


def local_vertex_figure(gs: GeneratorSet) -> VertexFigure:
    """Vertex-figure at the base vertex from the vertex-figure group alone."""
    from collections import Counter

    face = trace_base_face(gs)
    o = gs.base_vertex
    prev, nxt = face.vertex_at(-1), face.vertex_at(1)
    seen = {}
    for h in vertex_figure_group(gs):
        img = face.transformed(h.apply, h.apply_linear)
        if img.key not in seen:
            seen[img.key] = edge_key(h.apply(prev), h.apply(nxt))
    edges = Counter(seen.values())
    nbrs = frozenset(p for e in edges for p in e)
    return VertexFigure(o, nbrs, edges)


def algebraic_r(gs: GeneratorSet) -> int:
    """``|G2|`` divided by the order of the part of G2 fixing the base face."""
    face = trace_base_face(gs)
    g2 = gs.g2_elements()
    fixing = [g for g in g2 if face.transformed(g.apply, g.apply_linear).key == face.key]
    return len(g2) // len(fixing)


# ---------------------------------------------------------------- reconstruction


@dataclass(frozen=True)
class Constraints:
    mirror_vector: tuple[int, int]
    twin: tuple
    g2_kind: str
    g2_order: int
    r: int | None
    face: str
    vertex_figure: str | None
    vertex_set: str | None
    special_group: str | None
    face_prefix: tuple | None = None
    period: tuple | None = None
    r0_axis: tuple | None = None  # picks one orientation among congruent solutions
    translation_range: int = 2
    box: int = 3

    @classmethod
    def from_json(cls, data: dict) -> "Constraints":
        try:
            return cls(
                tuple(data["mirror_vector"]),
                tuple(vec(*data["twin"])),
                data["g2"]["kind"],
                int(data["g2"]["order"]),
                None if data.get("r") is None else int(data["r"]),
                data["face"],
                data.get("vertex_figure"),
                data.get("vertex_set"),
                data.get("special_group"),
                None if data.get("face_prefix") is None else tuple(tuple(vec(*p)) for p in data["face_prefix"]),
                None if data.get("period") is None else tuple(vec(*data["period"])),
                None if data.get("r0_axis") is None else tuple(int(x) for x in data["r0_axis"]),
                int(data.get("translation_range", 2)),
                int(data.get("box", 3)),
            )
        except (KeyError, TypeError) as exc:
            raise ReconstructionError(f"constraint block missing or malformed field {exc}") from exc

    def to_json(self) -> dict:
        out = {
            "mirror_vector": list(self.mirror_vector),
            "twin": [fmt_rational(c) for c in self.twin],
            "g2": {"kind": self.g2_kind, "order": self.g2_order},
            "face": self.face,
        }
        for key in ("r", "vertex_figure", "vertex_set", "special_group"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        if self.face_prefix is not None:
            out["face_prefix"] = [[fmt_rational(c) for c in p] for p in self.face_prefix]
        if self.period is not None:
            out["period"] = [fmt_rational(c) for c in self.period]
        if self.r0_axis is not None:
            out["r0_axis"] = list(self.r0_axis)
        if self.translation_range != 2:
            out["translation_range"] = self.translation_range
        if self.box != 3:
            out["box"] = self.box
        return out


@dataclass
class ReconstructionResult:
    generators: GeneratorSet
    n_candidates: int
    n_hits: int
    n_regions: int
    congruent: bool
    hits: list = field(default_factory=list)

    @property
    def unique(self) -> bool:
        return self.congruent

    def summary(self) -> str:
        return (
            f"{self.n_candidates} candidates, {self.n_hits} hits, {self.n_regions} distinct regions, "
            f"{'all congruent under the base-vertex stabilizer' if self.congruent else 'NOT congruent'}"
        )


def _candidate_isometries(rng: int) -> list[Isometry]:
    out = []
    for m in all_signed_permutations():
        for t in itertools.product(range(-rng, rng + 1), repeat=3):
            out.append(Isometry(m, vec(t)))
    return out


def _subgroups(stab: list[Isometry], kind: str, order: int) -> list[tuple[Isometry, ...]]:
    """Generating tuples of the cyclic or dihedral subgroups of ``stab`` of given order."""
    found: dict = {}
    if kind == "cyclic":
        for s in stab:
            if s.proper and s.order() == order:
                key = frozenset(isometry_closure([s]))
                found.setdefault(key, (s,))
    else:
        refl = [g for g in stab if fixed_space_dimension(g) == 2 and g.is_involution()]
        for a, b in itertools.combinations(refl, 2):
            grp = frozenset(isometry_closure([a, b]))
            if len(grp) == order:
                found.setdefault(grp, (a, b))
    return [found[k] for k in sorted(found, key=lambda k: sorted(g.to_json().__repr__() for g in k))]


def _region_signature(region) -> tuple:
    return (
        frozenset(region.interior_vertices()),
        frozenset(region.interior_edges()),
        frozenset(region.interior_faces()),
    )


def _transform_signature(sig, m) -> tuple:
    vs, es, fs = sig

    def pt(p):
        return tuple(vec_mat(p, m))

    v2 = frozenset(pt(v) for v in vs)
    e2 = frozenset(edge_key(pt(a), pt(b)) for a, b in es)
    f2 = set()
    for key in fs:
        if key[0] == "finite":
            f2.add(canonical_face_key([pt(v) for v in key[1]], None))
        else:
            f2.add(canonical_face_key([pt(v) for v in key[2]], pt(key[1])))
    return v2, e2, frozenset(f2)


def _unsigned(v) -> tuple:
    v = tuple(v)
    neg = tuple(-c for c in v)
    return max(v, neg)


def check_candidate(gs: GeneratorSet, c: Constraints, full: bool = True) -> tuple[bool, str, object]:
    """Test a generator set against a constraint block; returns (ok, reason, region)."""
    mv = (fixed_space_dimension(gs.R0), fixed_space_dimension(gs.R1))
    if mv != tuple(c.mirror_vector):
        return False, f"mirror vector {mv}", None
    if c.r0_axis is not None:
        ax = half_turn_axis(gs.R0.linear)
        if ax is None or _unsigned(ax) != _unsigned(c.r0_axis):
            return False, f"R0 axis {ax}", None
    try:
        face = trace_base_face(gs)
    except DegenerateFaceError as exc:
        return False, str(exc), None
    if str(face.cls) != c.face:
        return False, f"face {face.cls}", None
    if c.face_prefix is not None and tuple(face.window(-1, 1)) != tuple(c.face_prefix):
        return False, "face prefix", None
    if c.period is not None and (face.period is None or _unsigned(face.period) != _unsigned(c.period)):
        return False, f"period {face.period}", None
    if c.special_group is not None:
        sg = identify(closure([g.linear for g in gs.generators]))
        if sg.name != c.special_group:
            return False, f"special group {sg}", None
    r = algebraic_r(gs)
    if c.r is not None and r != c.r:
        return False, "algebraic r", None
    if c.vertex_figure is not None and not match_vertex_figure(local_vertex_figure(gs), c.vertex_figure):
        return False, "vertex figure", None
    if not full:
        return True, "local", None
    region = build_complex(gs, cube_box(-c.box, c.box))
    if c.vertex_set is not None:
        if region.interior_vertices() != enumerate_points(VertexSetLabel(c.vertex_set), region.interior):
            return False, "vertex set", region
    counts = {faces_per_edge(region, e) for e in region.interior_edges()}
    if counts != {r}:
        return False, f"faces per edge {counts}", region
    if len(flag_stabilizer(gs, region)) != 1:
        return False, "not simply flag-transitive", region
    return True, "ok", region


def reconstruct_generators(constraints: Constraints | dict) -> ReconstructionResult:
    """Exhaustive search for generator sets satisfying a constraint block."""
    c = constraints if isinstance(constraints, Constraints) else Constraints.from_json(constraints)
    if c.g2_kind == "dihedral" and c.g2_order % 2:
        raise ReconstructionError("a dihedral G2 has even order")
    o = vec(0, 0, 0)
    twin = vec(*c.twin)
    pool = _candidate_isometries(c.translation_range)
    r0s = [
        g
        for g in pool
        if g.apply(o) == twin and g.is_involution() and fixed_space_dimension(g) == c.mirror_vector[0]
    ]
    r1s = [g for g in pool if g.apply(o) == o and g.is_involution() and fixed_space_dimension(g) == c.mirror_vector[1]]
    stab = [g for g in pool if g.apply(o) == o and g.apply(twin) == twin]
    g2s = _subgroups(stab, c.g2_kind, c.g2_order)
    n_cand = 0
    hits = []
    for r0, r1, g2 in itertools.product(r0s, r1s, g2s):
        n_cand += 1
        try:
            gs = GeneratorSet(r0, r1, g2)
        except GeneratorSetError:
            continue
        ok, _, region = check_candidate(gs, c)
        if ok:
            hits.append((gs, region))
    if not hits:
        raise ReconstructionError(f"no generator set satisfies the constraints ({n_cand} candidates)")
    sigs: list = []
    for gs, region in hits:
        s = _region_signature(region)
        if s not in sigs:
            sigs.append(s)
    # congruence of every distinct region with the first under the stabilizer of o
    congruent = True
    for s in sigs[1:]:
        if not any(_transform_signature(sigs[0], m) == s for m in all_signed_permutations()):
            congruent = False
    if not congruent:
        raise AmbiguityError(
            f"{len(sigs)} non-congruent solutions", [gs.to_json() for gs, _ in hits]
        )
    return ReconstructionResult(hits[0][0], n_cand, len(hits), len(sigs), congruent, [gs for gs, _ in hits])
