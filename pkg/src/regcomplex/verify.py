"""Verification engine: independent oracles and per-entry reports.

Every check compares a built region (or a generator-level computation)
against either the expected properties stored in the catalog or an oracle
that is constructed without the Wythoff machinery: the semiregular
tetrahedron-octahedron tessellation, edge paths traced in the triangular
plane tessellations it induces, and Petrie polygons of the cubical
tessellation.

Set-valued checks quantify over the interior box only; boundary effects are
absorbed by the margin, and count ratios get a 10% slack.
"""

from __future__ import annotations

import itertools
import json
import math
import threading
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from . import gen_ops
from .catalog import Catalog, CatalogEntry, apply_operation, default_catalog, resolve_element_any
from .exact_geometry import all_signed_permutations, cross, dot, fmt_rational, fmt_vec, norm2, sub, vec
from .lattices import Box, VertexSetLabel, box_points, enumerate_points, grow
from .point_groups import closure, identify, mirror_vector, special_group
from .wythoff import (
    BoundaryError,
    ComplexRegion,
    ConvexPolygon,
    Face,
    GeneratorSet,
    Helix,
    Zigzag,
    build_complex,
    detect_face_mirror,
    edge_key,
    faces_per_edge,
    flag_stabilizer,
    match_vertex_figure,
    trace_base_face,
    vertex_figure,
)


class VerifyError(ValueError):
    pass


class OracleError(VerifyError):
    pass


RATIO_SLACK = Fraction(1, 10)
DIAGONALS = ((1, 1, 1), (1, 1, -1), (1, -1, 1), (-1, 1, 1))
COORDINATE_AXES = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
FCC_NEIGHBORS = tuple(
    v for v in itertools.product((-1, 0, 1), repeat=3) if sum(abs(c) for c in v) == 2
)


# ---------------------------------------------------------------- reports


@dataclass
class CheckResult:
    name: str
    status: str  # pass | fail | skipped
    detail: str = ""
    witness: Any = None

    def to_json(self) -> dict:
        out = {"name": self.name, "status": self.status, "detail": self.detail}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        return out


@dataclass
class Report:
    entry: str
    title: str = ""
    box: Box | None = None
    interior_margin: int = 2
    scale: str = "1"
    checks: list[CheckResult] = field(default_factory=list)
    timing: float = 0.0
    region: dict = field(default_factory=dict)

    def add(self, name: str, ok: bool, detail: str = "", witness: Any = None) -> bool:
        self.checks.append(CheckResult(name, "pass" if ok else "fail", detail, None if ok else witness))
        return ok

    def skip(self, name: str, reason: str) -> None:
        if not reason:
            raise VerifyError("a skipped check needs a reason")
        self.checks.append(CheckResult(name, "skipped", reason))

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if c.status == "fail"]

    def status_of(self, name: str) -> str | None:
        for c in self.checks:
            if c.name == name:
                return c.status
        return None

    def to_json(self) -> dict:
        return {
            "entry": self.entry,
            "title": self.title,
            "box": None if self.box is None else [list(b) for b in self.box],
            "interior_margin": self.interior_margin,
            "scale": self.scale,
            "passed": self.passed,
            "timing_s": round(self.timing, 3),
            "region": self.region,
            "checks": [c.to_json() for c in self.checks],
        }

    def to_text(self) -> str:
        box = "x".join(f"[{lo},{hi}]" for lo, hi in self.box) if self.box else "?"
        head = f"{self.entry} ({self.title}) box {box} margin {self.interior_margin} scale {self.scale}"
        lines = [head]
        for c in self.checks:
            mark = {"pass": "PASS", "fail": "FAIL", "skipped": "SKIP"}[c.status]
            line = f"  {mark}  {c.name}"
            if c.detail:
                line += f": {c.detail}"
            lines.append(line)
            if c.status == "fail" and c.witness is not None:
                lines.append(f"        witness: {json.dumps(_jsonable(c.witness), sort_keys=True)}")
        n_fail = len(self.failures)
        lines.append(f"  {'ok' if not n_fail else f'{n_fail} failed'} in {self.timing:.2f}s")
        return "\n".join(lines)


def _jsonable(x):
    if isinstance(x, Fraction):
        return fmt_rational(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in x]
        if isinstance(x, (set, frozenset)):
            items.sort(key=repr)
        return items
    return x


def _first(items, k: int = 3) -> list:
    return sorted(items, key=repr)[:k]


# ---------------------------------------------------------------- region helpers


def interior_margin_for(box: Box, preferred: int = 2) -> int:
    """Largest margin up to ``preferred`` that leaves a non-empty interior."""
    width = min(hi - lo for lo, hi in box)
    return max(0, min(preferred, width // 2 - (1 if width % 2 == 0 and width > 0 else 0)))


def _adjacency(cr: ComplexRegion) -> dict:
    adj: dict = {}
    for u, w in cr.edges:
        adj.setdefault(u, set()).add(w)
        adj.setdefault(w, set()).add(u)
    return adj


def _interior_face_keys(cr: ComplexRegion) -> set:
    return set(cr.interior_faces())


def _sample_vertex(cr: ComplexRegion, preferred) -> tuple | None:
    if tuple(preferred) in cr.vertices and cr.is_interior(preferred):
        return tuple(preferred)
    inner = cr.interior_vertices()
    if not inner:
        return None
    mid = [Fraction(lo + hi, 2) for lo, hi in cr.interior]
    return min(inner, key=lambda v: (norm2(sub(v, mid)), v))


def _unsigned(v) -> tuple:
    v = tuple(v)
    return max(v, tuple(-c for c in v))


def _primitive_dir(v) -> tuple:
    fr = [Fraction(c) for c in v]
    den = 1
    for c in fr:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in fr]
    g = 0
    for c in ints:
        g = math.gcd(g, abs(c))
    return _unsigned(tuple(c // g for c in ints)) if g else (0, 0, 0)


def _face_plane(face: Face):
    """Primitive normal and offset of a planar face, or None."""
    pts = face.window(-1, 1) if face.period is not None else list(face.vertices[:3])
    n = cross(sub(pts[0], pts[1]), sub(pts[2], pts[1]))
    if not any(n):
        return None
    n = _primitive_dir(n)
    return n, dot(n, pts[1])


def compare_regions(a: ComplexRegion, b: ComplexRegion) -> dict:
    """Differences between the interior parts of two regions built on the same box."""
    if a.box != b.box or a.interior_margin != b.interior_margin:
        raise VerifyError(f"regions are on different boxes: {a.box} vs {b.box}")
    fa, fb = _interior_face_keys(a), _interior_face_keys(b)
    return {
        "vertices_only_first": a.interior_vertices() - b.interior_vertices(),
        "vertices_only_second": b.interior_vertices() - a.interior_vertices(),
        "edges_only_first": a.interior_edges() - b.interior_edges(),
        "edges_only_second": b.interior_edges() - a.interior_edges(),
        "faces_only_first": fa - set(b.faces),
        "faces_only_second": fb - set(a.faces),
    }


def check_subcomplex(inner: ComplexRegion, outer: ComplexRegion) -> bool:
    """Interior vertices, edges and faces of ``inner`` all belong to ``outer``."""
    if inner.box != outer.box or inner.interior_margin != outer.interior_margin:
        raise VerifyError(f"mismatched boxes: {inner.box} vs {outer.box}")
    return (
        inner.interior_vertices() <= outer.vertices
        and inner.interior_edges() <= outer.edges
        and _interior_face_keys(inner) <= set(outer.faces)
    )


def face_ratio(inner: ComplexRegion, outer: ComplexRegion) -> Fraction:
    n_out = len(outer.interior_faces())
    return Fraction(len(inner.interior_faces()), n_out) if n_out else Fraction(0)


# ---------------------------------------------------------------- semiregular tessellation S


def s_tiles(box: Box) -> dict:
    """Triangles of S meeting ``box``: canonical key -> [face, #octahedra, #tetrahedra]."""
    out: dict = {}
    work = grow(box, 1)

    def add(tri, which):
        face = Face(ConvexPolygon(3), tuple(tri), None)
        if not face.vertices_in_box(box):
            return
        rec = out.setdefault(face.key, [face, 0, 0])
        rec[which] += 1

    for u in box_points(work):
        if sum(u) % 2:  # octahedron centred at an odd point
            for sx, sy, sz in itertools.product((1, -1), repeat=3):
                add([(u[0] + sx, u[1], u[2]), (u[0], u[1] + sy, u[2]), (u[0], u[1], u[2] + sz)], 1)
        # tetrahedron inscribed in the unit cube with lowest corner u
        corners = [
            (u[0] + i, u[1] + j, u[2] + k) for i in (0, 1) for j in (0, 1) for k in (0, 1) if (sum(u) + i + j + k) % 2 == 0
        ]
        for tri in itertools.combinations(corners, 3):
            add(list(tri), 2)
    return out


def semiregular_S(box: Box, interior_margin: int = 2) -> ComplexRegion:
    """2-skeleton of the tetrahedron-octahedron tessellation, built from its tiles."""
    tiles = s_tiles(box)
    verts = frozenset(p for p in box_points(box) if sum(p) % 2 == 0)
    edges = set()
    for p in verts:
        for d in FCC_NEIGHBORS:
            q = tuple(a + b for a, b in zip(p, d))
            if q in verts:
                edges.add(edge_key(p, q))
    faces = {k: rec[0] for k, rec in tiles.items()}
    base = Face(ConvexPolygon(3), ((0, 0, 0), (1, 0, 1), (0, 1, 1)), None)
    return ComplexRegion(box, verts, frozenset(edges), faces, base, interior_margin, len(tiles))


# ---------------------------------------------------------------- triangular plane oracles


def _plane_normal(normal) -> tuple:
    n = tuple(int(c) for c in normal)
    for d in DIAGONALS:
        if n == d or n == tuple(-c for c in d):
            return n if dot(n, (1, 1, 1)) > 0 else tuple(-c for c in n)
    raise OracleError(f"{normal} is not normal to a triangle plane of S")


def _hex_order(n: tuple) -> list[tuple]:
    """The six in-plane neighbour directions, counter-clockwise about ``n``."""
    dirs = [d for d in FCC_NEIGHBORS if dot(d, n) == 0]
    order = [min(dirs)]
    while len(order) < 6:
        last = order[-1]
        order.append(next(d for d in dirs if dot(d, last) == 1 and dot(cross(last, d), n) > 0))
    return order


def _trace(start_prev, start, n, turns, max_steps: int = 12) -> list[tuple]:
    """Follow an edge path: at step i leave by the exit ``turns[i % len(turns)]``
    counted counter-clockwise from the edge of arrival."""
    order = _hex_order(n)
    path = [tuple(start_prev), tuple(start)]
    for i in range(max_steps):
        prev, cur = path[-2], path[-1]
        back = sub(prev, cur)
        k = order.index(tuple(back))
        step = order[(k + turns[i % len(turns)]) % 6]
        path.append(tuple(a + b for a, b in zip(cur, step)))
    return path


def _traced_face(prev, x0, n, kind: str) -> Face:
    if kind == "two_hole":
        path = _trace(prev, x0, n, (2,), 8)
        hexagon = path[1:7]
        if path[7] != path[1] or len(set(hexagon)) != 6:
            raise OracleError("2-hole did not close after six steps")
        return Face(ConvexPolygon(6), tuple(hexagon), None)
    k = 1 if kind == "petrie" else 2
    path = _trace(prev, x0, n, (k, -k), 8)
    period = sub(path[3], path[1])
    for i in range(1, len(path) - 2):
        if sub(path[i + 2], path[i]) != period:
            raise OracleError(f"{kind} path is not periodic with two vertices per period")
    return Face(Zigzag, (path[1], path[2]), period)


ORACLE_KINDS = ("petrie", "two_zigzag", "two_hole")


def triangular_oracle(plane, kind: str, box: Box) -> dict:
    """All paths of ``kind`` in one triangle plane of S that meet ``box``.

    ``plane`` is ``(normal, offset)`` for the plane ``<x, normal> = offset``.
    Paths are traced from every directed edge: petrie leaves each vertex by
    the first exit, alternating sides; two_zigzag by the second exit,
    alternating sides; two_hole always by the second exit on the left, with
    the left side fixed by the normal oriented towards (1,1,1).
    """
    if kind not in ORACLE_KINDS:
        raise OracleError(f"unknown path kind {kind!r}; expected one of {ORACLE_KINDS}")
    normal, offset = plane
    n = _plane_normal(normal)
    if tuple(normal) != n:
        offset = -offset
    if Fraction(offset).denominator != 1 or int(offset) % 2:
        raise OracleError(f"plane <x,{n}> = {offset} carries no triangle of S")
    out: dict = {}
    for x0 in box_points(grow(box, 3)):
        if sum(x0) % 2 or dot(x0, n) != offset:
            continue
        for d in _hex_order(n):
            prev = tuple(a + b for a, b in zip(x0, d))
            face = _traced_face(prev, x0, n, kind)
            if face.vertices_in_box(box):
                out.setdefault(face.key, face)
    return out


def oracle_faces(kind: str, box: Box) -> dict:
    """Union of ``triangular_oracle`` over every triangle plane of S meeting ``box``."""
    out: dict = {}
    corners = list(itertools.product(*box))
    for n in DIAGONALS:
        lo = min(dot(c, n) for c in corners)
        hi = max(dot(c, n) for c in corners)
        for c in range(lo - (lo % 2), hi + 1, 2):
            out.update(triangular_oracle((n, c), kind, box))
    return out


def compare_with_oracle(cr: ComplexRegion, oracle: dict) -> tuple[set, set]:
    """(interior faces missing from the oracle, interior oracle faces missing from the region)."""
    inner = cr.interior
    mine = _interior_face_keys(cr)
    theirs = {k for k, f in oracle.items() if f.vertices_in_box(inner)}
    return mine - set(oracle), theirs - set(cr.faces)


# ---------------------------------------------------------------- cubical tessellation oracles


def cube_petrie_polygons(box: Box, within: str | None = None) -> dict:
    """Petrie polygons of the unit cubical tessellation meeting ``box``.

    Two consecutive edges lie in a unit square, three in a unit cube but not in
    a square, four in no cube; so the steps cycle through the three axes with
    fixed signs.  ``within`` keeps only polygons whose vertices all lie in the
    labelled vertex set.
    """
    out: dict = {}
    reach = grow(box, 3)
    allowed = None if within is None else enumerate_points(VertexSetLabel(within), reach)
    # a helix meeting the box has a vertex there; start from it
    for x0 in box_points(box):
        for perm in itertools.permutations(range(3)):
            for signs in itertools.product((1, -1), repeat=3):
                steps = []
                for axis, s in zip(perm, signs):
                    d = [0, 0, 0]
                    d[axis] = s
                    steps.append(tuple(d))
                x1 = tuple(a + b for a, b in zip(x0, steps[0]))
                x2 = tuple(a + b for a, b in zip(x1, steps[1]))
                period = tuple(sum(c) for c in zip(*steps))
                face = Face(Helix(3), (x0, x1, x2), period)
                if face.key in out:
                    continue
                if allowed is not None and not all(
                    v in allowed for v in face.vertices_in_box(reach)
                ):
                    continue
                out[face.key] = face
    return out


def _in_unit_square(points) -> bool:
    ext = [max(p[i] for p in points) - min(p[i] for p in points) for i in range(3)]
    return all(e <= 1 for e in ext) and sorted(ext)[0] == 0


def _in_unit_cube(points) -> bool:
    return all(max(p[i] for p in points) - min(p[i] for p in points) <= 1 for i in range(3))


def petrie_window_violations(face: Face) -> list[str]:
    n = len(face.vertices)
    pts = face.window(0, n + 4)
    bad = []
    for i in range(n):
        if not _in_unit_square(pts[i : i + 3]) or _in_unit_square(pts[i : i + 4]):
            bad.append(f"two-edge window at {i}")
        if not _in_unit_cube(pts[i : i + 4]) or _in_unit_cube(pts[i : i + 5]):
            bad.append(f"three-edge window at {i}")
    return bad


def _cube_edges_of_diagonal(u, v) -> set:
    lo = tuple(min(a, b) for a, b in zip(u, v))
    out = set()
    for axis in range(3):
        for off in itertools.product((0, 1), repeat=2):
            p = list(lo)
            others = [i for i in range(3) if i != axis]
            p[others[0]] += off[0]
            p[others[1]] += off[1]
            q = list(p)
            q[axis] += 1
            out.add(edge_key(tuple(p), tuple(q)))
    return out


def cube_diagonal_window_violations(face: Face) -> list[str]:
    """Triple and quadruple window conditions for helices whose edges are cube diagonals."""
    n = len(face.vertices)
    pts = face.window(-1, 2 * n + 3)
    cubes = [_cube_edges_of_diagonal(pts[i], pts[i + 1]) for i in range(len(pts) - 1)]
    bad = []
    shared = []
    for i in range(len(cubes) - 2):
        common = cubes[i] & cubes[i + 1] & cubes[i + 2]
        if len(common) != 1:
            bad.append(f"edges {i}..{i + 2} share {len(common)} cube edges")
            return bad
        (s,) = common
        if face.contains_vertex(s[0]) or face.contains_vertex(s[1]):
            bad.append(f"shared cube edge {s} touches the face")
        shared.append(s)
        if i + 3 < len(cubes) and cubes[i] & cubes[i + 1] & cubes[i + 2] & cubes[i + 3]:
            bad.append(f"edges {i}..{i + 3} share a cube edge")
    for i in range(len(shared) - 1):
        a, b = shared[i], shared[i + 1]
        if not (set(a) & set(b)) or dot(sub(a[1], a[0]), sub(b[1], b[0])) != 0:
            bad.append(f"shared edges {a} and {b} are not adjacent in a square")
    return bad


# ---------------------------------------------------------------- the engine


class RegionCache:
    """Thread-safe cache of built regions keyed by (entry, box, margin)."""

    def __init__(self, catalog: Catalog):
        self.catalog = catalog
        self._lock = threading.RLock()
        self._regions: dict = {}

    def generators(self, name: str) -> GeneratorSet:
        return self.catalog.resolve(name)

    def region(self, name: str, box: Box, margin: int) -> ComplexRegion:
        key = (name, box, margin)
        with self._lock:
            if key not in self._regions:
                self._regions[key] = build_complex(self.generators(name), box, interior_margin=margin)
            return self._regions[key]

    def region_of(self, gs: GeneratorSet, box: Box, margin: int) -> ComplexRegion:
        return build_complex(gs, box, interior_margin=margin)


def _lab(gs: GeneratorSet) -> str:
    return gs.edge_stabilizer().label()


def verify_entry(
    entry: CatalogEntry | str,
    box: Box,
    catalog: Catalog | None = None,
    cache: RegionCache | None = None,
    margin: int | None = None,
) -> Report:
    catalog = catalog or (cache.catalog if cache else default_catalog())
    cache = cache or RegionCache(catalog)
    if isinstance(entry, str):
        entry = catalog.entry(entry)
    for lo, hi in box:
        if lo >= hi:
            raise VerifyError(f"degenerate box {box}")
    margin = interior_margin_for(box) if margin is None else margin
    t0 = time.perf_counter()
    rep = Report(entry.name, entry.title, box, margin)
    gs = cache.generators(entry.name)
    cr = cache.region(entry.name, box, margin)
    rep.region = {
        "vertices": len(cr.vertices),
        "edges": len(cr.edges),
        "faces": len(cr.faces),
        "interior_vertices": len(cr.interior_vertices()),
        "interior_edges": len(cr.interior_edges()),
        "interior_faces": len(cr.interior_faces()),
        "vertex_representatives": cr.n_elements,
    }
    exp = entry.expected
    if exp is None:
        rep.skip("expected", "entry carries no expected properties")
        rep.timing = time.perf_counter() - t0
        return rep

    mv = mirror_vector(gs.R0, gs.R1)
    if entry.is_skeleton:
        rep.add("mirror_vector", True, f"{mv} (skeleton entry)")
    else:
        rep.add("mirror_vector", mv == tuple(entry.mirror_vector), f"{mv}", {"expected": entry.mirror_vector})

    g2 = _lab(gs)
    rep.add("g2", g2 == exp.g2, g2, {"expected": exp.g2})

    r_alg = gen_ops.algebraic_r(gs)
    rep.add("r_algebraic", r_alg == exp.r, str(r_alg), {"expected": exp.r})
    counts: dict = {}
    for e in cr.interior_edges():
        counts.setdefault(faces_per_edge(cr, e), []).append(e)
    if not counts:
        rep.add("r_geometric", False, "no interior edges", {"box": box})
    else:
        ok = set(counts) == {exp.r}
        rep.add(
            "r_geometric",
            ok,
            f"{sorted(counts)} faces per edge on {sum(len(v) for v in counts.values())} interior edges",
            {str(k): _first(v, 2) for k, v in counts.items() if k != exp.r},
        )

    face = trace_base_face(gs)
    rep.add("face_class", str(face.cls) == exp.face, str(face.cls), {"expected": exp.face, "base_face": face.printed()})

    v = _sample_vertex(cr, gs.base_vertex)
    if v is None:
        rep.add("vertex_figure", False, "no interior vertex", None)
    else:
        vf = vertex_figure(cr, v)
        ok = match_vertex_figure(vf, exp.vertex_figure)
        rep.add("vertex_figure", ok, f"{exp.vertex_figure} at {fmt_vec(v)}", {"neighbors": vf.relative()[0]})

    if exp.vertex_set is None:
        rep.skip("vertex_set", "no vertex-set label is tabulated for this entry")
    else:
        want = enumerate_points(VertexSetLabel(exp.vertex_set), cr.interior)
        have = cr.interior_vertices()
        rep.add(
            "vertex_set",
            want == have,
            f"{exp.vertex_set} on {len(have)} interior points",
            {"missing": _first(want - have), "extra": _first(have - want)},
        )

    sg = identify(special_group(gs.generators)).name
    rep.add("special_group", sg == exp.special_group, sg, {"expected": exp.special_group})

    fm = detect_face_mirror(gs, cr)
    rep.add("face_mirror", fm == exp.face_mirror, str(fm).lower(), {"expected": exp.face_mirror})
    fs = len(flag_stabilizer(gs, cr))
    rep.add("flag_stabilizer", fs == exp.flag_stabilizer, f"order {fs}", {"expected": exp.flag_stabilizer})

    if entry.kind == "derived":
        _check_derivation(rep, entry, gs, cr, cache, box, margin)

    for claim in exp.extra_claims:
        name = "claim:" + claim.get("check", "?") + (":" + claim["other"] if "other" in claim else "")
        fn = CLAIMS.get(claim.get("check"))
        if fn is None:
            rep.add(name, False, f"unknown claim kind {claim.get('check')!r}")
            continue
        try:
            fn(rep, name, claim, entry, gs, cr, cache, box, margin)
        except (VerifyError, BoundaryError) as exc:
            rep.add(name, False, f"{type(exc).__name__}: {exc}")
    rep.timing = time.perf_counter() - t0
    return rep


def _mirror_transition_ok(op: str, kind: str, before: tuple, after: tuple) -> bool:
    if op == "lambda1":
        return before[0] == after[0] and {before[1], after[1]} == {1, 2}
    if kind == "halfturn":
        return before[1] == after[1] and {before[0], after[0]} == {0, 2}
    return before[1] == after[1] and {before[0], after[0]} == {0, 1}


def _check_derivation(rep, entry, gs, cr, cache, box, margin) -> None:
    src = entry.source
    base_name = src["base"]
    base = cache.generators(base_name)
    op = src["op"]
    element = resolve_element_any(base, src["element"])
    if op not in ("lambda0", "lambda1"):
        return
    br = cache.region(base_name, box, margin)
    same_v = br.interior_vertices() == cr.interior_vertices()
    same_e = br.interior_edges() == cr.interior_edges()
    rep.add(
        f"{op}_preserves_vertices_edges",
        same_v and same_e,
        f"vs {base_name}",
        {"vertices": same_v, "edges": same_e},
    )
    v = gs.base_vertex
    if op == "lambda1":
        if cr.is_interior(v):
            same = vertex_figure(cr, v) == vertex_figure(br, v)
            rep.add("lambda1_preserves_vertex_figure", same, f"at {fmt_vec(v)} vs {base_name}")
        else:
            rep.skip("lambda1_preserves_vertex_figure", "base vertex is not interior to this box")
    again = (gen_ops.lambda0 if op == "lambda0" else gen_ops.lambda1)(gs, element)
    rep.add(
        f"{op}_involutory",
        again.R0 == base.R0 and again.R1 == base.R1 and set(again.G2) == set(base.G2),
        f"applying {op}({src['element']}) twice returns {base_name}",
    )
    kind = "halfturn" if element.proper else "reflection"
    before, after = mirror_vector(base.R0, base.R1), mirror_vector(gs.R0, gs.R1)
    rep.add(f"{op}_mirror_transition", _mirror_transition_ok(op, kind, before, after), f"{before} -> {after} ({kind})")


# ---------------------------------------------------------------- extra claims


def _claim_base_face(rep, name, claim, entry, gs, cr, cache, box, margin):
    face = trace_base_face(gs)
    printed_verts = [tuple(vec(*p)) for p in claim["vertices"]]
    printed_period = None if claim.get("period") is None else tuple(vec(*claim["period"]))
    want = {"class": str(face.cls), "vertices": [[fmt_rational(c) for c in p] for p in printed_verts]}
    if printed_period is None:
        have = face.printed()
        want["period"] = None
        rep.add(name, have == want, f"{face.cls} {have['vertices']}", {"computed": have, "printed": want})
        return
    # printed as x_-1, x_0, x_1 plus the period
    window = face.window(-1, 1)
    have = {
        "class": str(face.cls),
        "vertices": [[fmt_rational(c) for c in p] for p in window],
        "period": [fmt_rational(c) for c in _unsigned(face.period)],
    }
    want["period"] = [fmt_rational(c) for c in _unsigned(printed_period)]
    rep.add(name, have == want, f"window {have['vertices']} period {have['period']}", {"computed": have, "printed": want})


def _claim_base_face_center(rep, name, claim, entry, gs, cr, cache, box, margin):
    face = trace_base_face(gs)
    n = len(face.vertices)
    c = tuple(sum(Fraction(v[i]) for v in face.vertices) / n for i in range(3))
    want = tuple(vec(*claim["point"]))
    rep.add(name, face.period is None and c == want, fmt_vec(c), {"expected": want})


def _claim_oracle(rep, name, claim, entry, gs, cr, cache, box, margin):
    kind = claim["kind"]
    name = f"{name}:{kind}"
    missing, extra = compare_with_oracle(cr, oracle_faces(kind, cr.box))
    n = len(cr.interior_faces())
    rep.add(
        name,
        not missing and not extra and n > 0,
        f"{n} interior faces, both inclusions",
        {"not_in_oracle": _first(missing), "not_in_region": _first(extra)},
    )


def _claim_semiregular_S(rep, name, claim, entry, gs, cr, cache, box, margin):
    s = semiregular_S(cr.box, cr.interior_margin)
    diff = compare_regions(cr, s)
    bad = {k: _first(v) for k, v in diff.items() if v}
    rep.add(name, not bad, "region equals the 2-skeleton of S", bad)
    tiles = s_tiles(cr.box)
    inner = cr.interior
    wrong = [k for k, (f, no, nt) in tiles.items() if f.vertices_in_box(inner) and (no, nt) != (1, 1)]
    rep.add("claim:semiregular_S_tiles", not wrong, "each triangle lies in one octahedron and one tetrahedron", _first(wrong))


def _claim_coplanar_pairs(rep, name, claim, entry, gs, cr, cache, box, margin):
    bad = []
    for e in cr.interior_edges():
        planes: dict = {}
        for key in cr.edge_faces.get(e, ()):
            pl = _face_plane(cr.faces[key])
            planes[pl] = planes.get(pl, 0) + 1
        if None in planes or sorted(planes.values()) != [2, 2]:
            bad.append(e)
    rep.add(name, not bad, "faces around each interior edge form two coplanar pairs", _first(bad))


def _claim_edge_degree(rep, name, claim, entry, gs, cr, cache, box, margin):
    adj = _adjacency(cr)
    degs = {len(adj.get(v, ())) for v in cr.interior_vertices()}
    rep.add(name, degs == {claim["degree"]}, f"degrees {sorted(degs)}", {"expected": claim["degree"]})


def _claim_subcomplex(rep, name, claim, entry, gs, cr, cache, box, margin):
    other = cache.region(claim["other"], box, margin)
    ok = check_subcomplex(cr, other)
    detail = f"inside {claim['other']}"
    if "face_ratio" in claim:
        want = Fraction(claim["face_ratio"])
        ratio = face_ratio(cr, other)
        ok = ok and abs(ratio - want) <= RATIO_SLACK * want
        detail += f", interior face ratio {ratio} (target {want})"
    strict = not check_subcomplex(other, cr)
    rep.add(name, ok and strict, detail + ("" if strict else ", but not strictly"))


def _claim_same_edge_graph(rep, name, claim, entry, gs, cr, cache, box, margin):
    other = cache.region(claim["other"], box, margin)
    same_v = cr.interior_vertices() == other.interior_vertices()
    same_e = cr.interior_edges() == other.interior_edges()
    rep.add(name, same_v and same_e, f"same interior vertices and edges as {claim['other']}", {"vertices": same_v, "edges": same_e})


def _claim_vf_group(rep, name, claim, entry, gs, cr, cache, box, margin):
    lab = identify(closure([g.linear for g in gen_ops.vertex_figure_group(gs)])).name
    rep.add(name, lab == claim["label"], lab, {"expected": claim["label"]})


def _claim_vf_vertices(rep, name, claim, entry, gs, cr, cache, box, margin):
    o = gs.base_vertex
    vf = vertex_figure(cr, o)
    rel, edges = vf.relative()
    want = {tuple(vec(*p)) for p in claim["points"]}
    mult = {k for k in edges.values()}
    ok = rel == want and mult == {claim["multiplicity"]}
    rep.add(name, ok, f"{len(rel)} neighbours, edge multiplicities {sorted(mult)}", {"neighbors": rel})


def _claim_vf_adjacency(rep, name, claim, entry, gs, cr, cache, box, margin):
    o = gs.base_vertex
    _, edges = vertex_figure(cr, o).relative()
    p = tuple(vec(*claim["vertex"]))
    adj = {w if u == p else u for u, w in edges if p in (u, w)}
    want = {tuple(vec(*q)) for q in claim["neighbors"]}
    rep.add(f"{name}:{fmt_vec(p)}", adj == want, f"{len(adj)} neighbours", {"found": adj})


def _directions(cr: ComplexRegion) -> dict:
    out: dict = {}
    for key, f in cr.interior_faces().items():
        if f.period is not None:
            out[key] = _primitive_dir(f.period)
    return out


def _claim_axis_directions(rep, name, claim, entry, gs, cr, cache, box, margin):
    family = {"diagonal": {_unsigned(d) for d in DIAGONALS}, "coordinate": {_unsigned(d) for d in COORDINATE_AXES}}[
        claim["family"]
    ]
    dirs = _directions(cr)
    bad = [d for d in dirs.values() if d not in family]
    rep.add(name, bool(dirs) and not bad, f"{len(dirs)} helix axes, all {claim['family']}", _first(bad))


def _claim_axis_classes(rep, name, claim, entry, gs, cr, cache, box, margin):
    classes = set(_directions(cr).values())
    rep.add(name, len(classes) == claim["count"], f"{len(classes)} axis directions", classes)


def _claim_axes_around_edge(rep, name, claim, entry, gs, cr, cache, box, margin):
    bad = []
    for e in cr.interior_edges():
        tally: dict = {}
        for key in cr.edge_faces.get(e, ()):
            d = _primitive_dir(cr.faces[key].period)
            tally[d] = tally.get(d, 0) + 1
        if sorted(tally.values()) != [claim["each"]] * 3:
            bad.append(e)
    rep.add(name, not bad, f"each axis direction occurs {claim['each']} times around every interior edge", _first(bad))


def _claim_projection(rep, name, claim, entry, gs, cr, cache, box, margin):
    face = trace_base_face(gs)
    axis = tuple(vec(*claim["axis"]))
    par = face.period is not None and _primitive_dir(face.period) == _primitive_dir(axis)
    aa = dot(axis, axis)
    proj = {tuple(c - dot(v, axis) / aa * a for c, a in zip(v, axis)) for v in face.vertices}
    want = {tuple(vec(*p)) for p in claim["polygon"]}
    rep.add(name, par and proj == want, f"axis {fmt_vec(face.period)} projection {sorted(map(fmt_vec, proj))}")


def _claim_face_normals(rep, name, claim, entry, gs, cr, cache, box, margin):
    fam = {_unsigned(d) for d in DIAGONALS}
    bad = [k for k, f in cr.interior_faces().items() if (_face_plane(f) or (None,))[0] not in fam]
    rep.add(name, not bad, "every face plane is perpendicular to a main diagonal", _first(bad))


def _claim_cube_petrie(rep, name, claim, entry, gs, cr, cache, box, margin):
    bad = {}
    for key, f in cr.interior_faces().items():
        v = petrie_window_violations(f)
        if v:
            bad[repr(key)] = v
    rep.add(name + ":windows", not bad, "any two but no three consecutive edges in a square, three but not four in a cube", _first(bad.items()))
    if claim.get("all") or claim.get("within"):
        within = claim.get("within") or entry.expected.vertex_set
        missing, extra = compare_with_oracle(cr, cube_petrie_polygons(cr.box, within))
        rep.add(
            name + ":oracle",
            not missing and not extra,
            f"interior faces = Petrie polygons of the cubical tessellation inside {within}",
            {"not_in_oracle": _first(missing), "not_in_region": _first(extra)},
        )


def _claim_cube_diagonal_windows(rep, name, claim, entry, gs, cr, cache, box, margin):
    bad = {}
    for key, f in cr.interior_faces().items():
        v = cube_diagonal_window_violations(f)
        if v:
            bad[repr(key)] = v
    rep.add(name, not bad, "consecutive-edge cube windows on every interior face", _first(bad.items()))
    # the faces around an edge e = uv correspond to the six edges of C_e avoiding u and v
    wrong = []
    for e in cr.interior_edges():
        u, w = e
        want = {s for s in _cube_edges_of_diagonal(u, w) if u not in s and w not in s}
        got = set()
        for key in cr.edge_faces.get(e, ()):
            x, y = _window_around_edge(cr.faces[key], u, w)
            got |= _cube_edges_of_diagonal(x, u) & _cube_edges_of_diagonal(u, w) & _cube_edges_of_diagonal(w, y)
        if got != want:
            wrong.append(e)
    rep.add(name + ":edge_correspondence", not wrong, "faces around e match the six edges of C_e avoiding e", _first(wrong))


def _window_around_edge(face: Face, u, w) -> tuple:
    """Vertices ``x, y`` with ``x, u, w, y`` consecutive on ``face``."""
    x = next(a if b == w else b for a, b in face.neighbors_of(u) if w in (a, b))
    y = next(a if b == u else b for a, b in face.neighbors_of(w) if u in (a, b))
    return x, y


def _claim_apeirohedra(rep, name, claim, entry, gs, cr, cache, box, margin):
    rep.skip(
        name,
        f"a compound of {claim['count']} apeirohedra needs connected components of an unbounded structure; "
        "only the partition of faces by axis direction is checked",
    )


def _lambda_image(cache, name, claim, box, margin):
    base = cache.generators(name)
    return cache.region_of(apply_operation(base, claim["op"], claim["element"]), box, margin)


def _claim_lambda_equals(rep, name, claim, entry, gs, cr, cache, box, margin):
    img = _lambda_image(cache, entry.name, claim, box, margin)
    other = cache.region(claim["other"], box, margin)
    diff = {k: _first(v) for k, v in compare_regions(img, other).items() if v}
    rep.add(name, not diff, f"{claim['op']}({claim['element']}) image equals {claim['other']}", diff)


def congruent_regions(a: ComplexRegion, b: ComplexRegion) -> bool:
    sa, sb = gen_ops._region_signature(a), gen_ops._region_signature(b)
    return sa == sb or any(gen_ops._transform_signature(sa, m) == sb for m in all_signed_permutations())


def _claim_lambda_congruent(rep, name, claim, entry, gs, cr, cache, box, margin):
    a = _lambda_image(cache, entry.name, claim, box, margin)
    b = _lambda_image(cache, claim["other"], claim, box, margin)
    rep.add(name, congruent_regions(a, b), f"{claim['op']}({claim['element']}) images of {entry.name} and {claim['other']}")


def _claim_lambda_graph(rep, name, claim, entry, gs, cr, cache, box, margin):
    base = cache.region(entry.source["base"], box, margin)
    ok = base.interior_vertices() == cr.interior_vertices() and base.interior_edges() == cr.interior_edges()
    rep.add(name, ok, f"same vertex and edge sets as {entry.source['base']}")


def _claim_petrie_pair(rep, name, claim, entry, gs, cr, cache, box, margin):
    ap = gen_ops.apeir(entry.source["q"])
    cyc = ap.skeleton_cyclic()
    pet = gen_ops.petrie_lambda(cyc, ap.T[3])
    back = gen_ops.petrie_lambda(pet, ap.T[3])
    mv = (mirror_vector(cyc.R0, cyc.R1), mirror_vector(pet.R0, pet.R1))
    rc = cache.region_of(cyc, box, margin)
    rp = cache.region_of(pet, box, margin)
    same = not any(compare_regions(rc, cr).values()) and not any(compare_regions(rp, cr).values())
    rep.add(name + ":mirror_vectors", set(mv) == {(0, 1), (0, 2)}, f"{mv[0]} <-> {mv[1]}")
    rep.add(name + ":same_skeleton", same, "cyclic form and its Petrie image build this skeleton")
    rep.add(name + ":involutory", back.R1 == cyc.R1, "applying the operation twice restores R1")


def _claim_cyclic_sg(rep, name, claim, entry, gs, cr, cache, box, margin):
    ap = gen_ops.apeir(entry.source["q"])
    cyc = ap.skeleton_cyclic()
    form = cyc
    if tuple(claim["mirror_vector"]) != mirror_vector(cyc.R0, cyc.R1):
        form = gen_ops.petrie_lambda(cyc, ap.T[3])
    lab = identify(special_group(form.generators)).name
    rep.add(f"{name}:{tuple(claim['mirror_vector'])}", lab == claim["label"], lab, {"expected": claim["label"]})


CLAIMS = {
    "base_face": _claim_base_face,
    "base_face_center": _claim_base_face_center,
    "oracle": _claim_oracle,
    "semiregular_S": _claim_semiregular_S,
    "coplanar_pairs": _claim_coplanar_pairs,
    "edge_degree": _claim_edge_degree,
    "subcomplex_of": _claim_subcomplex,
    "same_edge_graph": _claim_same_edge_graph,
    "vertex_figure_group": _claim_vf_group,
    "vertex_figure_vertices": _claim_vf_vertices,
    "vertex_figure_adjacency": _claim_vf_adjacency,
    "axis_directions": _claim_axis_directions,
    "axis_classes": _claim_axis_classes,
    "axes_around_edge": _claim_axes_around_edge,
    "base_face_projection": _claim_projection,
    "face_normals": _claim_face_normals,
    "cube_petrie": _claim_cube_petrie,
    "cube_diagonal_windows": _claim_cube_diagonal_windows,
    "apeirohedra_count": _claim_apeirohedra,
    "lambda_image_equals": _claim_lambda_equals,
    "lambda_image_congruent": _claim_lambda_congruent,
    "lambda_preserves_graph": _claim_lambda_graph,
    "petrie_pair": _claim_petrie_pair,
    "cyclic_special_group": _claim_cyclic_sg,
}


def verify_all(
    names: Sequence[str] | None,
    box: Box,
    catalog: Catalog | None = None,
    fail_fast: bool = False,
) -> list[Report]:
    catalog = catalog or default_catalog()
    cache = RegionCache(catalog)
    out = []
    for name in names if names is not None else catalog.names():
        rep = verify_entry(name, box, catalog, cache)
        out.append(rep)
        if fail_fast and not rep.passed:
            break
    return out
