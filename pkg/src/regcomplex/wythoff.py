"""Wythoff construction of regular polygonal complexes in a bounded box.

A complex is given by its distinguished generators ``R0``, ``R1`` and the
pointwise stabilizer ``G2`` of the base edge.  Its vertices, edges and faces
are the images of the base vertex, the base edge ``{o, o R0}`` and the base
face (the orbit of ``o`` under ``<R0, R1>``) under the generated group.
"""

from __future__ import annotations

import json
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import kernel
from .exact_geometry import (
    Isometry,
    Vec3,
    add,
    all_signed_permutations,
    compose,
    cross,
    dot,
    fmt_rational,
    matrix_order,
    norm2,
    sub,
    vec,
    vec_mat,
)
from .lattices import Box, grow, in_box, shrink
from .point_groups import EdgeStabilizerSpec, classify_edge_stabilizer, isometry_closure

ORIGIN: Vec3 = (Fraction(0), Fraction(0), Fraction(0))


class WythoffError(ValueError):
    pass


class GeneratorSetError(WythoffError):
    pass


class DegenerateFaceError(WythoffError):
    """The base face would be a linear apeirogon (or a single point)."""


class TraceOverflowError(WythoffError):
    pass


class ResourceLimitError(WythoffError):
    def __init__(self, message: str, partial: "ComplexRegion | None" = None):
        super().__init__(message)
        self.partial = partial


class BoundaryError(WythoffError):
    """Query on an element too close to the box boundary to be trusted."""


class UnknownLabelError(WythoffError):
    pass


# ---------------------------------------------------------------- generator sets


@dataclass(frozen=True)
class GeneratorSet:
    """Distinguished generators ``(R0, R1, G2)`` of a regular complex."""

    R0: Isometry
    R1: Isometry
    G2: tuple[Isometry, ...]
    base_vertex: Vec3 = ORIGIN
    names: tuple[tuple[str, Isometry], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "G2", tuple(self.G2))
        object.__setattr__(self, "base_vertex", vec(self.base_vertex))
        names = self.names.items() if isinstance(self.names, dict) else self.names
        object.__setattr__(self, "names", tuple(sorted(names)))
        self.validate()

    def validate(self) -> None:
        o = self.base_vertex
        for label, g in (("R0", self.R0), ("R1", self.R1)):
            if not g.is_involution():
                raise GeneratorSetError(f"{label} is not an involution: {g.describe()}")
        if self.R1.apply(o) != o:
            raise GeneratorSetError("R1 does not fix the base vertex")
        twin = self.R0.apply(o)
        if twin == o:
            raise GeneratorSetError("R0 fixes the base vertex; the twin vertex must be distinct")
        for g in self.G2:
            if g.apply(o) != o or g.apply(twin) != twin:
                raise GeneratorSetError(f"G2 generator {g.describe()} does not fix the base edge")

    @property
    def twin(self) -> Vec3:
        return self.R0.apply(self.base_vertex)

    @property
    def generators(self) -> tuple[Isometry, ...]:
        return (self.R0, self.R1) + self.G2

    def named(self) -> dict[str, Isometry]:
        out = dict(self.names)
        out.setdefault("R0", self.R0)
        out.setdefault("R1", self.R1)
        return out

    def g2_elements(self) -> list[Isometry]:
        return isometry_closure(list(self.G2), limit=48)

    def edge_stabilizer(self) -> EdgeStabilizerSpec:
        return classify_edge_stabilizer(self.G2, (self.base_vertex, self.twin))

    def with_names(self, names: dict[str, Isometry]) -> "GeneratorSet":
        return GeneratorSet(self.R0, self.R1, self.G2, self.base_vertex, names)

    def to_json(self) -> dict:
        return {
            "R0": self.R0.to_json(),
            "R1": self.R1.to_json(),
            "G2": [g.to_json() for g in self.G2],
            "base_vertex": [fmt_rational(c) for c in self.base_vertex],
            "names": {k: v.to_json() for k, v in self.names},
        }

    @classmethod
    def from_json(cls, data: dict) -> "GeneratorSet":
        try:
            return cls(
                Isometry.from_json(data["R0"]),
                Isometry.from_json(data["R1"]),
                tuple(Isometry.from_json(g) for g in data["G2"]),
                vec(*data.get("base_vertex", (0, 0, 0))),
                {k: Isometry.from_json(v) for k, v in data.get("names", {}).items()},
            )
        except KeyError as exc:
            raise GeneratorSetError(f"generator set missing field {exc}") from exc


# ---------------------------------------------------------------- faces


@dataclass(frozen=True)
class FaceClass:
    kind: str  # convex | skew | zigzag | helix
    n: int

    def __str__(self) -> str:
        if self.kind == "convex":
            return f"{self.n}_c"
        if self.kind == "skew":
            return f"{self.n}_s"
        if self.kind == "zigzag":
            return "inf2"
        return f"inf{self.n}"

    @property
    def finite(self) -> bool:
        return self.kind in ("convex", "skew")

    @property
    def planar(self) -> bool:
        return self.kind in ("convex", "zigzag")

    @classmethod
    def parse(cls, text: str) -> "FaceClass":
        t = text.strip()
        if t.startswith("inf"):
            k = int(t[3:])
            return cls("zigzag", 2) if k == 2 else cls("helix", k)
        p, kind = t.split("_")
        return cls("convex" if kind == "c" else "skew", int(p))


def ConvexPolygon(p: int) -> FaceClass:
    return FaceClass("convex", p)


def SkewPolygon(p: int) -> FaceClass:
    return FaceClass("skew", p)


Zigzag = FaceClass("zigzag", 2)


def Helix(k: int) -> FaceClass:
    return FaceClass("helix", k)


def _lex_negative(v: Sequence) -> bool:
    for c in v:
        if c:
            return c < 0
    return False


def canonical_face_key(vertices: Sequence[tuple], period: tuple | None) -> tuple:
    """Canonical form of a face.

    Finite faces: lexicographically least rotation or reflection of the cycle.
    Infinite faces: the period oriented lexicographically positive, followed by
    the least one-period segment whose first vertex lies in the fundamental
    slab ``0 <= <x, P> < <P, P>``.
    """
    verts = [tuple(v) for v in vertices]
    n = len(verts)
    if period is None:
        best = None
        for seq in (verts, verts[::-1]):
            for i in range(n):
                cand = tuple(seq[i:] + seq[:i])
                if best is None or cand < best:
                    best = cand
        return ("finite", best)
    p = tuple(period)
    if _lex_negative(p):
        # walk the other way: x0, x_{-1}, x_{-2}, ...
        verts = [verts[0]] + [tuple(c - d for c, d in zip(verts[i], p)) for i in range(n - 1, 0, -1)]
        p = tuple(-c for c in p)
    pp = dot(p, p)
    ext = verts + [tuple(c + d for c, d in zip(v, p)) for v in verts]
    best = None
    for i in range(n):
        k = dot(ext[i], p) // pp
        seg = tuple(tuple(c - k * d for c, d in zip(ext[j], p)) for j in range(i, i + n))
        if best is None or seg < best:
            best = seg
    return ("infinite", p, best)


@dataclass(frozen=True)
class Face:
    """A face: full cycle if finite, one period segment plus period if infinite."""

    cls: FaceClass
    vertices: tuple
    period: tuple | None = None

    @cached_property
    def key(self) -> tuple:
        return canonical_face_key(self.vertices, self.period)

    def vertex_at(self, i: int) -> tuple:
        n = len(self.vertices)
        q, r = divmod(i, n)
        v = self.vertices[r]
        if self.period is None or q == 0:
            return v
        return tuple(c + q * d for c, d in zip(v, self.period))

    def window(self, lo: int, hi: int) -> list[tuple]:
        return [self.vertex_at(i) for i in range(lo, hi + 1)]

    def index_range_for_box(self, box: Box) -> tuple[int, int]:
        """Index range covering every vertex that can lie in ``box``."""
        n = len(self.vertices)
        if self.period is None:
            return 0, n - 1
        p = self.period
        corners = [(x, y, z) for x in box[0] for y in box[1] for z in box[2]]
        dmin = min(dot(c, p) for c in corners)
        dmax = max(dot(c, p) for c in corners)
        pp = dot(p, p)
        ds = [dot(v, p) for v in self.vertices]
        qlo = math.floor(Fraction(dmin - max(ds)) / pp)
        qhi = math.ceil(Fraction(dmax - min(ds)) / pp)
        return qlo * n, qhi * n + n - 1

    def vertices_in_box(self, box: Box) -> list[tuple]:
        lo, hi = self.index_range_for_box(box)
        return [v for v in self.window(lo, hi) if in_box(v, box)]

    def edges_in_box(self, box: Box) -> list[tuple]:
        lo, hi = self.index_range_for_box(box)
        if self.period is None:
            pts = list(self.vertices) + [self.vertices[0]]
        else:
            pts = self.window(lo, hi + 1)
        out = []
        for u, w in zip(pts, pts[1:]):
            if in_box(u, box) and in_box(w, box):
                out.append(edge_key(u, w))
        return out

    def neighbors_of(self, v: tuple) -> list[tuple[tuple, tuple]]:
        """The pairs of face-neighbours of ``v`` (one per passage of the face)."""
        n = len(self.vertices)
        out = []
        for i, x in enumerate(self.vertices):
            if self.period is None:
                if x == v:
                    out.append((self.vertices[i - 1], self.vertices[(i + 1) % n]))
                continue
            d = tuple(a - b for a, b in zip(v, x))
            q = _multiple_of(d, self.period)
            if q is not None:
                j = i + q * n
                out.append((self.vertex_at(j - 1), self.vertex_at(j + 1)))
        return out

    def contains_vertex(self, v: tuple) -> bool:
        return bool(self.neighbors_of(v))

    def printed(self) -> dict:
        """Three consecutive vertices around the first one, plus the period."""
        return {
            "class": str(self.cls),
            "vertices": [[fmt_rational(c) for c in v] for v in self.vertices],
            "period": None if self.period is None else [fmt_rational(c) for c in self.period],
        }

    def transformed(self, fn_point, fn_linear) -> "Face":
        per = None if self.period is None else tuple(fn_linear(self.period))
        return Face(self.cls, tuple(tuple(fn_point(v)) for v in self.vertices), per)


def _multiple_of(d: Sequence, p: Sequence) -> int | None:
    q = None
    for a, b in zip(d, p):
        if b == 0:
            if a != 0:
                return None
            continue
        r = Fraction(a) / b
        if r.denominator != 1 or (q is not None and r != q):
            return None
        q = int(r)
    return 0 if q is None else q


def edge_key(u: Sequence, w: Sequence) -> tuple:
    u, w = tuple(u), tuple(w)
    return (u, w) if u <= w else (w, u)


def _coplanar(points: Sequence[Sequence]) -> bool:
    p0 = points[0]
    diffs = [sub(p, p0) for p in points[1:]]
    diffs = [d for d in diffs if any(d)]
    normal = None
    for i in range(len(diffs)):
        for j in range(i + 1, len(diffs)):
            c = cross(diffs[i], diffs[j])
            if any(c):
                normal = c
                break
        if normal is not None:
            break
    if normal is None:
        return True
    return all(dot(d, normal) == 0 for d in diffs)


def _collinear(points: Sequence[Sequence]) -> bool:
    p0 = points[0]
    diffs = [sub(p, p0) for p in points[1:] if any(sub(p, p0))]
    return all(not any(cross(diffs[0], d)) for d in diffs[1:]) if diffs else True


def face_shift(gs: GeneratorSet) -> Isometry:
    """The one-step shift ``R1 then R0`` along the base face (o -> twin)."""
    return compose(gs.R1, gs.R0)


def trace_base_face(gs: GeneratorSet, max_steps: int = 48) -> Face:
    o = gs.base_vertex
    shift = face_shift(gs)
    n_lin = matrix_order(shift.linear)
    if n_lin > max_steps:
        raise TraceOverflowError(f"face shift has linear order {n_lin} > {max_steps}")
    power = shift.power(n_lin)
    verts = [o]
    for _ in range(max(n_lin, 2) * 2):
        verts.append(shift.apply(verts[-1]))
    if power.is_identity():
        p = n_lin
        cycle = verts[:p]
        if p < 3 or len(set(cycle)) != p:
            raise DegenerateFaceError(f"base face closes after {p} steps")
        cls = ConvexPolygon(p) if _coplanar(cycle) else SkewPolygon(p)
        return Face(cls, tuple(cycle), None)
    period = power.translation
    if n_lin == 1 or _collinear(verts):
        raise DegenerateFaceError("face shift is a translation: the base face would be a linear apeirogon")
    planar = _coplanar(verts)
    if planar:
        if n_lin != 2:
            raise DegenerateFaceError(f"planar infinite face with {n_lin} vertices per period")
        cls = Zigzag
    else:
        cls = Helix(n_lin)
    return Face(cls, tuple(verts[:n_lin]), period)


def face_axis(face: Face) -> tuple | None:
    """Direction of the axis of an infinite face (the period)."""
    return face.period


# ---------------------------------------------------------------- regions


@dataclass
class ComplexRegion:
    box: Box
    vertices: frozenset
    edges: frozenset
    faces: dict  # canonical key -> Face
    base_face: Face
    interior_margin: int = 2
    n_elements: int = 0
    complete: bool = True

    @property
    def interior(self) -> Box:
        return shrink(self.box, self.interior_margin)

    def is_interior(self, p: Sequence) -> bool:
        return in_box(p, self.interior)

    @cached_property
    def edge_faces(self) -> dict:
        idx = defaultdict(list)
        for key, f in self.faces.items():
            for e in f.edges_in_box(self.box):
                idx[e].append(key)
        return idx

    @cached_property
    def vertex_faces(self) -> dict:
        idx = defaultdict(list)
        for key, f in self.faces.items():
            for v in f.vertices_in_box(self.box):
                idx[v].append(key)
        return idx

    def interior_vertices(self) -> set:
        return {v for v in self.vertices if self.is_interior(v)}

    def interior_edges(self) -> set:
        return {e for e in self.edges if self.is_interior(e[0]) and self.is_interior(e[1])}

    def interior_faces(self) -> dict:
        """Faces with at least one vertex in the interior box."""
        inner = self.interior
        return {k: f for k, f in self.faces.items() if f.vertices_in_box(inner)}

    def neighbors(self, v: Sequence) -> set:
        v = tuple(v)
        out = set()
        for a, b in self.edges:
            if a == v:
                out.add(b)
            elif b == v:
                out.add(a)
        return out


def _frame(gs: GeneratorSet):
    """Integer frame: ``x' = (x - b) * D`` with ``b`` the base vertex."""
    b = gs.base_vertex
    conj = []
    for g in gs.generators:
        t = add(sub(vec_mat(b, g.linear), b), g.translation)
        conj.append(Isometry(g.linear, t))
    denom = 1
    for g in conj:
        for c in g.translation:
            denom = denom * c.denominator // math.gcd(denom, c.denominator)
    return b, denom, conj


def build_complex(
    gs: GeneratorSet,
    box: Box,
    interior_margin: int = 2,
    node_cap: int = 3_000_000,
    require_base: bool = False,
) -> ComplexRegion:
    """Bounded Wythoff construction inside ``box`` (units of a).

    The vertex graph is explored breadth-first inside the box grown by
    ``interior_margin``, keeping one group element per vertex.  A step goes
    from ``g`` to ``R0 k g`` with ``k`` in the vertex stabilizer
    ``<R1, G2>``, which reaches every neighbour.  The star of each vertex is
    the image of the base star ``{k(F) : k in <R1, G2>}``, so every vertex
    kept in the box carries all of its edges and faces.
    """
    for lo, hi in box:
        if lo > hi:
            raise WythoffError(f"empty box {box}")
    base_face = trace_base_face(gs)
    if not in_box(gs.base_vertex, box):
        if require_base:
            raise WythoffError("box does not contain the base vertex")
        return ComplexRegion(box, frozenset(), frozenset(), {}, base_face, interior_margin, 0)

    b, denom, conj = _frame(gs)
    stab = isometry_closure(conj[1:], limit=48)
    stab_idx = sorted({kernel.PERM_INDEX[k.linear] for k in stab})
    r0 = conj[0]
    steps = sorted({kernel.encode(compose(r0, k), denom) for k in stab})

    work = grow(box, interior_margin)
    bounds = []
    for axis, (lo, hi) in enumerate(work):
        bounds += [math.ceil((lo - b[axis]) * denom), math.floor((hi - b[axis]) * denom)]
    reps, hit_cap = kernel.orbit_bfs(kernel.MUL, kernel.ACT, steps, tuple(bounds), node_cap, kernel.IDENTITY_INDEX)

    trivial = denom == 1 and not any(b)

    def to_orig(p):
        if trivial:
            return p
        return tuple(Fraction(c, denom) + bc for c, bc in zip(p, b))

    def to_frame(p):
        if trivial:
            return tuple(int(c) for c in p)
        return tuple(int((c - bc) * denom) for c, bc in zip(p, b))

    twin_f = to_frame(gs.twin)
    seg_f = [to_frame(v) for v in base_face.vertices]
    per_f = None if base_face.period is None else tuple(int(c * denom) for c in base_face.period)
    act = kernel.act
    mul = kernel.MUL

    vertex_set = set()
    edge_set = set()
    faces: dict = {}
    box_f = tuple((Fraction(lo - bc) * denom, Fraction(hi - bc) * denom) for (lo, hi), bc in zip(box, b))

    for lg, tx, ty, tz in reps:
        t = (tx, ty, tz)
        vertex_set.add(t)
        star_box = in_box(t, box_f)
        for lk in stab_idx:
            li = mul[48 * lk + lg]
            m = act(li, twin_f)
            w = (m[0] + tx, m[1] + ty, m[2] + tz)
            edge_set.add((t, w) if t <= w else (w, t))
            if star_box:
                verts = []
                for v in seg_f:
                    q = act(li, v)
                    verts.append((q[0] + tx, q[1] + ty, q[2] + tz))
                per = None if per_f is None else act(li, per_f)
                face = Face(base_face.cls, tuple(verts), per)
                faces.setdefault(face.key, face)

    vertices = frozenset(to_orig(v) for v in vertex_set if in_box(v, box_f))
    edges = frozenset(
        edge_key(to_orig(u), to_orig(w)) for u, w in edge_set if in_box(u, box_f) and in_box(w, box_f)
    )
    if not trivial:
        framed, faces = faces, {}
        for f in framed.values():
            g = f.transformed(to_orig, lambda p: tuple(Fraction(c, denom) for c in p))
            faces[g.key] = g
    region = ComplexRegion(box, vertices, edges, faces, base_face, interior_margin, len(reps), not hit_cap)
    if hit_cap:
        raise ResourceLimitError(f"vertex enumeration hit the node cap ({node_cap})", partial=region)
    return region


# ---------------------------------------------------------------- local queries


def faces_per_edge(cr: ComplexRegion, edge: Sequence) -> int:
    e = edge_key(edge[0], edge[1])
    if not (cr.is_interior(e[0]) and cr.is_interior(e[1])):
        raise BoundaryError(f"edge {e} is not interior")
    if e not in cr.edges:
        raise WythoffError(f"{e} is not an edge of the complex")
    return len(cr.edge_faces.get(e, ()))


@dataclass(frozen=True)
class VertexFigure:
    center: tuple
    neighbor_positions: frozenset
    edges: Counter = field(hash=False, compare=True)

    def relative(self) -> tuple[set, Counter]:
        c = self.center
        rel = {tuple(a - b for a, b in zip(p, c)) for p in self.neighbor_positions}
        edges = Counter()
        for (u, w), k in self.edges.items():
            edges[edge_key(sub(u, c), sub(w, c))] += k
        return rel, edges


def vertex_figure(cr: ComplexRegion, v: Sequence) -> VertexFigure:
    v = tuple(v)
    if not cr.is_interior(v):
        raise BoundaryError(f"vertex {v} is not interior")
    if v not in cr.vertices:
        raise WythoffError(f"{v} is not a vertex of the complex")
    edges: Counter = Counter()
    for key in cr.vertex_faces.get(v, ()):
        for u, w in cr.faces[key].neighbors_of(v):
            edges[edge_key(u, w)] += 1
    return VertexFigure(v, frozenset(cr.neighbors(v)), edges)


# reference vertex-figure models: (neighbour vectors, predicate on a pair)
def _cuboct():
    out = []
    for i in range(3):
        for s in (1, -1):
            for t in (1, -1):
                v = [0, 0, 0]
                v[i] = s
                v[(i + 1) % 3] = t
                out.append(tuple(v))
    return out


_MODELS = {
    "tetrahedron": ([(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)], lambda u, w: True),
    "cube": (
        [(x, y, z) for x in (1, -1) for y in (1, -1) for z in (1, -1)],
        lambda u, w: sum(a != b for a, b in zip(u, w)) == 1,
    ),
    "octahedron": (
        [tuple(s if j == i else 0 for j in range(3)) for i in range(3) for s in (1, -1)],
        lambda u, w: dot(u, w) == 0,
    ),
    "cuboctahedron": (_cuboct(), lambda u, w: dot(u, w) == 1),
    "ns-cuboctahedron": (_cuboct(), lambda u, w: dot(u, w) == -1),
    "square": ([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)], lambda u, w: dot(u, w) == 0),
}


def reference_vertex_figure(label: str) -> tuple[set, Counter]:
    mult = 1
    name = label
    if label.startswith("double "):
        mult, name = 2, label[len("double ") :]
    if name not in _MODELS:
        raise UnknownLabelError(f"unknown vertex-figure label {label!r}")
    pts, pred = _MODELS[name]
    edges = Counter()
    for i, u in enumerate(pts):
        for w in pts[i + 1 :]:
            if pred(u, w):
                edges[edge_key(u, w)] = mult
    return set(pts), edges


VERTEX_FIGURE_LABELS = tuple(_MODELS) + tuple("double " + k for k in _MODELS)


def _rational_sqrt(q: Fraction) -> Fraction | None:
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def match_vertex_figure(vf: VertexFigure, expected: str) -> bool:
    """Congruence (signed permutation plus scaling) with a reference model."""
    ref_pts, ref_edges = reference_vertex_figure(expected)
    rel, edges = vf.relative()
    if not rel or len(rel) != len(ref_pts):
        return False
    lengths = {norm2(p) for p in rel}
    if len(lengths) != 1:
        return False
    s = _rational_sqrt(Fraction(lengths.pop()) / norm2(next(iter(ref_pts))))
    if s is None:
        return False
    for m in all_signed_permutations():
        image = {tuple(c * s for c in vec_mat(p, m)) for p in ref_pts}
        if image != rel:
            continue
        mapped = Counter()
        for (u, w), k in ref_edges.items():
            mapped[edge_key(tuple(c * s for c in vec_mat(u, m)), tuple(c * s for c in vec_mat(w, m)))] = k
        if mapped == edges:
            return True
    return False


def identify_vertex_figure(vf: VertexFigure) -> str | None:
    for label in VERTEX_FIGURE_LABELS:
        if match_vertex_figure(vf, label):
            return label
    return None


# ---------------------------------------------------------------- symmetries of a region


class AffineMap:
    """Rational affine map ``x -> x A + t`` (used for non-signed-permutation mirrors)."""

    def __init__(self, matrix, translation):
        self.matrix = tuple(tuple(Fraction(e) for e in row) for row in matrix)
        self.translation = tuple(Fraction(c) for c in translation)

    def linear(self, v):
        return tuple(sum(v[i] * self.matrix[i][j] for i in range(3)) for j in range(3))

    def __call__(self, v):
        x = self.linear(v)
        return tuple(a + b for a, b in zip(x, self.translation))

    @classmethod
    def from_isometry(cls, g: Isometry) -> "AffineMap":
        return cls(g.linear, g.translation)

    @classmethod
    def plane_reflection(cls, point, normal) -> "AffineMap":
        n = [Fraction(c) for c in normal]
        nn = sum(c * c for c in n)
        mat = [[(1 if i == j else 0) - 2 * n[i] * n[j] / nn for j in range(3)] for i in range(3)]
        # x -> x - 2 <x - p, n> n / |n|^2
        pn = sum(Fraction(p) * c for p, c in zip(point, n))
        t = [2 * pn * c / nn for c in n]
        return cls(mat, t)


def _integral_like(p: Sequence) -> tuple:
    return tuple(int(c) if Fraction(c).denominator == 1 else Fraction(c) for c in p)


def is_region_symmetry(cr: ComplexRegion, f: AffineMap) -> bool:
    """Does ``f`` map the interior part of ``cr`` into ``cr``?

    Every interior vertex, edge and face whose image is still inside the box
    must land on a vertex, edge or face of the region.
    """
    box = cr.box
    for v in cr.interior_vertices():
        w = _integral_like(f(v))
        if in_box(w, box) and w not in cr.vertices:
            return False
    for u, w in cr.interior_edges():
        a, b = _integral_like(f(u)), _integral_like(f(w))
        if in_box(a, box) and in_box(b, box) and edge_key(a, b) not in cr.edges:
            return False
    for face in cr.interior_faces().values():
        img = face.transformed(lambda p: _integral_like(f(p)), lambda p: _integral_like(f.linear(p)))
        if img.vertices_in_box(box) and img.key not in cr.faces:
            return False
    return True


def base_face_plane(face: Face) -> tuple[tuple, tuple] | None:
    """(point, normal) of the plane of a planar face, else None."""
    if not face.cls.planar:
        return None
    pts = face.window(-1, 1) if face.period is not None else list(face.vertices[:3])
    normal = cross(sub(pts[2], pts[1]), sub(pts[0], pts[1]))
    return pts[1], normal


def face_mirror(gs: GeneratorSet, cr: ComplexRegion) -> AffineMap | None:
    plane = base_face_plane(cr.base_face)
    if plane is None:
        return None
    return AffineMap.plane_reflection(*plane)


def detect_face_mirror(gs: GeneratorSet, cr: ComplexRegion) -> bool:
    """True iff the reflection in the base-face plane is a symmetry of the region."""
    t3 = face_mirror(gs, cr)
    if t3 is None:
        return False
    return is_region_symmetry(cr, t3)


def flag_stabilizer(gs: GeneratorSet, cr: ComplexRegion) -> list[AffineMap]:
    """Symmetries of the region fixing the base vertex, base edge and base face.

    Candidates are the signed-permutation motions fixing the base vertex plus
    the base-face mirror (when the base face is planar).
    """
    o, v = gs.base_vertex, gs.twin
    base_key = cr.base_face.key
    cands = []
    for m in all_signed_permutations():
        t = sub(o, vec_mat(o, m))
        cands.append(AffineMap(m, t))
    t3 = face_mirror(gs, cr)
    if t3 is not None and not all(e in (-1, 0, 1) for row in t3.matrix for e in row):
        cands.append(t3)
    out = []
    for f in cands:
        if _integral_like(f(v)) != tuple(v):
            continue
        img = cr.base_face.transformed(lambda p: _integral_like(f(p)), lambda p: _integral_like(f.linear(p)))
        if img.key != base_key:
            continue
        if is_region_symmetry(cr, f):
            out.append(f)
    return out


# ---------------------------------------------------------------- export


def to_off(cr: ComplexRegion, scale_a: Fraction = Fraction(1)) -> str:
    """OFF text for the finite faces; vertices are the region's vertex set."""
    verts = sorted(cr.vertices)
    index = {v: i for i, v in enumerate(verts)}
    polys = []
    for key in sorted(cr.faces):
        f = cr.faces[key]
        if f.period is None and all(tuple(v) in index for v in f.vertices):
            polys.append([index[tuple(v)] for v in f.vertices])
    lines = ["OFF", f"{len(verts)} {len(polys)} {len(cr.edges)}"]
    for v in verts:
        lines.append(" ".join(_decimal(c * scale_a) for c in v))
    for p in polys:
        lines.append(" ".join(str(x) for x in [len(p)] + p))
    return "\n".join(lines) + "\n"


def _decimal(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return format(float(q), ".12g")


def _coords(v, scale_a) -> list[str]:
    return [fmt_rational(Fraction(c) * scale_a) for c in v]


def sidecar(cr: ComplexRegion, metadata: dict | None = None, scale_a: Fraction = Fraction(1)) -> dict:
    infinite = []
    for key in sorted(cr.faces):
        f = cr.faces[key]
        if f.period is not None:
            infinite.append(
                {
                    "class": str(f.cls),
                    "segment": [_coords(v, scale_a) for v in f.vertices],
                    "period": _coords(f.period, scale_a),
                    "vertices_in_box": [_coords(v, scale_a) for v in f.vertices_in_box(cr.box)],
                }
            )
    return {
        "metadata": metadata or {},
        "box": [list(b) for b in cr.box],
        "vertices": [_coords(v, scale_a) for v in sorted(cr.vertices)],
        "edges": [[_coords(u, scale_a), _coords(w, scale_a)] for u, w in sorted(cr.edges)],
        "finite_faces": [
            [_coords(v, scale_a) for v in cr.faces[k].vertices] for k in sorted(cr.faces) if cr.faces[k].period is None
        ],
        "infinite_faces": infinite,
    }


def dumps(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2)
