"""Finite groups of signed permutation matrices and their labels."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .exact_geometry import (
    IDENTITY_MATRIX,
    Isometry,
    Matrix3,
    as_matrix,
    compose,
    fixed_space_dimension,
    mat_det,
    mat_mul,
    mat_neg,
    matrix_order,
    vec,
    vec_mat,
)

MINUS_I: Matrix3 = mat_neg(IDENTITY_MATRIX)


class PointGroupError(ValueError):
    pass


class InvalidEdgeStabilizerError(PointGroupError):
    pass


class UnsupportedGroupError(PointGroupError):
    pass


@dataclass(frozen=True)
class FinitePointGroup:
    elements: frozenset
    generators: tuple = ()

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def all_proper(self) -> bool:
        return all(mat_det(m) == 1 for m in self.elements)

    @property
    def has_inversion(self) -> bool:
        return MINUS_I in self.elements

    def rotation_subgroup(self) -> "FinitePointGroup":
        rots = [m for m in self.elements if mat_det(m) == 1]
        return FinitePointGroup(frozenset(rots), tuple(sorted(rots)))


def closure(gens: Iterable[Sequence]) -> FinitePointGroup:
    """Smallest multiplicatively closed set containing ``gens`` and the identity."""
    gens_t = tuple(as_matrix(g) for g in gens)
    elements = {IDENTITY_MATRIX}
    frontier = [IDENTITY_MATRIX]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens_t:
                p = mat_mul(m, g)
                if p not in elements:
                    elements.add(p)
                    nxt.append(p)
        frontier = nxt
        if len(elements) > 48:  # pragma: no cover - impossible for signed permutations
            raise UnsupportedGroupError("closure exceeded 48 elements")
    return FinitePointGroup(frozenset(elements), gens_t)


@dataclass(frozen=True)
class PointGroupLabel:
    name: str
    order: int
    proper: bool
    inversion: bool
    diagnostics: str = ""

    def __str__(self) -> str:
        return self.name


def _common_fixed_vector(elements) -> bool:
    import itertools

    for cand in itertools.product((0, 1, -1), repeat=3):
        if any(cand) and all(vec_mat(cand, m) == cand for m in elements):
            return True
    return False


def _is_cyclic(elements) -> bool:
    n = len(elements)
    return any(matrix_order(m) == n for m in elements)


def identify(group: FinitePointGroup) -> PointGroupLabel:
    """Label a closed group by (order, all proper, contains -I)."""
    n, proper, inv = group.order, group.all_proper, group.has_inversion

    def lab(name: str, diag: str = "") -> PointGroupLabel:
        return PointGroupLabel(name, n, proper, inv, diag)

    if n == 48:
        return lab("[3,4]")
    if n == 24:
        if proper:
            return lab("[3,4]+")
        return lab("[3,3]*") if inv else lab("[3,3]")
    if n == 12 and proper:
        return lab("[3,3]+")
    if n == 16 and inv:
        return lab("[4,2]")
    els = group.elements
    if n <= 8 and _common_fixed_vector(els):
        if _is_cyclic(els):
            if n <= 4:
                return lab(f"C{n}")
        elif n % 2 == 0 and n // 2 <= 4:
            half = n // 2
            if any(matrix_order(m) == half for m in els) or half <= 2:
                return lab(f"D{half}")
    kind = "proper" if proper else "improper"
    return lab(f"other({n},{kind},{'inversion' if inv else 'no-inversion'})")


@dataclass(frozen=True)
class EdgeStabilizerSpec:
    kind: str  # "cyclic" | "dihedral"
    r: int
    generators: tuple = ()
    below_minimum: bool = False

    def label(self) -> str:
        return f"{'C' if self.kind == 'cyclic' else 'D'}{self.r if self.kind == 'cyclic' else self.r // 2}"


def isometry_closure(gens: Sequence[Isometry], limit: int = 96) -> list[Isometry]:
    """Closure of a finite set of isometries (fails if it exceeds ``limit``)."""
    ident = Isometry.identity()
    elements = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                p = compose(a, g)
                if p not in elements:
                    elements.add(p)
                    nxt.append(p)
                    if len(elements) > limit:
                        raise UnsupportedGroupError(f"group generated by {len(gens)} isometries exceeds {limit}")
        frontier = nxt
    return sorted(elements, key=lambda g: (g.linear, g.translation))


def classify_edge_stabilizer(gens: Sequence[Isometry], base_edge: tuple) -> EdgeStabilizerSpec:
    """Kind and order of the pointwise stabilizer of ``base_edge`` generated by ``gens``."""
    u, v = vec(base_edge[0]), vec(base_edge[1])
    for g in gens:
        if g.apply(u) != u or g.apply(v) != v:
            raise InvalidEdgeStabilizerError(f"{g.describe()} does not fix the base edge pointwise")
    try:
        group = isometry_closure(list(gens), limit=8)
    except UnsupportedGroupError as exc:
        raise UnsupportedGroupError("edge stabilizer larger than 8 is out of scope") from exc
    r = len(group)
    proper = all(g.proper for g in group)
    cyclic = any(g.order() == r for g in group)
    kind = "cyclic" if cyclic and proper else "dihedral"
    if r == 2 and not proper:
        kind = "dihedral" if len(gens) > 1 else "cyclic"
    return EdgeStabilizerSpec(kind, r, tuple(gens), below_minimum=r < 2)


def mirror_vector(r0: Isometry, r1: Isometry) -> tuple[int, int]:
    for name, g in (("R0", r0), ("R1", r1)):
        if not g.is_involution():
            raise PointGroupError(f"{name} is not an involution: {g.describe()}")
    return fixed_space_dimension(r0), fixed_space_dimension(r1)  # type: ignore[return-value]


def special_group(gens: Iterable[Isometry]) -> FinitePointGroup:
    return closure([g.linear for g in gens])
