"""Exact euclidean isometries with signed-permutation linear parts.

Points are row vectors and isometries act on the right, ``x -> x M + t``.
``compose(A, B)`` is the motion "apply A, then B".
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Vec3 = tuple[Fraction, Fraction, Fraction]
Matrix3 = tuple[tuple[int, int, int], tuple[int, int, int], tuple[int, int, int]]

_VARS = "xyz"


class GeometryError(ValueError):
    """Raised for malformed geometric input."""


class InvalidMatrixError(GeometryError):
    """Raised when a matrix is not a signed permutation matrix."""


def vec(*coords) -> Vec3:
    """Build an exact 3-vector from ints, Fractions or ``"p/q"`` strings."""
    if len(coords) == 1 and not isinstance(coords[0], (int, Fraction, str)):
        coords = tuple(coords[0])
    if len(coords) != 3:
        raise GeometryError(f"expected 3 coordinates, got {len(coords)}")
    return tuple(Fraction(c) for c in coords)  # type: ignore[return-value]


def add(u: Sequence, v: Sequence) -> Vec3:
    return (u[0] + v[0], u[1] + v[1], u[2] + v[2])


def sub(u: Sequence, v: Sequence) -> Vec3:
    return (u[0] - v[0], u[1] - v[1], u[2] - v[2])


def neg(u: Sequence) -> Vec3:
    return (-u[0], -u[1], -u[2])


def scale(u: Sequence, k) -> Vec3:
    return (u[0] * k, u[1] * k, u[2] * k)


def dot(u: Sequence, v: Sequence):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def cross(u: Sequence, v: Sequence) -> Vec3:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def norm2(u: Sequence):
    return dot(u, u)


def fmt_rational(q) -> str:
    """Canonical decimal-free string for a rational, e.g. ``"-1/2"``."""
    return str(Fraction(q))


def fmt_vec(v: Sequence) -> str:
    return "(" + ",".join(fmt_rational(c) for c in v) + ")"


# ---------------------------------------------------------------- matrices

IDENTITY_MATRIX: Matrix3 = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def as_matrix(rows) -> Matrix3:
    """Validate and freeze a signed permutation matrix."""
    try:
        m = tuple(tuple(int(e) for e in row) for row in rows)
    except (TypeError, ValueError) as exc:
        raise InvalidMatrixError(f"matrix entries must be integers: {rows!r}") from exc
    if len(m) != 3 or any(len(row) != 3 for row in m):
        raise InvalidMatrixError(f"expected a 3x3 matrix, got {rows!r}")
    for row in m:
        if any(e not in (-1, 0, 1) for e in row) or sum(e != 0 for e in row) != 1:
            raise InvalidMatrixError(f"not a signed permutation matrix: {rows!r}")
    for j in range(3):
        if sum(m[i][j] != 0 for i in range(3)) != 1:
            raise InvalidMatrixError(f"not a signed permutation matrix: {rows!r}")
    return m  # type: ignore[return-value]


def mat_mul(a: Matrix3, b: Matrix3) -> Matrix3:
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)) for i in range(3)
    )  # type: ignore[return-value]


def mat_transpose(a: Matrix3) -> Matrix3:
    return tuple(tuple(a[j][i] for j in range(3)) for i in range(3))  # type: ignore[return-value]


def mat_neg(a: Matrix3) -> Matrix3:
    return tuple(tuple(-e for e in row) for row in a)  # type: ignore[return-value]


def mat_det(a: Sequence[Sequence]) -> int:
    return (
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    )


def vec_mat(v: Sequence, m: Sequence[Sequence]) -> tuple:
    """Row vector times matrix."""
    return tuple(v[0] * m[0][j] + v[1] * m[1][j] + v[2] * m[2][j] for j in range(3))


def all_signed_permutations() -> list[Matrix3]:
    """The 48 elements of the full octahedral group, in a fixed order."""
    out = []
    for perm in itertools.permutations(range(3)):
        for signs in itertools.product((1, -1), repeat=3):
            rows = [[0, 0, 0] for _ in range(3)]
            for i in range(3):
                rows[i][perm[i]] = signs[i]
            out.append(as_matrix(rows))
    return out


def matrix_order(m: Matrix3) -> int:
    p, k = m, 1
    while p != IDENTITY_MATRIX:
        p = mat_mul(p, m)
        k += 1
    return k


# ---------------------------------------------------------------- isometries


def _check_translation(t: Vec3) -> None:
    for c in t:
        d = c.denominator
        if d & (d - 1):
            raise GeometryError(f"translation denominators must be powers of 2: {fmt_vec(t)}")


@dataclass(frozen=True)
class Isometry:
    """The motion ``x -> x @ linear + translation``."""

    linear: Matrix3
    translation: Vec3 = (Fraction(0), Fraction(0), Fraction(0))

    def __post_init__(self) -> None:
        object.__setattr__(self, "linear", as_matrix(self.linear))
        t = vec(self.translation)
        _check_translation(t)
        object.__setattr__(self, "translation", t)

    @classmethod
    def identity(cls) -> "Isometry":
        return cls(IDENTITY_MATRIX)

    @classmethod
    def from_formula(cls, images: str, translation: Sequence = (0, 0, 0)) -> "Isometry":
        """Parse ``"(-x,z,y)"`` style images, optionally plus a translation.

        ``Isometry.from_formula("(-x,y,-z)", (1, 0, 1))`` is the half-turn
        ``(x,y,z) -> (-x,y,-z) + (1,0,1)``.
        """
        parts = [p.strip() for p in images.strip().strip("()").split(",")]
        if len(parts) != 3:
            raise GeometryError(f"cannot parse isometry images {images!r}")
        rows = [[0, 0, 0] for _ in range(3)]
        for j, part in enumerate(parts):
            m = re.fullmatch(r"([+-]?)([xyz])", part)
            if not m:
                raise GeometryError(f"cannot parse coordinate image {part!r}")
            i = _VARS.index(m.group(2))
            rows[i][j] = -1 if m.group(1) == "-" else 1
        return cls(as_matrix(rows), vec(translation))

    @classmethod
    def point_reflection(cls, center: Sequence) -> "Isometry":
        """Reflection in a point ``c``: ``x -> -x + 2c``."""
        return cls(mat_neg(IDENTITY_MATRIX), scale(vec(center), 2))

    def apply(self, v: Sequence) -> Vec3:
        x = vec_mat(v, self.linear)
        t = self.translation
        return (Fraction(x[0]) + t[0], Fraction(x[1]) + t[1], Fraction(x[2]) + t[2])

    def apply_linear(self, v: Sequence) -> tuple:
        return vec_mat(v, self.linear)

    def then(self, other: "Isometry") -> "Isometry":
        """Apply ``self`` first, then ``other``."""
        return compose(self, other)

    def inverse(self) -> "Isometry":
        return inverse(self)

    def is_identity(self) -> bool:
        return self.linear == IDENTITY_MATRIX and not any(self.translation)

    def is_involution(self) -> bool:
        return compose(self, self).is_identity() and not self.is_identity()

    def is_translation(self) -> bool:
        return self.linear == IDENTITY_MATRIX

    @property
    def proper(self) -> bool:
        return mat_det(self.linear) == 1

    def power(self, k: int) -> "Isometry":
        if k < 0:
            return inverse(self).power(-k)
        out = Isometry.identity()
        for _ in range(k):
            out = compose(out, self)
        return out

    def order(self, limit: int = 48) -> int | None:
        """Smallest ``k >= 1`` with ``self**k = id``, or None if infinite."""
        if matrix_order(self.linear) > limit:
            return None
        p = self
        for k in range(1, limit + 1):
            if p.is_identity():
                return k
            p = compose(p, self)
        return None

    def describe(self) -> str:
        comps = []
        for j in range(3):
            for i in range(3):
                if self.linear[i][j]:
                    comps.append(("-" if self.linear[i][j] < 0 else "") + _VARS[i])
        out = "(x,y,z) -> (" + ",".join(comps) + ")"
        if any(self.translation):
            out += " + " + fmt_vec(self.translation)
        return out

    def to_json(self) -> dict:
        return {
            "linear": [list(row) for row in self.linear],
            "translation": [fmt_rational(c) for c in self.translation],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Isometry":
        try:
            return cls(as_matrix(data["linear"]), vec(*data["translation"]))
        except KeyError as exc:
            raise GeometryError(f"isometry record missing field {exc}") from exc

    def __repr__(self) -> str:
        return f"Isometry[{self.describe()}]"


def compose(a: Isometry, b: Isometry) -> Isometry:
    """The motion "apply ``a``, then ``b``"."""
    return Isometry(mat_mul(a.linear, b.linear), b.apply(a.translation))


def apply(a: Isometry, v: Sequence) -> Vec3:
    return a.apply(v)


def inverse(a: Isometry) -> Isometry:
    minv = mat_transpose(a.linear)
    return Isometry(minv, neg(vec_mat(a.translation, minv)))


def compose_all(items: Iterable[Isometry]) -> Isometry:
    out = Isometry.identity()
    for g in items:
        out = compose(out, g)
    return out


# ---------------------------------------------------------------- linear algebra


def _rank_and_consistency(a: list[list[Fraction]], b: list[Fraction]) -> tuple[int, bool]:
    """Rank of ``a`` and whether ``a y = b`` is solvable (column form)."""
    rows = [list(r) + [bb] for r, bb in zip(a, b)]
    n_cols = len(a[0])
    rank = 0
    for col in range(n_cols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col] / rows[rank][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    consistent = all(row[-1] == 0 for row in rows[rank:])
    return rank, consistent


def fixed_space_dimension(a: Isometry) -> int | None:
    """Dimension of the fixed point set of ``a``, or None if it is empty."""
    # x (M - I) = -t, transposed to (M - I)^T x^T = -t^T
    m = a.linear
    coeff = [[Fraction(m[j][i] - (1 if i == j else 0)) for j in range(3)] for i in range(3)]
    rank, ok = _rank_and_consistency(coeff, [-c for c in a.translation])
    return 3 - rank if ok else None


def fixed_point(a: Isometry) -> Vec3 | None:
    """Some fixed point of ``a`` (the unique one for point reflections), or None."""
    dim = fixed_space_dimension(a)
    if dim is None:
        return None
    # average over the finite cyclic group generated by ``a``
    k = a.order()
    if k is None:
        return None
    pts = [(Fraction(0),) * 3]
    p = pts[0]
    for _ in range(k - 1):
        p = a.apply(p)
        pts.append(p)
    return tuple(sum(c[i] for c in pts) / k for i in range(3))  # type: ignore[return-value]


@dataclass(frozen=True)
class RotationData:
    """Rotation order, angle class and axis of a (signed) rotation part.

    For an improper matrix the fields describe ``-M``, and ``proper`` is False.
    """

    proper: bool
    order: int
    angle_class: str
    axis: tuple[int, int, int] | None


_ANGLE_CLASS = {1: "0", 2: "pi", 3: "2pi/3", 4: "pi/2"}


def _primitive(v: Sequence[int]) -> tuple[int, int, int]:
    for c in v:
        if c:
            s = 1 if c > 0 else -1
            return tuple(s * x for x in v)  # type: ignore[return-value]
    return tuple(v)  # type: ignore[return-value]


def rotation_data(m: Matrix3) -> RotationData:
    m = as_matrix(m)
    proper = mat_det(m) == 1
    rot = m if proper else mat_neg(m)
    order = matrix_order(rot)
    axis = None
    if order > 1:
        for cand in itertools.product((0, 1, -1), repeat=3):
            if any(cand) and vec_mat(cand, rot) == cand:
                axis = _primitive(cand)
                break
    return RotationData(proper, order, _ANGLE_CLASS[order], axis)


def reflection_normal(m: Matrix3) -> tuple[int, int, int] | None:
    """Normal of the mirror of a linear plane reflection, else None."""
    rd = rotation_data(m)
    if rd.proper or rd.order != 2:
        return None
    return rd.axis


def half_turn_axis(m: Matrix3) -> tuple[int, int, int] | None:
    rd = rotation_data(m)
    if not rd.proper or rd.order != 2:
        return None
    return rd.axis
