"""Vertex-set lattices and point sets: membership and box enumeration."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact_geometry import Vec3, vec

Box = tuple[tuple[int, int], tuple[int, int], tuple[int, int]]

LABELS = ("aZ3", "L_aa0", "L_aaa", "V_a", "W_a")
_ALIASES = {
    "Z3": "aZ3",
    "aZ3": "aZ3",
    "FCC": "L_aa0",
    "L_aa0": "L_aa0",
    "BCC": "L_aaa",
    "L_aaa": "L_aaa",
    "V": "V_a",
    "V_a": "V_a",
    "W": "W_a",
    "W_a": "W_a",
}


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class VertexSetLabel:
    name: str
    a: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        if self.name not in _ALIASES:
            raise LatticeError(f"unknown vertex-set label {self.name!r}")
        object.__setattr__(self, "name", _ALIASES[self.name])
        object.__setattr__(self, "a", Fraction(self.a))

    def __str__(self) -> str:
        return self.name


def _integral(p: Sequence, a: Fraction) -> tuple[int, int, int] | None:
    q = [Fraction(c) / a for c in p]
    if any(c.denominator != 1 for c in q):
        return None
    return tuple(int(c) for c in q)  # type: ignore[return-value]


def _in_fcc(n: Sequence[int]) -> bool:
    return sum(n) % 2 == 0


def _in_bcc(n: Sequence[int]) -> bool:
    return n[0] % 2 == n[1] % 2 == n[2] % 2


def _in_2fcc(n: Sequence[int]) -> bool:
    return all(c % 2 == 0 for c in n) and sum(n) % 4 == 0


def contains(label: VertexSetLabel | str, p: Sequence) -> bool:
    if isinstance(label, str):
        label = VertexSetLabel(label)
    n = _integral(p, label.a)
    if n is None:
        return False
    name = label.name
    if name == "aZ3":
        return True
    if name == "L_aa0":
        return _in_fcc(n)
    if name == "L_aaa":
        return _in_bcc(n)
    if name == "V_a":
        return not _in_bcc((n[0], n[1], n[2] - 1))
    if name == "W_a":
        return _in_2fcc(n) or _in_2fcc((n[0] - 1, n[1] + 1, n[2] - 1))
    raise LatticeError(name)  # pragma: no cover


def box_points(box: Box):
    (x0, x1), (y0, y1), (z0, z1) = box
    return itertools.product(range(x0, x1 + 1), range(y0, y1 + 1), range(z0, z1 + 1))


def enumerate_points(label: VertexSetLabel | str, box: Box) -> set[Vec3]:
    """All members inside the closed box (box given in units of a)."""
    if isinstance(label, str):
        label = VertexSetLabel(label)
    a = label.a
    return {vec(x * a, y * a, z * a) for x, y, z in box_points(box) if contains(label, (x * a, y * a, z * a))}


def cube_box(lo: int, hi: int) -> Box:
    return ((lo, hi), (lo, hi), (lo, hi))


def shrink(box: Box, margin: int) -> Box:
    return tuple((lo + margin, hi - margin) for lo, hi in box)  # type: ignore[return-value]


def grow(box: Box, margin: int) -> Box:
    return tuple((lo - margin, hi + margin) for lo, hi in box)  # type: ignore[return-value]


def in_box(p: Sequence, box: Box) -> bool:
    return all(lo <= c <= hi for c, (lo, hi) in zip(p, box))
