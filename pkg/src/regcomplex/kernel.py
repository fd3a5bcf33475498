"""Select the orbit kernel: compiled extension if importable, else pure Python.

Set ``REGCOMPLEX_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernel_py
from .exact_geometry import Isometry, Matrix3, all_signed_permutations, mat_mul

SIGNED_PERMS: list[Matrix3] = all_signed_permutations()
PERM_INDEX: dict[Matrix3, int] = {m: i for i, m in enumerate(SIGNED_PERMS)}
IDENTITY_INDEX = PERM_INDEX[((1, 0, 0), (0, 1, 0), (0, 0, 1))]
MUL: list[int] = [PERM_INDEX[mat_mul(a, b)] for a in SIGNED_PERMS for b in SIGNED_PERMS]


def _act_row(m: Matrix3) -> list[int]:
    row = []
    for j in range(3):
        for i in range(3):
            if m[i][j]:
                row += [i, m[i][j]]
    return row


ACT: list[int] = [x for m in SIGNED_PERMS for x in _act_row(m)]

orbit_bfs_py = _kernel_py.orbit_bfs
try:
    if os.environ.get("REGCOMPLEX_PURE_PYTHON"):
        raise ImportError("pure Python kernel requested")
    from ._kernel import orbit_bfs as orbit_bfs_ext  # type: ignore[import-not-found]

    BACKEND = "cython"
except ImportError:
    orbit_bfs_ext = None
    BACKEND = "python"

orbit_bfs = orbit_bfs_ext or orbit_bfs_py


def act(li: int, v) -> tuple:
    b = 6 * li
    return (ACT[b + 1] * v[ACT[b]], ACT[b + 3] * v[ACT[b + 2]], ACT[b + 5] * v[ACT[b + 4]])


def encode(g: Isometry, denom: int = 1) -> tuple[int, int, int, int]:
    t = tuple(c * denom for c in g.translation)
    if any(c.denominator != 1 for c in t):
        raise ValueError(f"translation of {g.describe()} is not integral at scale {denom}")
    return (PERM_INDEX[g.linear], int(t[0]), int(t[1]), int(t[2]))
