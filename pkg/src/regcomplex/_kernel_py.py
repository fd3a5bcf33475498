"""Pure-Python orbit kernel (reference implementation and fallback).

Isometries are encoded as ``(lin, tx, ty, tz)`` with ``lin`` an index into
the 48 signed permutation matrices and an integer translation.  ``mul`` is
the flattened 48x48 product table and ``act`` stores, per matrix, the source
coordinate and sign of each output coordinate.
"""

from __future__ import annotations


def orbit_bfs(mul, act, gens, bounds, cap, start=0):
    """Breadth-first search from the identity under right multiplication.

    Starting from the identity (index ``start``), each element ``g`` spawns
    ``s * g`` ("apply s, then g") for every generator ``s``.  An element is
    kept when its translation part lies in ``bounds`` and no element with the
    same translation was kept before, so the result holds one representative
    per reached point.  Returns the list and a flag telling whether ``cap``
    was hit.
    """
    xlo, xhi, ylo, yhi, zlo, zhi = bounds
    wx, wy, wz = xhi - xlo + 1, yhi - ylo + 1, zhi - zlo + 1
    if wx <= 0 or wy <= 0 or wz <= 0 or not (xlo <= 0 <= xhi and ylo <= 0 <= yhi and zlo <= 0 <= zhi):
        return [], False
    seen = bytearray(wx * wy * wz)
    out = [(start, 0, 0, 0)]
    seen[(-xlo * wy - ylo) * wz - zlo] = 1
    i = 0
    while i < len(out):
        li, tx, ty, tz = out[i]
        i += 1
        b = 6 * li
        s0, g0, s1, g1, s2, g2 = act[b], act[b + 1], act[b + 2], act[b + 3], act[b + 4], act[b + 5]
        for ls, sx, sy, sz in gens:
            v = (sx, sy, sz)
            nx = g0 * v[s0] + tx
            if nx < xlo or nx > xhi:
                continue
            ny = g1 * v[s1] + ty
            if ny < ylo or ny > yhi:
                continue
            nz = g2 * v[s2] + tz
            if nz < zlo or nz > zhi:
                continue
            key = ((nx - xlo) * wy + ny - ylo) * wz + nz - zlo
            if seen[key]:
                continue
            seen[key] = 1
            out.append((mul[48 * ls + li], nx, ny, nz))
            if len(out) >= cap:
                return out, True
    return out, False
