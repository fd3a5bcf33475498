# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled orbit kernel; same contract as ``_kernel_py.orbit_bfs``."""

from libc.stdlib cimport malloc, free, calloc


def orbit_bfs(mul, act, gens, bounds, long cap, int start=0):
    cdef long xlo, xhi, ylo, yhi, zlo, zhi, wx, wy, wz
    xlo, xhi, ylo, yhi, zlo, zhi = bounds
    wx = xhi - xlo + 1
    wy = yhi - ylo + 1
    wz = zhi - zlo + 1
    if wx <= 0 or wy <= 0 or wz <= 0 or not (xlo <= 0 <= xhi and ylo <= 0 <= yhi and zlo <= 0 <= zhi):
        return [], False

    cdef int ng = len(gens)
    cdef int cmul[48 * 48]
    cdef int cact[48 * 6]
    cdef int *gl = <int *> malloc(ng * sizeof(int))
    cdef long *gv = <long *> malloc(3 * ng * sizeof(long))
    cdef unsigned char *seen = <unsigned char *> calloc(wx * wy * wz, 1)
    cdef long *buf = <long *> malloc(4 * cap * sizeof(long))
    if gl == NULL or gv == NULL or seen == NULL or buf == NULL:
        free(gl); free(gv); free(seen); free(buf)
        raise MemoryError()

    cdef int k
    for k in range(48 * 48):
        cmul[k] = mul[k]
    for k in range(48 * 6):
        cact[k] = act[k]
    for k in range(ng):
        gl[k] = gens[k][0]
        gv[3 * k] = gens[k][1]
        gv[3 * k + 1] = gens[k][2]
        gv[3 * k + 2] = gens[k][3]

    cdef long n = 1, i = 0, key, nx, ny, nz, tx, ty, tz
    cdef int li, nl, b, j
    cdef bint hit_cap = False
    buf[0] = start
    buf[1] = 0
    buf[2] = 0
    buf[3] = 0
    seen[(-xlo * wy - ylo) * wz - zlo] = 1
    try:
        while i < n and not hit_cap:
            li = <int> buf[4 * i]
            tx = buf[4 * i + 1]
            ty = buf[4 * i + 2]
            tz = buf[4 * i + 3]
            i += 1
            b = 6 * li
            for j in range(ng):
                nx = cact[b + 1] * gv[3 * j + cact[b]] + tx
                if nx < xlo or nx > xhi:
                    continue
                ny = cact[b + 3] * gv[3 * j + cact[b + 2]] + ty
                if ny < ylo or ny > yhi:
                    continue
                nz = cact[b + 5] * gv[3 * j + cact[b + 4]] + tz
                if nz < zlo or nz > zhi:
                    continue
                key = ((nx - xlo) * wy + ny - ylo) * wz + nz - zlo
                if seen[key]:
                    continue
                seen[key] = 1
                nl = cmul[48 * gl[j] + li]
                buf[4 * n] = nl
                buf[4 * n + 1] = nx
                buf[4 * n + 2] = ny
                buf[4 * n + 3] = nz
                n += 1
                if n >= cap:
                    hit_cap = True
                    break
        out = [(buf[4 * k], buf[4 * k + 1], buf[4 * k + 2], buf[4 * k + 3]) for k in range(n)]
    finally:
        free(gl)
        free(gv)
        free(seen)
        free(buf)
    return out, bool(hit_cap)
