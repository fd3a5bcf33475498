"""Compare the compiled and pure-Python orbit kernels.

    python3 benchmarks/bench_kernel.py [--half 6] [--repeat 5]

Both kernels run the same breadth-first vertex enumeration for a few catalog
entries over the box [-half, half]^3; the outputs are checked to be identical
before timings are reported.
"""

from __future__ import annotations

import argparse
import statistics
import time

from regcomplex import kernel
from regcomplex.catalog import default_catalog
from regcomplex.exact_geometry import compose
from regcomplex.lattices import cube_box
from regcomplex.point_groups import isometry_closure
from regcomplex.wythoff import _frame, build_complex

ENTRIES = ("K5_1_1", "K3_1_1", "K_2_2", "skel_apeir_3_4")


def steps_for(gs):
    _, denom, conj = _frame(gs)
    stab = isometry_closure(conj[1:], limit=48)
    return denom, sorted({kernel.encode(compose(conj[0], k), denom) for k in stab})


def best_of(fn, repeat: int) -> tuple[float, float]:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times), statistics.median(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--half", type=int, default=6, help="half-width of the cubic box")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    cat = default_catalog()
    ext = kernel.orbit_bfs_ext
    print(f"backend in use: {kernel.BACKEND}")
    if ext is None:
        print("compiled kernel unavailable; timing the Python kernel only")
    print(f"{'entry':<16}{'points':>9}{'python ms':>12}{'cython ms':>12}{'speedup':>9}")
    for name in ENTRIES:
        gs = cat.resolve(name)
        denom, steps = steps_for(gs)
        h = args.half * denom
        bounds = (-h, h, -h, h, -h, h)
        call = (kernel.MUL, kernel.ACT, steps, bounds, 10**8, kernel.IDENTITY_INDEX)
        ref, _ = kernel.orbit_bfs_py(*call)
        py_best, _ = best_of(lambda: kernel.orbit_bfs_py(*call), args.repeat)
        if ext is not None:
            got, _ = ext(*call)
            if list(got) != list(ref):
                raise SystemExit(f"{name}: kernels disagree")
            cy_best, _ = best_of(lambda: ext(*call), args.repeat)
            print(f"{name:<16}{len(ref):>9}{py_best * 1e3:>12.2f}{cy_best * 1e3:>12.2f}{py_best / cy_best:>8.1f}x")
        else:
            print(f"{name:<16}{len(ref):>9}{py_best * 1e3:>12.2f}{'-':>12}{'-':>9}")

    # end-to-end effect on a full build
    gs = cat.resolve("K_2_2")
    box = cube_box(-args.half, args.half)
    t_ext, _ = best_of(lambda: build_complex(gs, box), 1)
    saved = kernel.orbit_bfs
    kernel.orbit_bfs = kernel.orbit_bfs_py
    try:
        t_py, _ = best_of(lambda: build_complex(gs, box), 1)
    finally:
        kernel.orbit_bfs = saved
    print(f"build_complex(K_2_2, [-{args.half},{args.half}]^3): {t_py:.2f}s python kernel, {t_ext:.2f}s {kernel.BACKEND} kernel")


if __name__ == "__main__":
    main()
