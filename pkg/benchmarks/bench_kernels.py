"""Compare the compiled and numpy cone-counting kernels.

Usage::

    python3 benchmarks/bench_kernels.py [--size 20] [--repeat 5]
"""
import argparse
import time

import numpy as np

from simplexflows import _accel, spherical


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--size", type=int, default=20, help="log2 of the table size")
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--dims", default="4,5,6")
    args = parser.parse_args()

    compiled = _accel.compiled_kernels
    python = _accel.python_kernels
    print(f"active backend: {_accel.BACKEND}")
    if compiled is None:
        print("compiled extension unavailable; timing the numpy kernels only")
    rng = np.random.default_rng(0)
    header = f"{'n':>2} {'kernel':<20} {'numpy ms':>10} {'cython ms':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for n in (int(d) for d in args.dims.split(",")):
        pts = spherical.sphere_table(n, 1 << args.size)
        verts = rng.normal(size=(n + 1, n))
        inv = np.ascontiguousarray(np.linalg.inv((verts[1:] - verts[0]).T))
        for name in ("cone_counts", "simplex_cone_counts"):
            t_py, r_py = _best(lambda: getattr(python, name)(inv, pts), args.repeat)
            if compiled is None:
                print(f"{n:>2} {name:<20} {1e3 * t_py:>10.1f} {'-':>10} {'-':>8}")
                continue
            t_c, r_c = _best(lambda: getattr(compiled, name)(inv, pts), args.repeat)
            same = np.array_equal(np.asarray(r_py), np.asarray(r_c))
            flag = "" if same else "  MISMATCH"
            print(f"{n:>2} {name:<20} {1e3 * t_py:>10.1f} {1e3 * t_c:>10.1f} "
                  f"{t_py / t_c:>7.1f}x{flag}")


if __name__ == "__main__":
    main()
