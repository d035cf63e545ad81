#!/usr/bin/env python3
"""Benchmark the compiled kernel extension against the pure-Python fallback.

Raw kernels are timed in-process (both modules import side by side); the
end-to-end rows run in subprocesses with DELTASHELL_BACKEND forcing the
choice, since the backend is fixed at import time.

Usage: python benchmarks/bench_backends.py
"""

import os
import subprocess
import sys
import time

from deltashell import _core_py

try:
    from deltashell import _core_c
except ImportError:
    _core_c = None


def timeit(fn, min_time=0.3):
    n = 1
    while True:
        t0 = time.perf_counter()
        for _ in range(n):
            fn()
        dt = time.perf_counter() - t0
        if dt >= min_time:
            return dt / n
        n = max(n * 2, int(n * min_time / max(dt, 1e-9)))


def bench_kernels(mod):
    def bessel():
        for n in (0, 1, 2):
            for x in (0.3, 1.7, 6.0, 12.0, 25.0, 80.0):
                mod.iv_pair_scaled(n, x)
                mod.kv_pair_scaled(n, x)

    def integrate():
        # inward sweep of the free system across 40 decay lengths
        mod.integrate_radial(
            1, 0.874, 1.0, 83.0, 1.0, 1.37, 0.35,
            0, 0.0, 0.0, 0.0, 1e-10, 1e-12, 1e9, 0.0, 10**7,
        )

    return timeit(bessel), timeit(integrate)


END_TO_END = """
import time
import deltashell as ds
p = ds.ShellParams(1.0, 1.0, 0.5)
ch = ds.Channel(1)
t0 = time.perf_counter()
ds.find_bound_states(ch, p)
t1 = time.perf_counter()
ds.extrapolate_to_zero_width(ch, p, [1e-2, 3e-3, 1e-3], shape="gaussian")
t2 = time.perf_counter()
print(f"{t1-t0:.6f} {t2-t1:.6f}")
"""


def bench_end_to_end(backend):
    env = dict(os.environ, DELTASHELL_BACKEND=backend)
    out = subprocess.run(
        [sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True
    )
    if out.returncode != 0:
        raise RuntimeError(out.stderr)
    solve, ladder = (float(tok) for tok in out.stdout.split())
    return solve, ladder


def main():
    rows = []
    py_bessel, py_rk = bench_kernels(_core_py)
    rows.append(("bessel pair sweep (36 evals)", py_bessel, None))
    rows.append(("radial integration (40/kappa)", py_rk, None))
    if _core_c is not None:
        c_bessel, c_rk = bench_kernels(_core_c)
        rows[0] = (rows[0][0], py_bessel, c_bessel)
        rows[1] = (rows[1][0], py_rk, c_rk)

    py_solve, py_ladder = bench_end_to_end("python")
    rows.append(("find_bound_states (j=1/2)", py_solve, None))
    rows.append(("oracle sigma ladder (3 widths)", py_ladder, None))
    if _core_c is not None:
        c_solve, c_ladder = bench_end_to_end("compiled")
        rows[2] = (rows[2][0], py_solve, c_solve)
        rows[3] = (rows[3][0], py_ladder, c_ladder)

    print(f"{'benchmark':34s} {'python':>12s} {'compiled':>12s} {'speedup':>8s}")
    for name, py, comp in rows:
        if comp is None:
            print(f"{name:34s} {py*1e3:10.3f}ms {'n/a':>12s} {'':>8s}")
        else:
            print(f"{name:34s} {py*1e3:10.3f}ms {comp*1e3:10.3f}ms {py/comp:7.1f}x")
    if _core_c is None:
        print("\ncompiled extension not built; run pip install -e . with cython")


if __name__ == "__main__":
    main()
