"""Compare the numba and numpy GF(p) elimination kernels.

    python3 benchmarks/bench_kernels.py [--sizes 64 128 256] [--repeat 3]

Part one times rref_mod_p on random square matrices in this process.  Part
two runs the same Hilbert-function computation twice in subprocesses, once
with NCREDUCE_DISABLE_NUMBA=1, and checks that the outputs agree.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from ncreduce import kernels

P = 32003

WORKLOAD = """
import time
import numpy as np
from ncreduce import kernels, presentation, hilbert_dims, reduce_presentation
kernels.rref_mod_p(np.ones((2, 2), dtype=np.int64), 5)  # exclude compile/cache load
kernels.rank_mod_p(np.ones((2, 2), dtype=np.int64), 5)
P = presentation('xyz', lambda x, y, z: [x*y - 3*y*x, y*z - 5*z*y, z*x - 7*x*z])
t = time.perf_counter()
dims = hilbert_dims(reduce_presentation(P, 32003), {N}).dims
print(kernels.backend(), time.perf_counter() - t, dims)
"""


def bench_rref(sizes, repeat):
    if not kernels.HAVE_NUMBA:
        print("numba backend disabled; timing numpy only")
    rng = np.random.default_rng(0)
    print(f"{'n':>6} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for n in sizes:
        a = rng.integers(0, P, size=(n, n), dtype=np.int64)
        best_np = min(_time(kernels._rref_mod_p_numpy, a, repeat))
        if kernels.HAVE_NUMBA:
            kernels.rref_mod_p(a[:2, :2], P)  # compile or load from cache
            best_nb = min(_time(kernels.rref_mod_p, a, repeat))
            r1, p1 = kernels.rref_mod_p(a, P)
            r2, p2 = kernels._rref_mod_p_numpy(a, P)
            assert np.array_equal(r1, r2) and np.array_equal(p1, p2)
            print(f"{n:>6} {best_np:>10.4f} {best_nb:>10.4f} {best_np / best_nb:>7.1f}x")
        else:
            print(f"{n:>6} {best_np:>10.4f} {'-':>10} {'-':>8}")


def _time(fn, a, repeat):
    for _ in range(repeat):
        t = time.perf_counter()
        fn(a, P)
        yield time.perf_counter() - t


def bench_end_to_end(N):
    results = {}
    for flag in ("0", "1"):
        env = dict(os.environ, NCREDUCE_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", WORKLOAD.format(N=N)], env=env,
                             capture_output=True, text=True, check=True).stdout.split(" ", 2)
        results[out[0]] = (float(out[1]), out[2].strip())
    for name, (secs, dims) in results.items():
        print(f"{name:>6}: {secs:.3f}s  dims {dims}")
    values = {d for _, d in results.values()}
    print("outputs agree" if len(values) == 1 else "OUTPUTS DIFFER")
    return len(values) == 1


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[64, 128, 256, 512])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--degree", type=int, default=6, help="N for the end-to-end run")
    args = ap.parse_args(argv)
    bench_rref(args.sizes, args.repeat)
    print()
    return 0 if bench_end_to_end(args.degree) else 1


if __name__ == "__main__":
    sys.exit(main())
