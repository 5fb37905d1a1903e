"""Time the numba kernels against the pure-numpy fallback.

Each backend runs in its own interpreter because the choice is read from
CYLCASIMIR_BACKEND at import time. Numba timings exclude JIT compilation
(one warm-up call first).

    python3 benchmarks/bench_backends.py --k 150 --zeros 150
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from cylcasimir import backend
from cylcasimir.specfun import bessel_j
from cylcasimir.specfun.zeros import BesselZeroTable, compute_zero_grid
from cylcasimir.cavity_model import DimensionlessForceTerm
from cylcasimir.sum_engine import shell_sum

k, nz, repeat = int(sys.argv[1]), int(sys.argv[2]), int(sys.argv[3])

def best(fn):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out

x = np.linspace(0.0, 400.0, 200_000)
t_bessel, jv = best(lambda: bessel_j(37, x))
t_zeros, grid = best(lambda: compute_zero_grid(nz, nz))
table = BesselZeroTable(k, k, compute_zero_grid(k, k))
term = DimensionlessForceTerm(table, 1.0, 10.0 / 3.0)
t_sum, rep = best(lambda: shell_sum(term, (k,), threads=1))
print(json.dumps({
    "backend": backend.backend_name(),
    "bessel_j(37, 2e5 points)": t_bessel,
    f"zero grid {nz}x{nz}": t_zeros,
    f"shell sum k={k}": t_sum,
    "check": [float(jv.sum()), float(grid[-1, -1]), list(map(float, rep.value(k)))],
}))
"""


def run(backend, args):
    env = dict(os.environ, CYLCASIMIR_BACKEND=backend)
    proc = subprocess.run(
        [sys.executable, "-c", WORKER, str(args.k), str(args.zeros), str(args.repeat)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=int, default=150, help="cube size of the force sum")
    ap.add_argument("--zeros", type=int, default=150, help="zero grid size")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true", help="print raw results")
    args = ap.parse_args(argv)

    nb, npy = run("numba", args), run("numpy", args)
    if args.json:
        print(json.dumps([nb, npy], indent=2))
        return 0
    keys = [key for key in nb if key not in ("backend", "check")]
    width = max(len(key) for key in keys)
    print(f"{'kernel':<{width}}  {'numba s':>10}  {'numpy s':>10}  {'speedup':>8}")
    for key in keys:
        print(f"{key:<{width}}  {nb[key]:10.4f}  {npy[key]:10.4f}  {npy[key] / nb[key]:8.1f}")
    a, b = nb["check"], npy["check"]
    sums = max(abs(x - y) / abs(y) for x, y in zip(a[2], b[2]))
    print(f"agreement: sum J {abs(a[0] - b[0]):.1e}, last zero {abs(a[1] - b[1]):.1e}, force sums rel {sums:.1e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
