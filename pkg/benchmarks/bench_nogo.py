"""Compiled vs pure-Python no-go kernels.

    python benchmarks/bench_nogo.py [--restarts N]

Times single objective evaluations, one full simplex descent, and an
N-restart search per backend, and checks both reach the same floor.
"""
import argparse
import math
import time

import numpy as np

from obsclone import _kernels_py
from obsclone.qcore import pauli

try:
    from obsclone import _kernels as compiled
except ImportError:
    compiled = None

NC = np.array([pauli(1), pauli(2)])


def timed(fn, *args, repeat=1):
    t0 = time.perf_counter()
    for _ in range(repeat):
        out = fn(*args)
    return (time.perf_counter() - t0) / repeat, out


def search(impl, restarts, seed=42):
    best = math.inf
    for r in range(restarts):
        x0 = np.random.default_rng(seed + r).uniform(-math.pi, math.pi, 15)
        best = min(best, impl.nelder_mead(x0, NC, 0.5, 2000, 1e-9)[1])
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--restarts", type=int, default=10)
    args = ap.parse_args()

    backends = [("python", _kernels_py)]
    if compiled is not None:
        backends.append(("cython", compiled))
    else:
        print("compiled extension not built; timing the fallback only")

    x = np.random.default_rng(0).uniform(-math.pi, math.pi, 15)
    rows = []
    for name, impl in backends:
        t_obj, _ = timed(impl.nogo_objective, x, NC, repeat=2000 if name == "cython" else 200)
        t_nm, (_, f, it, nfev) = timed(impl.nelder_mead, x, NC)
        t_search, floor = timed(search, impl, args.restarts)
        rows.append((name, t_obj, t_nm, nfev, t_search, floor))

    print(f"{'backend':<8} {'objective':>12} {'descent':>10} {'evals':>6} {'search':>10}  floor")
    for name, t_obj, t_nm, nfev, t_search, floor in rows:
        print(f"{name:<8} {t_obj * 1e6:>10.1f}us {t_nm:>9.3f}s {nfev:>6} {t_search:>9.2f}s  {floor:.15g}")
    if len(rows) == 2:
        py, cy = rows
        print(f"speedup: objective x{py[1] / cy[1]:.0f}, search x{py[4] / cy[4]:.0f}; "
              f"floor difference {abs(py[5] - cy[5]):.1e}")


if __name__ == "__main__":
    main()
