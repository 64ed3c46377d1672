"""Compare the compiled core with the numpy fallback on the polymer recursion.

    python3 benchmarks/bench_core.py [--n 200] [--samples 200] [--repeat 3]

Both backends draw the same weights, so the script also reports the largest
difference between their log Z values.
"""

import argparse
import time

import numpy as np

from loggamma_ldp import _pure

try:
    from loggamma_ldp import _core
except ImportError:
    _core = None


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), np.asarray(out)


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--theta", type=float, default=0.3)
    ap.add_argument("--repeat", type=int, default=3)
    a = ap.parse_args()

    rows = []
    for name, mod in (("cython", _core), ("numpy", _pure)):
        if mod is None:
            print(f"{name:7s} not built")
            continue
        t_pol, z = best_time(lambda: mod.log_partition_batch(a.n, a.theta, 1, 0, a.samples), a.repeat)
        t_lpp, g = best_time(lambda: mod.lpp_batch(a.n, 1, 0, a.samples), a.repeat)
        rows.append((name, t_pol, t_lpp, z, g))

    print(f"n={a.n} samples={a.samples} theta={a.theta} (best of {a.repeat})")
    print(f"{'backend':8s} {'polymer [s]':>12s} {'lpp [s]':>10s}")
    for name, t_pol, t_lpp, _, _ in rows:
        print(f"{name:8s} {t_pol:12.3f} {t_lpp:10.3f}")
    if len(rows) == 2:
        (_, p0, l0, z0, g0), (_, p1, l1, z1, g1) = rows
        print(f"speedup  {p1 / p0:12.2f} {l1 / l0:10.2f}")
        print(f"max |dlogZ| = {np.max(np.abs(z0 - z1)):.3g}, max |dG| = {np.max(np.abs(g0 - g1)):.3g}")


if __name__ == "__main__":
    main()
