"""Compare the numba and numpy paths of the quadrature kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Times (a) single response integrals at several t and (b) the response
profile over one fig3 stroke, the unit of work a sweep point repeats four
times. Both paths run in this process: the numba driver is ``azqhm._driver``
and the numpy driver is the same source loaded without jit. Compile time is
excluded by a warm-up call.
"""
import argparse
import time

import numpy as np

from azqhm import kernels
from azqhm._accel import HAVE_NUMBA
from azqhm.dynamics import stroke_grid
from azqhm.scenario import load_preset


def best_of(fn, repeat):
    out = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        out.append(time.perf_counter() - t0)
    return min(out)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--delta-s", type=float, default=12.0)
    args = ap.parse_args()

    sc = load_preset("fig3")
    hot, cold, m = sc.build(args.delta_s)
    ts = stroke_grid(m, sc.cycle)[0][::2][1:]
    q = (kernels.KIND_SIN, 1e-8, 1e-12, 2000, True, 10.0 * hot.width)
    base = (hot.packed, hot.intervals, hot.breakpoints, m.omega_hot)

    backends = {"numpy": (kernels.integrate_np, kernels.profile_np)}
    if HAVE_NUMBA:
        backends["numba"] = (kernels.integrate_nb, kernels.profile_nb)
    else:
        print("numba disabled or missing; timing the numpy path only")

    rows = []
    for name, (integ, prof) in backends.items():
        integ(*base, 1.0, *q)
        prof(*base, ts[:4], *q)

        def singles():
            for t in (0.05, 0.5, 5.0, 50.0):
                integ(*base, t, *q)

        def stroke():
            prof(*base, ts, *q)

        rows.append((name, best_of(singles, args.repeat), best_of(stroke, args.repeat)))

    print(f"fig3 hot bath, delta_s = {args.delta_s}, {ts.size} profile points")
    print(f"{'backend':8s} {'4 integrals [ms]':>18s} {'stroke profile [ms]':>20s}")
    for name, a, b in rows:
        print(f"{name:8s} {1e3 * a:18.2f} {1e3 * b:20.1f}")
    if len(rows) == 2:
        print(f"speed-up  {rows[0][1] / rows[1][1]:18.1f}x {rows[0][2] / rows[1][2]:19.1f}x")
    a = kernels.profile_np(*base, ts, *q)[0]
    if HAVE_NUMBA:
        b = kernels.profile_nb(*base, ts, *q)[0]
        print(f"max |numba - numpy| over the profile = {np.max(np.abs(a - b)):.2e}")


if __name__ == "__main__":
    main()
