"""Compare the compiled and numpy kernels.

    python3 benchmarks/bench_kernels.py [--ns 256 1024 4096] [--repeat 5]

Times one batched stencil evaluation (every grid node, random offsets) per
order, then a full SENO3 run, for each available backend.
"""

import argparse
import time

import numpy as np

from sphereadvect import _backend
from sphereadvect.solver import SolverConfig, run
from sphereadvect.sphere import seno_batch


def wavy(n):
    s = np.arange(n) / n
    p = np.stack([np.cos(2 * np.pi * s), np.sin(2 * np.pi * s), 0.8 * np.sin(6 * np.pi * s)], 1)
    return p / np.linalg.norm(p, axis=1, keepdims=True)


def best_of(repeat, fn):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ns", type=int, nargs="+", default=[256, 1024, 4096])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--run-n", type=int, default=512, help="mesh size of the full-run timing")
    args = ap.parse_args(argv)

    backends = _backend.available()
    if "cython" not in backends:
        print("compiled kernels not built; timing the fallback only")
    rng = np.random.default_rng(0)
    rows = []
    for n in args.ns:
        pts = wavy(n)
        cells = np.arange(n)
        lam = rng.random(n)
        for order in (1, 2, 3):
            row = [f"seno_batch order={order}", n]
            for name in backends:
                _backend.use(name)
                row.append(best_of(args.repeat, lambda: seno_batch(pts, cells, lam, order)))
            rows.append(row)
    cfg = SolverConfig(args.run_n, "seno3", ic="kinks", t_final=1.0)
    row = ["run seno3 10 steps", args.run_n]
    for name in backends:
        _backend.use(name)
        row.append(best_of(max(1, args.repeat // 2), lambda: run(cfg, "final")))
    rows.append(row)

    head = f"{'case':<22}{'N':>6}" + "".join(f"{b + ' [s]':>14}" for b in backends)
    if len(backends) > 1:
        head += f"{'speedup':>10}"
    print(head)
    for row in rows:
        line = f"{row[0]:<22}{row[1]:>6}" + "".join(f"{t:>14.4f}" for t in row[2:])
        if len(backends) > 1:
            line += f"{row[3] / row[2]:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
