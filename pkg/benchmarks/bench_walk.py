"""Time the compiled and pure-Python walk kernels on the same chain.

    python3 benchmarks/bench_walk.py --steps 1000000 --repeats 3

Both kernels consume the same SplitMix64 stream, so their histograms are
compared for equality as well.
"""

import argparse
import time

import numpy as np

from prcontrol import walker
from prcontrol.generators import random_strongly_connected
from prcontrol.graph import transition_matrix
from prcontrol.walker import WalkConfig, simulate


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=50, help="graph size")
    ap.add_argument("--steps", type=int, default=1_000_000)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--alpha", type=float, default=0.85)
    args = ap.parse_args(argv)

    g = random_strongly_connected(args.n, 7, weighted=True)
    v = np.full(args.n, 1.0 / args.n)
    P = transition_matrix(g, teleport=v)
    cfg = WalkConfig(args.steps, seed=1)

    results = {}
    for name in sorted(walker.KERNELS):
        t, h = best_of(lambda: simulate(P, args.alpha, v, cfg, backend=name), args.repeats)
        results[name] = (t, h.counts)
        print(f"{name:9s} {t:8.3f} s  {args.steps / t / 1e6:7.2f} M steps/s")

    if "compiled" not in results:
        print("compiled kernel not built; only the fallback was timed")
        return
    tc, cc = results["compiled"]
    tp, cp = results["python"]
    print(f"speedup   {tp / tc:8.1f} x")
    print(f"identical histograms: {bool(np.array_equal(cc, cp))}")


if __name__ == "__main__":
    main()
