"""Compare the compiled and pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--depth 7] [--qmax 150]
"""
import argparse
import time
from math import gcd

from pisotile import kernels
from pisotile.qfield import pisot_new
from pisotile.tiles import hensel_root, stripe_diagnostic


def _time(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_orbits(a, b, qmax, backend):
    def run():
        fails = 0
        for q in range(2, qmax + 1):
            if gcd(q, b) == 1:
                for p in range(1, q):
                    if gcd(p, q) == 1:
                        fails += kernels.orbit_tail_period(a, b, q, p, 0, backend=backend)[0] != 0
        return fails
    return _time(run)


def bench_stripe(ctx, depth, backend):
    pc = hensel_root(ctx, 3, 4)
    return _time(lambda: stripe_diagnostic(ctx, pc, depth, backend=backend).counts, repeat=1)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--depth", type=int, default=7)
    ap.add_argument("--qmax", type=int, default=150)
    args = ap.parse_args()
    if kernels.BACKEND != "cython":
        print("compiled kernels unavailable; only the Python backend can be timed")
    ctx = pisot_new(10, 3)
    print(f"{'kernel':<34}{'python':>10}{'cython':>10}{'speedup':>9}")
    rows = [(f"orbit scan (10,3) q<={args.qmax}",
             lambda be: bench_orbits(10, 3, args.qmax, be)),
            (f"stripe cover (10,3) depth {args.depth}",
             lambda be: bench_stripe(ctx, args.depth, be))]
    for name, fn in rows:
        tp, outp = fn("python")
        tc, outc = fn("cython")
        assert outp == outc, "backends disagree"
        print(f"{name:<34}{tp:>9.3f}s{tc:>9.3f}s{tp / tc:>8.1f}x")


if __name__ == "__main__":
    main()
