"""N* growth for Markoff-Hurwitz equations x_1^2 + ... + x_n^2 = a x_1 ... x_n.

Prints h, N*, and the log-log slope against the previous h, next to the
exponent n - 4/9 that the square-free (r = 1) argument gives.
"""
import argparse
import math
import time

from mhcount.counting import Box, CountMethod, HypersurfaceSpec, count_points

parser = argparse.ArgumentParser()
parser.add_argument("--n", type=int, default=3)
parser.add_argument("--a", type=int, default=3)
parser.add_argument("--hs", type=int, nargs="+", default=[25, 50, 100, 200, 400])
parser.add_argument("--workers", type=int, default=1)
args = parser.parse_args()

spec = HypersurfaceSpec.markoff_hurwitz(args.n, args.a)
print(f"# n={args.n} a={args.a}  reference exponent n-4/9 = {args.n - 4 / 9:.4f}")
print(f"{'h':>6} {'N*':>8} {'slope':>8} {'secs':>7}")
prev = None
for h in args.hs:
    t0 = time.perf_counter()
    N = count_points(spec, Box.diagonal(0, h, args.n), CountMethod.SOLVE_LAST, workers=args.workers).count
    slope = ""
    if prev and prev[1] and N:
        slope = f"{math.log(N / prev[1]) / math.log(h / prev[0]):.4f}"
    print(f"{h:>6} {N:>8} {slope:>8} {time.perf_counter() - t0:>7.2f}", flush=True)
    prev = (h, N)
