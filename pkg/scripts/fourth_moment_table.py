"""Exact W(q; u, h) against h^4/q + h^2 for a range of moduli and h <= q."""
import argparse

from mhcount.counting import fourth_moment

parser = argparse.ArgumentParser()
parser.add_argument("--moduli", type=int, nargs="+", default=[101, 1009, 5 * 7 * 11, 7 * 11 * 13])
parser.add_argument("--fractions", type=float, nargs="+", default=[0.1, 0.25, 0.5, 1.0])
parser.add_argument("--u", type=int, default=0)
args = parser.parse_args()

print(f"{'q':>6} {'h':>6} {'W':>14} {'bound':>14} {'ratio':>8}")
for q in args.moduli:
    for frac in args.fractions:
        h = max(1, int(frac * q))
        res = fourth_moment(q, args.u, h)
        print(f"{q:>6} {h:>6} {res.count:>14} {res.params['bound']:>14.1f} {res.params['ratio']:>8.4f}")
