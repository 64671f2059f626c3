"""Worst ratio |S| / (deg F sqrt(p)) of complete mixed sums, per prime.

S = sum_{x=1}^{p} chi(x) e(lam F(x)/p) over all non-principal chi, lam in
{0, 1} (plus chi_0 with lam = 1) and F in {X^2, X^3}.
"""
import argparse
import math

from mhcount.arith import FactoredModulus, is_prime
from mhcount.chars import build_character_table
from mhcount.expsums import weil_report
from mhcount.polys import IntegerPolynomial

parser = argparse.ArgumentParser()
parser.add_argument("--pmax", type=int, default=101)
parser.add_argument("--degrees", type=int, nargs="+", default=[2, 3])
args = parser.parse_args()

print(f"{'p':>5} {'deg':>4} {'max|S|':>10} {'ratio':>8}")
for p in range(3, args.pmax + 1):
    if not is_prime(p):
        continue
    table = build_character_table(FactoredModulus.from_int(p))
    for d in args.degrees:
        F = IntegerPolynomial.monomial(d)
        if F.reduce_mod(p).degree <= 1:
            continue
        worst = 0.0
        for chi in table.characters():
            for lam in (0, 1):
                if chi.is_principal and lam == 0:
                    continue
                worst = max(worst, weil_report(chi, lam, F, 0, p).magnitude)
        print(f"{p:>5} {d:>4} {worst:>10.4f} {worst / (d * math.sqrt(p)):>8.4f}")
