"""Postnikov coefficients A_1..A_{r-1} for the generating character mod p^r.

Each row is built, verified exhaustively, and printed with the worst
deviation of the identity and the deviation after bumping A_1 by one.
"""
import argparse

from mhcount.arith import FactoredModulus
from mhcount.chars import build_character_table
from mhcount.postnikov import build_postnikov, verify_postnikov

parser = argparse.ArgumentParser()
parser.add_argument("--primes", type=int, nargs="+", default=[3, 5, 7, 11, 13])
parser.add_argument("--rmax", type=int, default=4)
args = parser.parse_args()

print(f"{'p':>4} {'r':>3} {'coefficients':<28} {'dev':>10} {'perturbed':>10}")
for p in args.primes:
    for r in range(2, args.rmax + 1):
        if p <= max(2, r) or p**r > 20000:
            continue
        chi = build_character_table(FactoredModulus.prime_power(p, r)).generator()
        F = build_postnikov(p, r, chi)
        _, dev = verify_postnikov(F, chi)
        _, bad = verify_postnikov(F.perturbed(), chi)
        print(f"{p:>4} {r:>3} {str(F.coeffs):<28} {dev:>10.2e} {bad:>10.2e}", flush=True)
