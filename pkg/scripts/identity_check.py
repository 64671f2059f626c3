"""Compare T from direct residue counting with T from the character identity.

Draws random instances with polynomials in {X^2, X^3, X^3+X}, k in {1, 3},
a in {1, 3}, and prints both counts with the rounding residual.
"""
import argparse
import random

from mhcount.arith import FactoredModulus
from mhcount.counting import Box, HypersurfaceSpec, count_congruence, reconstruct_T
from mhcount.polys import IntegerPolynomial

POLYS = [[0, 0, 1], [0, 0, 0, 1], [0, 1, 0, 1]]

parser = argparse.ArgumentParser()
parser.add_argument("--cases", type=int, default=30)
parser.add_argument("--moduli", type=int, nargs="+", default=[5, 7, 9, 25, 35, 77, 121])
parser.add_argument("--hmax", type=int, default=30)
parser.add_argument("--seed", type=int, default=0)
args = parser.parse_args()

rng = random.Random(args.seed)
print(f"{'q':>4} {'n':>2} {'h':>3} {'T':>8} {'identity':>8} {'residual':>10}")
for _ in range(args.cases):
    n = rng.choice([2, 3])
    spec = HypersurfaceSpec(tuple(IntegerPolynomial(rng.choice(POLYS)) for _ in range(n)),
                            tuple(rng.choice([1, 3]) for _ in range(n)), rng.choice([1, 3]))
    q = FactoredModulus.from_int(rng.choice(args.moduli))
    box = Box(tuple(rng.randint(-50, 50) for _ in range(n)), rng.randint(1, args.hmax))
    T = count_congruence(spec, box, q).count
    R = reconstruct_T(spec, box, q)
    mark = "" if R.count == T else "  MISMATCH"
    print(f"{q.value:>4} {n:>2} {box.h:>3} {T:>8} {R.count:>8} {R.residual:>10.2e}{mark}")
