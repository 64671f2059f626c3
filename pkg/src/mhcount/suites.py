"""Invariant suites driven by ``mhcount verify``.

Each suite runs a family of exact identities and returns a
:class:`SuiteResult`. A failure means an identity did not hold to its
tolerance, never that a bound was exceeded.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass


from .arith import FactoredModulus, euler_phi, factor_small, is_prime
from .chars import build_character_table, is_primitive
from .counting import Box, CountMethod, HypersurfaceSpec, count_congruence, count_points, reconstruct_T
from .expsums import gauss_sum_matrix, ramanujan_sum, weil_report
from .numerics import fsum_complex
from .polys import IntegerPolynomial
from .postnikov import build_postnikov, verify_postnikov


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: int = 0
    worst: float = 0.0

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def record(self, passed: bool, deviation: float = 0.0):
        self.cases += 1
        self.failures += not passed
        self.worst = max(self.worst, deviation)


def character_moduli(qmax: int) -> list[FactoredModulus]:
    """Odd q in [3, qmax] that are square-free or prime powers."""
    out = []
    for q in range(3, qmax + 1, 2):
        fs = factor_small(q)
        if len(fs) == 1 or all(e == 1 for _, e in fs):
            out.append(FactoredModulus.from_int(q))
    return out


def orthogonality(qmax: int = 200, tol: float = 1e-12) -> SuiteResult:
    res = SuiteResult("orthogonality")
    for q in character_moduli(qmax):
        t = build_character_table(q)
        vals = t.values_from_index(t.all_indices())        # (phi, q), row 0 principal
        for x in range(q.value):
            if math.gcd(x, q.value) != 1:
                continue
            s = fsum_complex(vals[:, x])
            dev = abs(s - (t.group_order if x == 1 else 0))
            res.record(dev < tol, dev)
        for row in vals[1:]:
            dev = abs(fsum_complex(row))
            res.record(dev < tol, dev)
    return res


def gauss_magnitude(moduli=(7, 11, 35, 77), rel_tol: float = 1e-6) -> SuiteResult:
    res = SuiteResult("gauss")
    for qv in moduli:
        t = build_character_table(FactoredModulus.from_int(qv))
        lams = [lam for lam in range(1, qv + 1) if math.gcd(lam, qv) == 1]
        G = gauss_sum_matrix(t, lams)
        for row, chi in zip(G, t.characters()):
            if not is_primitive(chi):
                continue
            for g in row:
                dev = abs(abs(g) ** 2 - qv) / qv
                res.record(dev < rel_tol, dev)
    return res


def ramanujan(qmax: int = 1000) -> SuiteResult:
    res = SuiteResult("ramanujan")
    for q in range(1, qmax + 1):
        if any(e > 1 for _, e in factor_small(q)):
            continue
        for lam in range(1, q + 1):
            c = ramanujan_sum(q, lam)
            target = euler_phi(math.gcd(lam, q))
            res.record(abs(c) == target, abs(abs(c) - target))
    return res


def postnikov(primes=(5, 7, 11), rs=(2, 3), full_for=(5,), sample: int = 32, seed: int = 0,
              perturb: bool = False, tol: float = 1e-9) -> SuiteResult:
    """Build and exhaustively verify F for every (p, r); with ``perturb`` A_1 is bumped by one."""
    res = SuiteResult("postnikov")
    rng = random.Random(seed)
    for p in primes:
        for r in rs:
            t = build_character_table(FactoredModulus.prime_power(p, r))
            chars = list(t.characters())
            if p not in full_for and len(chars) > sample:
                chars = [chars[1]] + rng.sample(chars[2:], sample - 1)
            for chi in chars:
                F = build_postnikov(p, r, chi, check=False)
                if perturb and r > 1:
                    F = F.perturbed()
                ok, dev = verify_postnikov(F, chi, tol)
                res.record(ok, dev)
    return res


RECONSTRUCT_CASES = [
    # (f coefficient lists, k, a, q, u, h)
    ([[0, 0, 1]] * 2, (1, 1), 3, 5, (0, 0), 4),
    ([[0, 0, 1]] * 3, (1, 1, 1), 3, 35, (0, 0, 0), 20),
    ([[0, 0, 0, 1], [0, 1, 0, 1]], (3, 1), 1, 7, (0, 3), 12),
    ([[0, 0, 0, 1]] * 3, (1, 1, 1), 3, 9, (0, 0, 0), 9),
]


def reconstruct(cases=RECONSTRUCT_CASES, tol: float = 1e-3) -> SuiteResult:
    res = SuiteResult("reconstruct")
    for fs, k, a, q, us, h in cases:
        spec = HypersurfaceSpec(tuple(IntegerPolynomial(f) for f in fs), k, a)
        box = Box(us, h)
        qm = FactoredModulus.from_int(q)
        T = count_congruence(spec, box, qm).count
        R = reconstruct_T(spec, box, qm)
        res.record(R.count == T and R.residual < tol, R.residual)
    return res


def random_spec(rng: random.Random, n: int) -> HypersurfaceSpec:
    fs = []
    for _ in range(n):
        d = rng.randint(1, 3)
        cs = [rng.randint(-2, 2) for _ in range(d)] + [rng.choice([-2, -1, 1, 2])]
        fs.append(IntegerPolynomial(cs))
    k = tuple(rng.choice([-2, -1, 1, 1, 2, 3]) for _ in range(n))
    return HypersurfaceSpec(tuple(fs), k, rng.choice([-3, -1, 1, 2, 3]), rng.choice([1, 1, 1, 2]))


def strategies(n_specs: int = 50, hmax: int = 40, seed: int = 1) -> SuiteResult:
    res = SuiteResult("strategies")
    rng = random.Random(seed)
    for _ in range(n_specs):
        n = rng.choice([2, 3])
        spec = random_spec(rng, n)
        h = rng.randint(1, hmax if n == 2 else min(hmax, 25))
        box = Box(tuple(rng.randint(-h, 5) for _ in range(n)), h)
        a = count_points(spec, box, CountMethod.FULL_ENUMERATION).count
        b = count_points(spec, box, CountMethod.SOLVE_LAST).count
        res.record(a == b, abs(a - b))
    return res


def weil(pmax: int = 101) -> SuiteResult:
    """Complete sums |sum_x chi(x) e(lam F(x)/p)| <= deg F sqrt(p) + 1."""
    res = SuiteResult("weil")
    for p in range(3, pmax + 1):
        if not is_prime(p):
            continue
        t = build_character_table(FactoredModulus.from_int(p))
        for chi in t.characters():
            for lam in (0, 1):
                if chi.is_principal and lam == 0:
                    continue
                for d in (2, 3):
                    rep = weil_report(chi, lam, IntegerPolynomial.monomial(d), 0, p)
                    limit = d * math.sqrt(p) + 1
                    res.record(rep.magnitude <= limit, rep.magnitude / limit)
    return res


SUITES = {
    "orthogonality": orthogonality,
    "gauss": gauss_magnitude,
    "ramanujan": ramanujan,
    "postnikov": postnikov,
    "reconstruct": reconstruct,
    "strategies": strategies,
    "weil": weil,
}

DEFAULT_SUITES = ("orthogonality", "gauss", "ramanujan", "postnikov", "reconstruct", "strategies")

# sizes used by `mhcount verify` when nothing else is configured
DEFAULT_SIZES = {
    "orthogonality": {"qmax": 60},
    "ramanujan": {"qmax": 200},
    "postnikov": {"primes": (5, 7), "sample": 8},
    "strategies": {"n_specs": 10, "hmax": 20},
    "weil": {"pmax": 31},
}


def run_suite(name: str, perturb: bool = False, **kwargs) -> SuiteResult:
    fn = SUITES[name]
    opts = dict(DEFAULT_SIZES.get(name, {}))
    opts.update(kwargs)
    if name == "postnikov":
        opts["perturb"] = perturb
    return fn(**opts)
