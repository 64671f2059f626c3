"""Complete and incomplete exponential / mixed character sums and bound comparators.

Every phase is reduced to a rational in [0, 1) with exact integer
arithmetic before it touches floating point, and every sum goes through
:func:`mhcount.numerics.blocked_sum`, so results do not depend on the
summation order or on the worker count.

The comparators evaluate a sum exactly and set it against its published
upper bound with implied constant 1. They only record the ratio;
nothing here asserts that a bound holds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .arith import FactoredModulus, ModulusKind, factor_small
from .chars import Character, character_order
from .errors import BadIndex, DegenerateInput, DegreeUnsupported, OrderConditionViolated
from .numerics import INT64_SAFE, blocked_sum, e_frac
from .polys import IntegerPolynomial, RationalExpPolynomial

X = IntegerPolynomial([0, 1])


@dataclass
class SumReport:
    value: complex
    bound: float
    params: dict = field(default_factory=dict)
    flags: tuple[str, ...] = ()
    magnitude: float = field(init=False)
    ratio: float = field(init=False)

    def __post_init__(self):
        if not self.bound > 0:
            raise ValueError(f"bound must be positive, got {self.bound}")
        self.magnitude = abs(self.value)
        self.ratio = self.magnitude / self.bound

    @property
    def in_regime(self) -> bool:
        return "out-of-regime" not in self.flags


def _xs(lo: int, hi: int) -> np.ndarray:
    if max(abs(lo), abs(hi)) < INT64_SAFE:
        return np.arange(lo, hi, dtype=np.int64)
    return np.array(range(lo, hi), dtype=object)


def _combine(idx: np.ndarray | None, L: int, roots: np.ndarray | None, num, den: int) -> np.ndarray:
    """Terms [idx >= 0] * e(idx/L + num/den); idx None means no character factor."""
    if idx is None:
        return e_frac(num, den)
    good = idx >= 0
    safe = np.where(good, idx, 0)
    num = np.asarray(num)
    if num.dtype != object and L * den < INT64_SAFE:
        total = (safe * den + num * L) % (L * den)
        vals = e_frac(total, L * den)
    else:
        vals = roots[safe] * e_frac(num, den)
    return np.where(good, vals, 0)


def _char_poly_sum(chi: Character | None, poly_num: Callable, den: int, u: int, h: int,
                   workers: int = 1) -> complex:
    """sum_{x=u+1}^{u+h} chi(x) e(poly_num(x)/den), poly_num returning exact residues."""
    if h <= 0:
        return 0j
    if chi is not None:
        t = chi.table
        L, roots = t.exponent, t.unit_roots

    def terms(lo, hi):
        xs = _xs(lo, hi)
        idx = chi.index(xs) if chi is not None else None
        return _combine(idx, L if chi is not None else 1, roots if chi is not None else None,
                        poly_num(xs), den)

    return blocked_sum(terms, u + 1, u + h + 1, workers=workers)


def incomplete_mixed_sum(chi: Character, k: int, f: IntegerPolynomial, lam: int, u: int, h: int,
                         workers: int = 1) -> complex:
    """S(chi; lam) = sum_{x=u+1}^{u+h} chi^k(x) e(lam f(x)/q)."""
    q = chi.table.q
    lam_f = f * lam
    return _char_poly_sum(chi ** k, lambda xs: lam_f.eval_mod(xs, q), q, u, h, workers)


def gauss_sum(chi: Character, lam: int) -> complex:
    """G(chi, lam) = sum_{y=1}^{q} chi(y) e(lam y/q)."""
    return incomplete_mixed_sum(chi, 1, X, lam, 0, chi.table.q)


def gauss_sum_matrix(table, lams: Sequence[int]) -> np.ndarray:
    """G(chi, lam) for every character (rows, in table order) and every lam (columns)."""
    q = table.q
    chars = table.values_from_index(table.all_indices())          # (phi, q)
    y = np.arange(q, dtype=np.int64)
    lam = np.asarray(lams, dtype=np.int64) % q
    add = np.exp(2j * np.pi * ((np.outer(y, lam) % q) / q))      # (q, n_lam)
    return chars @ add


def ramanujan_sum(q: FactoredModulus | int, lam: int) -> int:
    """Exact c_q(lam) = sum_{d | gcd(q, lam)} mu(q/d) d."""
    factors = q.factors if isinstance(q, FactoredModulus) else (factor_small(q) if q > 1 else [])
    total = 0
    # walk the divisors d of gcd(q, lam) through their exponent vectors
    caps = []
    for p, e in factors:
        f = 0
        t = lam
        while f < e and t % p == 0 and t != 0:
            t //= p
            f += 1
        caps.append(e if lam == 0 else f)
    divs = [(1, 1)]   # (d, mu(q/d))
    for (p, e), cap in zip(factors, caps):
        nxt = []
        for d, mu in divs:
            for i in range(cap + 1):
                rest = e - i
                if rest > 1:
                    m = 0
                elif rest == 1:
                    m = -mu
                else:
                    m = mu
                nxt.append((d * p**i, m))
        divs = nxt
    for d, mu in divs:
        total += mu * d
    return total


def exp_sum(G: RationalExpPolynomial, H: int, workers: int = 1) -> complex:
    """sum_{z=1}^{H} e(G(z)) with G reduced mod 1 exactly."""
    N, D = G.numerator_poly()
    return _char_poly_sum(None, lambda zs: N.eval_mod(zs, D), D, 0, H, workers)


def _integer_exp_sum(G: IntegerPolynomial, H: int, q: int) -> complex:
    return _char_poly_sum(None, lambda zs: G.eval_mod(zs, q), q, 0, H)


def linear_quadratic_bound(G: IntegerPolynomial, H: int, q: int) -> SumReport:
    """|sum_{z<=H} e(G(z)/q)| against q (linear G) or H q^-1/2 + q^1/2 log q (quadratic G)."""
    d = G.degree
    if d not in (1, 2):
        raise DegreeUnsupported(f"degree {d} not linear or quadratic")
    if math.gcd(G.leading, q) != 1:
        raise ValueError("leading coefficient must be coprime to q")
    if d == 1:
        bound = float(q)
    else:
        bound = H / math.sqrt(q) + math.sqrt(q) * math.log(q)
    value = _integer_exp_sum(G, H, q)
    return SumReport(value, bound, {"op": "linear_quadratic_bound", "degree": d, "q": q, "H": H,
                                    "G": list(G.coeffs)})


def wooley_sigma(s: int) -> float:
    return 1.0 / (2 * (s - 1) * (s - 2))


def wooley_report(G: RationalExpPolynomial, H: int, j: int) -> SumReport:
    s = G.degree
    if s < 3:
        raise DegreeUnsupported(f"degree {s} < 3")
    if not 2 <= j <= s:
        raise BadIndex(f"j={j} outside [2, {s}]")
    sigma = wooley_sigma(s)
    qj = G.denominator(j)
    bound = H * (1 / qj + 1 / H + qj * float(H) ** (-j)) ** sigma
    return SumReport(exp_sum(G, H), bound,
                     {"op": "wooley_report", "s": s, "j": j, "q_j": qj, "H": H, "sigma": sigma,
                      "terms": [list(t) for t in G.terms]})


def weil_report(chi: Character, lam: int, F: IntegerPolynomial, u: int, h: int) -> SumReport:
    """sum_{x=u+1}^{u+h} chi(x) e(lam F(x)/p) against p^1/2 log p."""
    q = chi.table.modulus
    if len(q.factors) != 1 or q.factors[0][1] != 1:
        raise ValueError(f"weil_report needs a prime modulus, got {q.value}")
    p = q.value
    if chi.is_principal and lam % p == 0:
        raise DegenerateInput("(chi, lam) = (chi_0, 0)")
    if F.reduce_mod(p).degree <= 1:
        raise DegenerateInput("F is linear modulo p")
    if h < 1:
        raise ValueError("h must be positive")
    flags = () if h >= p else ("out-of-regime",)
    value = incomplete_mixed_sum(chi, 1, F, lam, u, h)
    return SumReport(value, math.sqrt(p) * math.log(p),
                     {"op": "weil_report", "p": p, "mu": list(chi.mu), "lam": lam, "F": list(F.coeffs),
                      "u": u, "h": h, "weil_explicit": F.reduce_mod(p).degree * math.sqrt(p)}, flags)


def _discriminant_product(vs: Sequence[int]) -> int:
    out = 1
    for i in range(len(vs)):
        for j in range(i):
            out *= vs[i] - vs[j]
    return out


def pure_sum_report(psi: Character, roots: Sequence[tuple[int, int]], u: int, h: int) -> SumReport:
    """sum psi(f(x)) for f = prod (X - v_i)^{d_i} against 4h (gcd(Delta, l_s)/l_s)^{2^-s}.

    The d_i may be negative (f is then a rational function); a term vanishes
    as soon as some x - v_i is not a unit.
    """
    q = psi.table.modulus
    if q.kind is not ModulusKind.SQUARE_FREE:
        raise ValueError("pure_sum_report needs a square-free modulus")
    if psi.mu[-1] == 0:
        raise DegenerateInput("last component of psi must be non-principal")
    if not roots or any(d == 0 for _, d in roots):
        raise ValueError("need at least one root, all multiplicities nonzero")
    if h < 1:
        raise ValueError("h must be positive")
    t = character_order(psi)
    g = math.gcd(t, *(d for _, d in roots))
    if g > 1:
        raise OrderConditionViolated(f"gcd(d_1..d_m, t={t}) = {g}")
    primes = q.primes
    s, ell = len(primes), primes[-1]
    delta = _discriminant_product([v for v, _ in roots])
    gd = math.gcd(delta, ell)
    bound = 4 * h * (gd / ell) ** (2.0 ** -s)
    tab = psi.table
    L = tab.exponent

    def terms(lo, hi):
        xs = _xs(lo, hi)
        total = np.zeros(hi - lo, dtype=np.int64)
        bad = np.zeros(hi - lo, dtype=bool)
        for v, d in roots:
            idx = psi.index(xs - v)
            bad |= idx < 0
            total = (total + (d % L) * np.where(idx < 0, 0, idx)) % L
        return np.where(bad, 0, tab.unit_roots[total])

    value = blocked_sum(terms, u + 1, u + h + 1)
    flags = []
    if h < max(primes) ** 2.25:
        flags.append("out-of-regime")
    if any(m == 0 for m in psi.mu):
        flags.append("conductor-below-q")
    return SumReport(value, bound, {"op": "pure_sum_report", "q": q.value, "mu": list(psi.mu),
                                    "roots": [list(r) for r in roots], "u": u, "h": h, "delta": delta,
                                    "order": t, "s": s}, tuple(flags))


def mixed_sf_gamma(r: int, d: int) -> float:
    return 1.0 / (2 ** (r + 1) * (d + 1) * (d + 2))


def mixed_sf_report(chi: Character, F: RationalExpPolynomial, u: int, h: int,
                    Q: float | None = None) -> SumReport:
    """sum chi(x) e(F(x)) for rational-coefficient F against h Q^-gamma."""
    q = chi.table.modulus
    if q.kind is not ModulusKind.SQUARE_FREE:
        raise ValueError("mixed_sf_report needs a square-free modulus")
    if chi.is_principal:
        raise DegenerateInput("chi must be non-principal")
    if h < 1:
        raise ValueError("h must be positive")
    primes = q.primes
    r = len(primes)
    d = max(F.degree, 0)
    gamma = mixed_sf_gamma(r, d)
    flags = []
    if Q is None:
        Q = float(min(primes))
    if not all(Q <= p <= 2 * Q for p in primes):
        flags.append("q-not-in-P_r(Q)")
        Q = max(primes) / 2
    if h < (2 * Q) ** 2.25:
        flags.append("out-of-regime")
    N, D = F.numerator_poly()
    value = _char_poly_sum(chi, lambda xs: N.eval_mod(xs, D), D, u, h)
    bound = h * Q ** (-gamma)
    return SumReport(value, bound, {"op": "mixed_sf_report", "q": q.value, "mu": list(chi.mu),
                                    "F": [list(t) for t in F.terms], "u": u, "h": h, "Q": Q, "r": r,
                                    "d": d, "gamma": gamma}, tuple(flags))
