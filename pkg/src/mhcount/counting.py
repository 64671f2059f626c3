"""Exact point counts on (f_1(x_1) + ... + f_n(x_n))^m = a x_1^k_1 ... x_n^k_n.

Integer counts (N*), congruence counts (T) and their reconstruction from
Gauss sums and incomplete mixed sums, plus the auxiliary counts used in the
density arguments: the fourth moment W, ordered divisor tuples in a short
interval, value sets of diagonal forms, and modulus selection.

Negative exponents are handled by clearing denominators,

    (sum f_i(x_i))^m * prod_{k_i<0} x_i^|k_i| = a * prod_{k_i>0} x_i^k_i,

which is equivalent to the original equation whenever every x_i != 0.
"""
from __future__ import annotations

import enum
import functools
import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .arith import FactoredModulus, PrimeMode, enumerate_moduli, euler_phi, select_primes
from .chars import build_character_table
from .errors import BudgetExceeded, ResidualTooLarge
from .expsums import gauss_sum_matrix
from .numerics import fsum_complex
from .polys import IntegerPolynomial, integer_roots

DEFAULT_BUDGET = 10**8
RESIDUAL_WARN = 1e-3


@dataclass(frozen=True)
class HypersurfaceSpec:
    f_list: tuple[IntegerPolynomial, ...]
    k_list: tuple[int, ...]
    a: int
    m: int = 1

    def __post_init__(self):
        object.__setattr__(self, "f_list", tuple(
            f if isinstance(f, IntegerPolynomial) else IntegerPolynomial(f) for f in self.f_list))
        object.__setattr__(self, "k_list", tuple(int(k) for k in self.k_list))
        if len(self.f_list) < 2 or len(self.f_list) != len(self.k_list):
            raise ValueError("need n >= 2 polynomials and as many exponents")
        if self.a == 0 or any(k == 0 for k in self.k_list):
            raise ValueError("a and every k_i must be nonzero")
        if self.m < 1:
            raise ValueError("outer power m must be >= 1")

    @property
    def n(self) -> int:
        return len(self.f_list)

    @classmethod
    def markoff_hurwitz(cls, n: int, a: int) -> "HypersurfaceSpec":
        return cls((IntegerPolynomial.monomial(2),) * n, (1,) * n, a)

    @classmethod
    def dwork(cls, n: int, a: int) -> "HypersurfaceSpec":
        return cls((IntegerPolynomial.monomial(n),) * n, (1,) * n, a)

    @classmethod
    def diagonal(cls, d: int, n: int, a: int, k_list: Sequence[int] | None = None) -> "HypersurfaceSpec":
        return cls((IntegerPolynomial.monomial(d),) * n, tuple(k_list or (1,) * n), a)

    @property
    def all_k_odd(self) -> bool:
        return all(k % 2 for k in self.k_list)


@dataclass(frozen=True)
class Box:
    """[u_1+1, u_1+h] x ... x [u_n+1, u_n+h]."""

    us: tuple[int, ...]
    h: int

    def __post_init__(self):
        object.__setattr__(self, "us", tuple(int(u) for u in self.us))
        if self.h < 0:
            raise ValueError("h must be non-negative")

    @classmethod
    def diagonal(cls, u: int, h: int, n: int) -> "Box":
        return cls((u,) * n, h)

    @property
    def n(self) -> int:
        return len(self.us)

    def interval(self, i: int) -> range:
        return range(self.us[i] + 1, self.us[i] + self.h + 1)


class CountMethod(enum.Enum):
    FULL_ENUMERATION = "full-enumeration"
    SOLVE_LAST = "solve-last"
    CHARACTER_IDENTITY = "character-identity"
    RESIDUE_CONVOLUTION = "residue-convolution"


@dataclass
class CountResult:
    count: int
    method: CountMethod
    elapsed: float = 0.0
    flags: tuple[str, ...] = ()
    residual: float | None = None
    params: dict = field(default_factory=dict)
    solutions: list | None = None


def _check(spec: HypersurfaceSpec, box: Box):
    if spec.n != box.n:
        raise ValueError(f"spec has {spec.n} variables, box has {box.n}")


def _parity_flags(spec) -> tuple[str, ...]:
    return () if spec.all_k_odd else ("even-k",)


# -- integer points ------------------------------------------------------------

def _coordinate_data(spec: HypersurfaceSpec, box: Box, i: int):
    f, k = spec.f_list[i], spec.k_list[i]
    out = []
    for x in box.interval(i):
        if x == 0:
            continue
        out.append((x, f(x), x ** -k if k < 0 else 1, x**k if k > 0 else 1))
    return out


def _chunk_count(spec, box, strategy, lo_idx, hi_idx, collect):
    """Count solutions whose outermost enumerated coordinate has index in [lo_idx, hi_idx)."""
    n, m, a = spec.n, spec.m, spec.a
    data = [_coordinate_data(spec, box, i) for i in range(n)]
    sols = [] if collect else None
    count = 0
    if strategy is CountMethod.FULL_ENUMERATION:
        first, rest = data[0][lo_idx:hi_idx], data[1:]
        for c0 in first:
            for combo in itertools.product(*rest):
                s = c0[1]
                lp = c0[2]
                rp = c0[3]
                for c in combo:
                    s += c[1]
                    lp *= c[2]
                    rp *= c[3]
                if s**m * lp == a * rp:
                    count += 1
                    if collect:
                        sols.append((c0[0],) + tuple(c[0] for c in combo))
        return count, sols

    # solve-last: enumerate x_2..x_n, group equal (sum, lhs, rhs) triples, solve for x_1
    f1, k1 = spec.f_list[0], spec.k_list[0]
    c1 = -k1 if k1 < 0 else 0
    e1 = k1 if k1 > 0 else 0
    lo1, hi1 = box.us[0] + 1, box.us[0] + box.h
    groups: dict[tuple[int, int, int], list] = {}
    first, rest = data[1][lo_idx:hi_idx], data[2:]
    for c0 in first:
        for combo in itertools.product(*rest):
            s, lp, rp = c0[1], c0[2], c0[3]
            for c in combo:
                s += c[1]
                lp *= c[2]
                rp *= c[3]
            key = (s, lp, rp)
            tail = (c0[0],) + tuple(c[0] for c in combo)
            if key in groups:
                groups[key].append(tail)
            else:
                groups[key] = [tail]
    xc1 = IntegerPolynomial.monomial(c1)
    xe1 = IntegerPolynomial.monomial(e1)
    for (s, lp, rp), tails in groups.items():
        g = (f1 + s) ** m * xc1 * lp - xe1 * (a * rp)
        roots = [x for x in integer_roots(g, lo1, hi1) if x != 0]
        count += len(roots) * len(tails)
        if collect:
            sols.extend((x,) + t for x in roots for t in tails)
    return count, sols


def count_points(spec: HypersurfaceSpec, box: Box, strategy: CountMethod | str = CountMethod.SOLVE_LAST,
                 budget: int = DEFAULT_BUDGET, workers: int = 1, collect: bool = False) -> CountResult:
    """Exact N*: solutions in the box with every x_i != 0.

    ``strategy`` is FULL_ENUMERATION (every tuple is tested) or SOLVE_LAST
    (x_2..x_n are enumerated and x_1 is found by exact integer root isolation).
    With ``collect`` the solutions are returned sorted.
    """
    _check(spec, box)
    strategy = CountMethod(strategy)
    if strategy not in (CountMethod.FULL_ENUMERATION, CountMethod.SOLVE_LAST):
        raise ValueError(f"unsupported strategy {strategy}")
    t0 = time.perf_counter()
    sizes = [sum(1 for x in box.interval(i) if x != 0) for i in range(spec.n)]
    if strategy is CountMethod.FULL_ENUMERATION:
        work, outer = math.prod(sizes), sizes[0]
    else:
        work, outer = math.prod(sizes[1:]), sizes[1]
    if work > budget:
        raise BudgetExceeded(f"{strategy.value} needs {work} evaluations, budget {budget}")
    if box.h == 0 or outer == 0:
        chunks = []
    else:
        nchunks = max(1, min(outer, workers * 4 if workers > 1 else 1))
        step = -(-outer // nchunks)
        chunks = [(lo, min(lo + step, outer)) for lo in range(0, outer, step)]
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_chunk_count, *zip(*[(spec, box, strategy, lo, hi, collect) for lo, hi in chunks])))
    else:
        parts = [_chunk_count(spec, box, strategy, lo, hi, collect) for lo, hi in chunks]
    total = sum(c for c, _ in parts)
    sols = sorted(s for _, ss in parts for s in ss) if collect else None
    return CountResult(total, strategy, time.perf_counter() - t0, _parity_flags(spec),
                       params={"work": work}, solutions=sols)


# -- congruence counts ---------------------------------------------------------

def _qvalue(q) -> int:
    return q.value if isinstance(q, FactoredModulus) else int(q)


def _residue_counts(u: int, h: int, q: int) -> np.ndarray:
    """Number of x in [u+1, u+h] with x = r (mod q), for each r, zeroed on non-units."""
    r = np.arange(q)
    counts = np.full(q, h // q, dtype=np.int64) + (((r - (u + 1)) % q) < (h % q))
    units = np.gcd(r, q) == 1
    return np.where(units, counts, 0)


def _unit_power(r: int, k: int, q: int) -> int:
    return pow(r, k, q)


def count_congruence(spec: HypersurfaceSpec, box: Box, q, method: str = "auto",
                     budget: int = DEFAULT_BUDGET) -> CountResult:
    """Exact T: box points with every gcd(x_i, q) = 1 and (sum f_i)^m = a prod x_i^k_i (mod q).

    ``method`` is "residue" (dynamic programme over (sum, product) residue
    pairs), "enumerate" (direct tuple loop) or "auto" (cheaper of the two).
    """
    _check(spec, box)
    t0 = time.perf_counter()
    qv = _qvalue(q)
    n, h = spec.n, box.h
    counts = [_residue_counts(u, h, qv) for u in box.us]
    units = [np.nonzero(c)[0] for c in counts]
    cost_dp = sum(len(un) for un in units) * qv * qv
    cost_enum = math.prod(int(c.sum()) for c in counts)
    if method == "auto":
        method = "residue" if cost_dp < cost_enum else "enumerate"
    if method == "residue":
        if cost_dp > budget:
            raise BudgetExceeded(f"residue table needs {cost_dp} operations, budget {budget}")
        total = _congruence_dp(spec, counts, units, qv)
        how = CountMethod.RESIDUE_CONVOLUTION
    elif method == "enumerate":
        if cost_enum > budget:
            raise BudgetExceeded(f"enumeration needs {cost_enum} tuples, budget {budget}")
        total = _congruence_enum(spec, box, qv)
        how = CountMethod.FULL_ENUMERATION
    else:
        raise ValueError(f"unknown method {method!r}")
    return CountResult(total, how, time.perf_counter() - t0, _parity_flags(spec), params={"q": qv})


def _congruence_dp(spec, counts, units, q) -> int:
    big = math.prod(int(c.sum()) for c in counts) >= 2**62
    state = np.zeros((q, q), dtype=object if big else np.int64)
    state[0, 1 % q] = 1
    cols = np.arange(q)
    for f, k, cnt, un in zip(spec.f_list, spec.k_list, counts, units):
        new = np.zeros_like(state)
        fr = f.eval_mod(un, q) if len(un) else []
        for r, fv in zip(un.tolist(), np.asarray(fr).tolist()):
            rolled = np.roll(state, int(fv), axis=0)
            new[:, (cols * _unit_power(r, k, q)) % q] += int(cnt[r]) * rolled
        state = new
    s = np.arange(q)
    lhs = np.array([pow(int(v), spec.m, q) for v in s])
    rhs = (spec.a * cols) % q
    mask = lhs[:, None] == rhs[None, :]
    return int(state[mask].sum())


def _congruence_enum(spec, box, q) -> int:
    data = []
    for i in range(spec.n):
        f, k = spec.f_list[i], spec.k_list[i]
        data.append([(f.eval_mod(x, q), _unit_power(x % q, k, q))
                     for x in box.interval(i) if math.gcd(x, q) == 1])
    a, m = spec.a % q, spec.m
    total = 0
    for combo in itertools.product(*data):
        s, p = 0, 1
        for fv, pv in combo:
            s += fv
            p = p * pv % q
        if pow(s, m, q) == a * p % q:
            total += 1
    return total


def reconstruct_T(spec: HypersurfaceSpec, box: Box, q: FactoredModulus,
                  budget: int = DEFAULT_BUDGET) -> CountResult:
    """T from the character identity

        T = 1/(q phi(q)) sum_{lam=1}^{q} sum_chi conj(G(chi, a lam)) prod_i S_i(chi, lam),
        S_i(chi, lam) = sum_{x in box_i} chi^{k_i}(x) e(lam f_i(x)/q).

    Only the outer power m = 1 separates this way.
    """
    _check(spec, box)
    if spec.m != 1:
        raise ValueError("the character identity needs outer power m = 1")
    t0 = time.perf_counter()
    table = build_character_table(q)
    qv, phi = table.q, table.group_order
    work = qv * phi * spec.n * max(box.h, 1)
    if work > budget:
        raise BudgetExceeded(f"identity needs {work} operations, budget {budget}")
    idx = table.all_indices()
    lams = np.arange(1, qv + 1, dtype=np.int64)
    prod = np.ones((phi, qv), dtype=complex)
    for i in range(spec.n):
        xs = np.array(list(box.interval(i)), dtype=object)
        xr = np.array([int(x) % qv for x in xs], dtype=np.int64)
        C = table.values_from_index(idx[:, xr], power=spec.k_list[i])            # (phi, h)
        fx = np.asarray(spec.f_list[i].eval_mod(xr, qv), dtype=np.int64)
        E = np.exp(2j * np.pi * ((np.outer(fx, lams) % qv) / qv))                 # (h, q)
        prod *= C @ E if len(xr) else np.zeros((phi, qv))
    G = gauss_sum_matrix(table, (spec.a * lams) % qv)
    value = fsum_complex(np.conj(G) * prod) / (qv * phi)
    nearest = round(value.real)
    residual = abs(value - nearest)
    if residual >= 0.5:
        raise ResidualTooLarge(f"identity value {value} is {residual:.3g} from an integer")
    flags = _parity_flags(spec) + (("residual-warning",) if residual >= RESIDUAL_WARN else ())
    return CountResult(int(nearest), CountMethod.CHARACTER_IDENTITY, time.perf_counter() - t0, flags,
                       residual=residual, params={"q": qv, "raw": value})


# -- auxiliary counts ----------------------------------------------------------

def fourth_moment(q, u: int, h: int) -> CountResult:
    """W = #{w, x, y, z in [u+1, u+h] coprime to q : wx = yz (mod q)}."""
    t0 = time.perf_counter()
    qv = _qvalue(q)
    cnt = _residue_counts(u, h, qv)
    rs = np.nonzero(cnt)[0]
    c = cnt[rs].astype(object)
    prods = (np.outer(rs, rs) % qv).ravel()
    weights = np.outer(c, c).ravel()
    P = np.zeros(qv, dtype=object)
    np.add.at(P, prods, weights)
    W = int((P * P).sum())
    bound = h**4 / qv + h**2
    flags = ("out-of-regime",) if h > qv else ()
    return CountResult(W, CountMethod.RESIDUE_CONVOLUTION, time.perf_counter() - t0, flags,
                       params={"q": qv, "u": u, "h": h, "bound": bound,
                               "ratio": W / bound if bound else math.inf,
                               "units": int(cnt.sum())})


def divisor_tuples(u: int, h: int, n: int, z: int) -> int:
    """Ordered n-tuples from [u+1, u+h] whose product is z."""
    if z < 1 or u < 0 or n < 1:
        raise ValueError("need z >= 1, u >= 0, n >= 1")
    lo, hi = u + 1, u + h

    @functools.lru_cache(maxsize=None)
    def count(z, n):
        if n == 1:
            return 1 if lo <= z <= hi else 0
        return sum(count(z // d, n - 1) for d in range(lo, min(hi, z) + 1) if z % d == 0)

    return count(z, n)


def value_set(d: int, n: int, u: int, h: int, budget: int = DEFAULT_BUDGET) -> set[int]:
    """{x_1^d + ... + x_n^d : x_i in [u+1, u+h]} by iterated deduplicated sumsets."""
    powers = [x**d for x in range(u + 1, u + h + 1)]
    sums = {0}
    work = 0
    for _ in range(n):
        work += len(sums) * len(powers)
        if work > budget:
            raise BudgetExceeded(f"value set needs more than {budget} additions")
        sums = {s + p for s in sums for p in powers}
    return sums if h > 0 else set()


def value_set_size(d: int, n: int, u: int, h: int, budget: int = DEFAULT_BUDGET) -> int:
    return len(value_set(d, n, u, h, budget))


def value_set_envelope(d: int, n: int, h: int) -> int:
    """Size of the enclosing set {sum_nu binom(d,nu) z_nu u^(d-nu) : 0 <= z_nu <= n h^nu}."""
    return math.prod(n * h**nu + 1 for nu in range(d + 1))


def divisor_pipeline_bound(d: int, n: int, a: int, u: int, h: int, budget: int = DEFAULT_BUDGET) -> int:
    """Upper bound for N* on x_1^d + ... + x_n^d = a x_1 ... x_n over a diagonal box.

    Every solution has its power sum v in the value set and x_1...x_n = v/a,
    so N* <= sum over such v of the number of ordered divisor tuples of v/a.
    """
    if u < 0:
        raise ValueError("divisor counting needs u >= 0")
    total = 0
    for v in value_set(d, n, u, h, budget):
        if v % a == 0 and v // a >= 1:
            total += divisor_tuples(u, h, n, v // a)
    return total


@dataclass
class ModulusChoice:
    modulus: FactoredModulus
    kept: int
    total: int
    flags: tuple[str, ...] = ()

    @property
    def fraction(self) -> float:
        return self.kept / self.total if self.total else 1.0


def select_modulus(S: Sequence[int], Q: float, r: int, k_list: Sequence[int],
                   mode: PrimeMode | str = PrimeMode.COPRIME_TO_K_MINUS_ONE) -> ModulusChoice:
    """The q in P_r(Q) keeping the most s in S coprime to q (ties: smallest q).

    S is treated as a multiset; repeated values count repeatedly.
    """
    if any(s == 0 for s in S):
        raise ValueError("S must consist of nonzero integers")
    primes = select_primes(Q, k_list, PrimeMode(mode)).primes
    best = None
    for q in enumerate_moduli(primes, r):
        kept = sum(1 for s in S if math.gcd(s, q.value) == 1)
        if best is None or kept > best[0] or (kept == best[0] and q.value < best[1].value):
            best = (kept, q)
    kept, q = best
    choice = ModulusChoice(q, kept, len(S))
    if choice.fraction < 0.5:
        choice.flags = ("kept-fraction-below-half",)
    return choice
