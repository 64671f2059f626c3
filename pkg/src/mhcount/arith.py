"""Exact integer and modular arithmetic.

Everything here works on Python ints, so nothing overflows; the only hard
limit is the 2**63 cap on moduli.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import EmptySelection, InsufficientPrimes, NotInvertible

MODULUS_CAP = 2**63

# Deterministic for n < 3.3e24, which covers every 64-bit input.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

INF = math.inf


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factor_small(n: int) -> list[tuple[int, int]]:
    """Trial-division factorisation, for the small auxiliary numbers we meet
    (p - 1, config-supplied moduli). Returns sorted (prime, exponent) pairs."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


class ModulusKind(enum.Enum):
    SQUARE_FREE = "square-free"
    PRIME_POWER = "prime-power"


@dataclass(frozen=True)
class FactoredModulus:
    """An odd modulus q >= 3 together with its factorisation.

    Either a product of distinct odd primes or an odd prime power.
    Build these with :meth:`square_free`, :meth:`prime_power` or
    :meth:`from_int` rather than calling the constructor directly.
    """

    kind: ModulusKind
    factors: tuple[tuple[int, int], ...]
    value: int

    def __post_init__(self):
        if not self.factors:
            raise ValueError("modulus needs at least one prime factor")
        prod = 1
        for p, e in self.factors:
            if e < 1 or p == 2 or not is_prime(p):
                raise ValueError(f"bad factor {p}^{e}")
            prod *= p**e
        if prod != self.value:
            raise ValueError(f"factors multiply to {prod}, not {self.value}")
        if self.value < 3 or self.value >= MODULUS_CAP:
            raise ValueError(f"modulus {self.value} outside [3, 2^63)")
        if self.kind is ModulusKind.SQUARE_FREE:
            primes = [p for p, _ in self.factors]
            if any(e != 1 for _, e in self.factors) or len(set(primes)) != len(primes):
                raise ValueError("square-free modulus needs distinct primes to the first power")
        elif len(self.factors) != 1:
            raise ValueError("prime-power modulus has exactly one prime")

    @classmethod
    def square_free(cls, primes: Iterable[int]) -> "FactoredModulus":
        ps = tuple(sorted(primes))
        return cls(ModulusKind.SQUARE_FREE, tuple((p, 1) for p in ps), math.prod(ps))

    @classmethod
    def prime_power(cls, p: int, r: int) -> "FactoredModulus":
        if r == 1:
            return cls.square_free([p])
        return cls(ModulusKind.PRIME_POWER, ((p, r),), p**r)

    @classmethod
    def from_int(cls, n: int) -> "FactoredModulus":
        fs = factor_small(n) if n >= 2 else []
        if len(fs) == 1 and fs[0][1] > 1:
            return cls.prime_power(*fs[0])
        if any(e > 1 for _, e in fs):
            raise ValueError(f"{n} is neither square-free nor a prime power")
        return cls.square_free(p for p, _ in fs)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def prime_powers(self) -> tuple[int, ...]:
        return tuple(p**e for p, e in self.factors)

    def __int__(self):
        return self.value

    def __str__(self):
        return "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)


class PrimeMode(enum.Enum):
    COPRIME_TO_K_MINUS_ONE = "coprime"
    THREE_MOD_TWO_K = "three-mod-2k"


@dataclass(frozen=True)
class PrimeSelection:
    Q: float
    k_list: tuple[int, ...]
    mode: PrimeMode
    primes: tuple[int, ...]


def _admissible(p: int, kprod: int, mode: PrimeMode) -> bool:
    if mode is PrimeMode.COPRIME_TO_K_MINUS_ONE:
        return math.gcd(kprod, p - 1) == 1
    return p % (2 * kprod) == 3 % (2 * kprod)


def select_primes(Q: float, k_list: Sequence[int],
                  mode: PrimeMode = PrimeMode.COPRIME_TO_K_MINUS_ONE) -> PrimeSelection:
    """All primes in [Q, 2Q] satisfying the congruence condition of ``mode``."""
    if Q < 3:
        raise ValueError("Q must be at least 3")
    if not k_list or any(k == 0 for k in k_list):
        raise ValueError("k_list must be nonempty with nonzero entries")
    mode = PrimeMode(mode)
    kprod = abs(math.prod(k_list))
    lo, hi = math.ceil(Q), math.floor(2 * Q)
    primes = tuple(p for p in range(lo, hi + 1) if is_prime(p) and _admissible(p, kprod, mode))
    if not primes:
        raise EmptySelection(f"no admissible prime in [{Q}, {2 * Q}] for k={tuple(k_list)}")
    return PrimeSelection(Q, tuple(k_list), mode, primes)


def enumerate_moduli(primes: Sequence[int], r: int) -> list[FactoredModulus]:
    if r < 1:
        raise ValueError("r must be positive")
    ps = sorted(primes)
    if len(set(ps)) != len(ps):
        raise ValueError("primes must be distinct")
    if len(ps) < r:
        raise InsufficientPrimes(f"need {r} primes, got {len(ps)}")
    return [FactoredModulus.square_free(c) for c in itertools.combinations(ps, r)]


def euler_phi(q: FactoredModulus | int) -> int:
    factors = q.factors if isinstance(q, FactoredModulus) else factor_small(q)
    return math.prod(p ** (e - 1) * (p - 1) for p, e in factors)


def p_adic_order(t: int, p: int) -> int | float:
    """Exponent of p in t; ``math.inf`` when t == 0."""
    if t == 0:
        return INF
    t = abs(t)
    e = 0
    while t % p == 0:
        t //= p
        e += 1
    return e


def mod_inverse(y: int, q: int) -> int:
    if math.gcd(y, q) != 1:
        raise NotInvertible(f"{y} is not invertible modulo {q}")
    return pow(y, -1, q) % q if q > 1 else 0


def crt(residues: Sequence[int], moduli: Sequence[int]) -> int:
    """Combine residues modulo pairwise coprime moduli."""
    x, m = 0, 1
    for r, n in zip(residues, moduli):
        t = (r - x) * pow(m, -1, n) % n
        x += m * t
        m *= n
    return x % m


def primitive_root_prime(p: int) -> int:
    """Smallest primitive root modulo an odd prime p."""
    phi = p - 1
    qs = [ell for ell, _ in factor_small(phi)]
    for g in range(2, p):
        if all(pow(g, phi // ell, p) != 1 for ell in qs):
            return g
    raise ValueError(f"no primitive root found for {p}")


def primitive_root_prime_power(p: int, e: int) -> int:
    g = primitive_root_prime(p)
    if e > 1 and pow(g, p - 1, p * p) == 1:
        g += p
    return g


def mobius_square_free(n: int) -> int:
    fs = factor_small(n) if n > 1 else []
    if any(e > 1 for _, e in fs):
        return 0
    return -1 if len(fs) % 2 else 1


def divisors(factors: Sequence[tuple[int, int]]) -> list[int]:
    ds = [1]
    for p, e in factors:
        ds = [d * p**i for d in ds for i in range(e + 1)]
    return sorted(ds)
