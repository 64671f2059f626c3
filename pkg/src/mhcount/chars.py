"""Multiplicative characters modulo odd square-free q and odd prime powers.

A character is stored as an exponent vector (mu_1, ..., mu_s), one entry
per prime-power factor p_j^e_j of q, relative to the fixed primitive roots
g_j of the table:

    chi(x) = prod_j e(mu_j * dlog_j(x) / phi(p_j^e_j)),   chi(x) = 0 if gcd(x, q) > 1.

Internally every value is an index into the table of e(i/L) where L is the
lcm of the factor orders (the exponent of the unit group).
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .arith import FactoredModulus, ModulusKind, euler_phi, primitive_root_prime_power
from .errors import ModulusTooLarge, NotAFactor
from .numerics import TWO_PI

TABLE_CAP = 2**26
# Full-period lookup arrays over [0, q) are only built below this size.
PERIOD_CAP = 2**24


class CharacterTable:
    """Discrete-log tables for every prime-power factor of ``modulus``."""

    def __init__(self, modulus: FactoredModulus):
        self.modulus = modulus
        self.q = modulus.value
        self.prime_powers = modulus.prime_powers
        self.orders = tuple(euler_phi(FactoredModulus.prime_power(p, e)) for p, e in modulus.factors)
        for n in self.orders:
            if n > TABLE_CAP:
                raise ModulusTooLarge(f"factor group order {n} exceeds cap {TABLE_CAP}")
        self.roots = tuple(primitive_root_prime_power(p, e) for p, e in modulus.factors)
        self.group_order = math.prod(self.orders)
        self.exponent = math.lcm(*self.orders)
        self.weights = tuple(self.exponent // n for n in self.orders)
        self.dlogs = tuple(_dlog_table(g, pe, n) for g, pe, n in zip(self.roots, self.prime_powers, self.orders))
        k = np.arange(self.exponent)
        self.unit_roots = np.exp(1j * TWO_PI * (k / self.exponent))
        self.unit_roots_conj = self.unit_roots.conj()
        self._residue_logs = None

    def __repr__(self):
        return f"CharacterTable(q={self.q}, roots={self.roots})"

    # -- characters --------------------------------------------------------

    def character(self, mu) -> "Character":
        if isinstance(mu, (int, np.integer)):
            mu = (mu,)
        if len(mu) != len(self.orders):
            raise ValueError(f"need {len(self.orders)} exponents, got {len(mu)}")
        return Character(self, tuple(int(m) % n for m, n in zip(mu, self.orders)))

    def principal(self) -> "Character":
        return Character(self, (0,) * len(self.orders))

    def characters(self):
        """All phi(q) characters, in lexicographic order of exponent vectors."""
        for mu in itertools.product(*(range(n) for n in self.orders)):
            yield Character(self, mu)

    def generator(self) -> "Character":
        return Character(self, (1,) * len(self.orders))

    # -- indices -----------------------------------------------------------

    def residue_logs(self) -> np.ndarray:
        """Array (s, q): dlog of x mod p_j^e_j for x in [0, q), -1 on non-units."""
        if self._residue_logs is None:
            if self.q > PERIOD_CAP:
                raise ModulusTooLarge(f"full-period table for q={self.q} exceeds {PERIOD_CAP}")
            x = np.arange(self.q)
            self._residue_logs = np.stack([d[x % pe] for d, pe in zip(self.dlogs, self.prime_powers)])
        return self._residue_logs

    def logs_of(self, x) -> np.ndarray:
        """Per-factor dlogs of arbitrary integers x, shape (s, len(x))."""
        x = np.asarray(x)
        if x.dtype == object:
            return np.stack([np.array([d[int(v) % pe] for v in x], dtype=np.int64)
                             for d, pe in zip(self.dlogs, self.prime_powers)])
        return np.stack([d[np.mod(x, pe)] for d, pe in zip(self.dlogs, self.prime_powers)])

    def index_from_logs(self, mu, logs: np.ndarray) -> np.ndarray:
        """Root indices in [0, L) of chi_mu at points with the given dlogs; -1 on non-units."""
        idx = np.zeros(logs.shape[1:], dtype=np.int64)
        bad = np.zeros(logs.shape[1:], dtype=bool)
        L = self.exponent
        for m, w, n, lg in zip(mu, self.weights, self.orders, logs):
            bad |= lg < 0
            idx = (idx + w * ((m * np.where(lg < 0, 0, lg)) % n)) % L
        return np.where(bad, -1, idx)

    def all_indices(self) -> np.ndarray:
        """Matrix (phi(q), q) of root indices, rows in :meth:`characters` order."""
        logs = self.residue_logs()
        mus = np.array(list(itertools.product(*(range(n) for n in self.orders))), dtype=np.int64)
        L = self.exponent
        bad = (logs < 0).any(axis=0)
        idx = np.zeros((len(mus), self.q), dtype=np.int64)
        for j, (w, n) in enumerate(zip(self.weights, self.orders)):
            idx = (idx + w * (np.outer(mus[:, j], np.where(logs[j] < 0, 0, logs[j])) % n)) % L
        idx[:, bad] = -1
        return idx

    def values_from_index(self, idx: np.ndarray, power: int = 1) -> np.ndarray:
        """Complex values for root indices, raised to ``power``; 0 where idx < 0."""
        L = self.exponent
        safe = np.where(idx < 0, 0, (idx * (power % L)) % L)
        return np.where(idx < 0, 0, self.unit_roots[safe])


def _dlog_table(g: int, pe: int, order: int) -> np.ndarray:
    table = np.full(pe, -1, dtype=np.int64)
    x = 1
    for i in range(order):
        table[x] = i
        x = x * g % pe
    return table


@functools.lru_cache(maxsize=64)
def build_character_table(q: FactoredModulus) -> CharacterTable:
    return CharacterTable(q)


@dataclass(frozen=True, eq=False)
class Character:
    table: CharacterTable
    mu: tuple[int, ...]

    def __eq__(self, other):
        return isinstance(other, Character) and self.table.modulus == other.table.modulus and self.mu == other.mu

    def __hash__(self):
        return hash((self.table.modulus, self.mu))

    def __repr__(self):
        return f"Character(q={self.table.q}, mu={self.mu})"

    @property
    def is_principal(self) -> bool:
        return not any(self.mu)

    def __mul__(self, other: "Character") -> "Character":
        if other.table.modulus != self.table.modulus:
            raise ValueError("characters to different moduli")
        return self.table.character(tuple(a + b for a, b in zip(self.mu, other.mu)))

    def __pow__(self, k: int) -> "Character":
        return self.table.character(tuple(m * k for m in self.mu))

    def conj(self) -> "Character":
        return self ** -1

    def __call__(self, x: int) -> complex:
        return eval_character(self, x)

    def index(self, x) -> np.ndarray:
        """Root indices at the integers x (any size), -1 on non-units."""
        return self.table.index_from_logs(self.mu, self.table.logs_of(x))

    def values(self, x=None) -> np.ndarray:
        """Values at the integers x; the full period [0, q) when x is None."""
        if x is None:
            idx = self.table.index_from_logs(self.mu, self.table.residue_logs())
        else:
            idx = self.index(x)
        return self.table.values_from_index(idx)

    def component(self, j: int) -> int:
        return self.mu[j]


def eval_character(chi: Character, x: int) -> complex:
    t = chi.table
    idx = 0
    for m, w, d, pe in zip(chi.mu, t.weights, t.dlogs, t.prime_powers):
        lg = int(d[x % pe])
        if lg < 0:
            return 0j
        idx += m * w * lg
    return complex(t.unit_roots[idx % t.exponent])


def character_order(chi: Character) -> int:
    return math.lcm(*(n // math.gcd(m, n) for m, n in zip(chi.mu, chi.table.orders)))


def conductor_split(chi: Character, p: int) -> Character:
    """Drop the p-component of a character modulo square-free q."""
    q = chi.table.modulus
    if q.kind is not ModulusKind.SQUARE_FREE:
        raise ValueError("conductor_split needs a square-free modulus")
    if p not in q.primes:
        raise NotAFactor(f"{p} does not divide {q.value}")
    if len(q.primes) < 2:
        raise NotAFactor(f"dropping {p} from {q.value} leaves the trivial modulus")
    j = q.primes.index(p)
    rest = FactoredModulus.square_free(pr for pr in q.primes if pr != p)
    mu = chi.mu[:j] + chi.mu[j + 1:]
    return build_character_table(rest).character(mu)


def is_primitive(chi: Character) -> bool:
    """True when chi is not induced from any proper divisor of its modulus."""
    for m, (p, e) in zip(chi.mu, chi.table.modulus.factors):
        if (m == 0) if e == 1 else (m % p == 0):
            return False
    return True
