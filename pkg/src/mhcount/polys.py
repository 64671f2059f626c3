"""Integer and rational polynomials, plus exact integer root isolation."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .numerics import INT64_SAFE


def _trim(coeffs) -> tuple[int, ...]:
    cs = [int(c) for c in coeffs]
    while len(cs) > 1 and cs[-1] == 0:
        cs.pop()
    return tuple(cs) if cs else (0,)


@dataclass(frozen=True)
class IntegerPolynomial:
    """Polynomial with arbitrary-precision integer coefficients, constant term first."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int]):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    @classmethod
    def monomial(cls, d: int, c: int = 1) -> "IntegerPolynomial":
        return cls([0] * d + [c])

    @classmethod
    def constant(cls, c: int) -> "IntegerPolynomial":
        return cls([c])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        if self.coeffs == (0,):
            return -1
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return self.coeffs == (0,)

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_mod(self, x, q: int):
        """f(x) mod q for an int or an integer array; exact for any size."""
        if isinstance(x, (int, np.integer)):
            acc = 0
            for c in reversed(self.coeffs):
                acc = (acc * int(x) + c) % q
            return acc
        x = np.asarray(x)
        cs = [c % q for c in self.coeffs]
        if q * q < INT64_SAFE and x.dtype != object:
            xr = np.mod(x, q).astype(np.int64)
            acc = np.zeros_like(xr)
            for c in reversed(cs):
                acc = (acc * xr + c) % q
            return acc
        out = np.empty(x.shape, dtype=object)
        flat = out.ravel()
        for i, v in enumerate(x.ravel().tolist()):
            acc = 0
            v = int(v) % q
            for c in reversed(cs):
                acc = (acc * v + c) % q
            flat[i] = acc
        return out

    def reduce_mod(self, q: int) -> "IntegerPolynomial":
        return IntegerPolynomial(c % q for c in self.coeffs)

    def derivative(self) -> "IntegerPolynomial":
        return IntegerPolynomial(i * c for i, c in enumerate(self.coeffs) if i > 0) if len(self.coeffs) > 1 \
            else IntegerPolynomial([0])

    def forward_difference(self) -> "IntegerPolynomial":
        """The polynomial x -> f(x + 1) - f(x)."""
        return self.shift(1) - self

    def shift(self, t: int) -> "IntegerPolynomial":
        """The polynomial x -> f(x + t)."""
        out = IntegerPolynomial([0])
        lin = IntegerPolynomial([t, 1])
        for c in reversed(self.coeffs):
            out = out * lin + IntegerPolynomial([c])
        return out

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntegerPolynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return IntegerPolynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntegerPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, m: int):
        if m < 0:
            raise ValueError("negative power")
        out = IntegerPolynomial([1])
        base = self
        while m:
            if m & 1:
                out = out * base
            base = base * base
            m >>= 1
        return out

    def __str__(self):
        terms = [f"{c}*X^{i}" if i > 1 else (f"{c}*X" if i == 1 else str(c))
                 for i, c in enumerate(self.coeffs) if c]
        return " + ".join(reversed(terms)) or "0"


def _as_poly(x) -> IntegerPolynomial:
    return x if isinstance(x, IntegerPolynomial) else IntegerPolynomial([x])


@dataclass(frozen=True)
class RationalExpPolynomial:
    """Phase polynomial G(X) = sum_i (a_i/q_i) X^i with gcd(a_i, q_i) = 1.

    ``terms`` holds (a_i, q_i, i) triples with distinct powers i >= 0.
    """

    terms: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        powers = [i for _, _, i in self.terms]
        if len(set(powers)) != len(powers):
            raise ValueError("powers must be distinct")
        for a, q, i in self.terms:
            if q < 1 or i < 0 or math.gcd(a, q) != 1:
                raise ValueError(f"bad term {a}/{q} X^{i}")

    @classmethod
    def from_fractions(cls, coeffs: Sequence) -> "RationalExpPolynomial":
        """Build from a constant-first list of rationals (Fraction, int or "a/b")."""
        terms = []
        for i, c in enumerate(coeffs):
            c = Fraction(c)
            if c:
                terms.append((c.numerator, c.denominator, i))
        return cls(tuple(terms))

    @property
    def degree(self) -> int:
        return max((i for a, _, i in self.terms if a), default=-1)

    def denominator(self, j: int) -> int:
        """q_j of the X^j term (1 if the term is absent)."""
        for _, q, i in self.terms:
            if i == j:
                return q
        return 1

    def common_denominator(self) -> int:
        return math.lcm(*(q for _, q, _ in self.terms)) if self.terms else 1

    def numerator_poly(self) -> tuple[IntegerPolynomial, int]:
        """(N, D) with G(X) = N(X)/D and N integral."""
        D = self.common_denominator()
        deg = max((i for _, _, i in self.terms), default=0)
        cs = [0] * (deg + 1)
        for a, q, i in self.terms:
            cs[i] = a * (D // q)
        return IntegerPolynomial(cs), D

    def __call__(self, x: int) -> Fraction:
        return sum((Fraction(a, q) * x**i for a, q, i in self.terms), Fraction(0))


# -- exact integer roots ---------------------------------------------------

def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def sign_runs(f: IntegerPolynomial, lo: int, hi: int) -> list[tuple[int, int, int]]:
    """Split [lo, hi] into maximal runs (start, end, sign) where sign(f(x)) is constant.

    Works on the integer grid only, recursing on the forward difference
    f(x+1) - f(x): on each run where that difference keeps a strict sign,
    f is strictly monotone and its sign changes are found by bisection.
    Everything is exact integer arithmetic.
    """
    if lo > hi:
        return []
    if f.degree <= 0:
        return [(lo, hi, _sign(f.coeffs[0]))]
    if lo == hi:
        return [(lo, lo, _sign(f(lo)))]
    runs: list[tuple[int, int, int]] = []
    for s, e, dsign in sign_runs(f.forward_difference(), lo, hi - 1):
        seg_end = e + 1
        if dsign == 0:
            pieces = [(s, seg_end, _sign(f(s)))]
        else:
            pieces = _monotone_runs(f, s, seg_end)
        for piece in pieces:
            _append_run(runs, piece)
    return runs


def _monotone_runs(f, s, e):
    """Sign runs of f on [s, e] where f is strictly monotone in ``direction``."""
    out = []
    a = s
    while a <= e:
        sa = _sign(f(a))
        # last x in [a, e] with sign(f(x)) == sa; f monotone so this is a prefix
        lo, hi = a, e
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if _sign(f(mid)) == sa:
                lo = mid
            else:
                hi = mid - 1
        out.append((a, lo, sa))
        a = lo + 1
    return out


def _append_run(runs, piece):
    s, e, sg = piece
    if runs:
        ps, pe, psg = runs[-1]
        if s <= pe:
            # overlapping endpoint, already covered
            s = pe + 1
            if s > e:
                return
        if psg == sg and s == pe + 1:
            runs[-1] = (ps, e, sg)
            return
    runs.append((s, e, sg))


def integer_roots(f: IntegerPolynomial, lo: int, hi: int) -> list[int]:
    """All integers x in [lo, hi] with f(x) == 0 (the whole range if f is zero)."""
    roots = []
    for s, e, sg in sign_runs(f, lo, hi):
        if sg == 0:
            roots.extend(range(s, e + 1))
    return roots
