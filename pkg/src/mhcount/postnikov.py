"""Explicit Postnikov polynomial for characters modulo p^r.

For a character chi modulo q = p^r (p > max(2, r)) we build
F(Z) = sum_{k=1}^{r-1} A_k Z^k with

    chi(y + p z) = chi(y) e(F(p w z) / q),    w y = 1 (mod q), 1 <= w < q,

for every unit y and every integer z. On the subgroup 1 + pZ the character
is a scaled truncated p-adic logarithm, so

    A_k = c (-1)^(k+1) / k  (mod p^(r-k)),

with c fixed by the value chi(1 + p). Only A_k mod p^(r-k) affects F(pt)
mod p^r, so coefficients are stored in that canonical range. Every build is
checked exhaustively by :func:`verify_postnikov` before it is returned.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .arith import FactoredModulus, mod_inverse, p_adic_order
from .chars import Character, build_character_table
from .errors import BadRange, PrecisionUnavailable
from .expsums import SumReport, incomplete_mixed_sum
from .polys import IntegerPolynomial


@dataclass(frozen=True)
class PostnikovPolynomial:
    p: int
    r: int
    coeffs: tuple[int, ...]     # A_1, ..., A_{r-1}
    mu: int

    @property
    def q(self) -> int:
        return self.p**self.r

    def poly(self) -> IntegerPolynomial:
        return IntegerPolynomial((0,) + self.coeffs)

    @property
    def coprime_coefficients(self) -> bool:
        return all(a % self.p for a in self.coeffs)

    def perturbed(self, k: int = 1, delta: int = 1) -> "PostnikovPolynomial":
        cs = list(self.coeffs)
        cs[k - 1] += delta
        return replace(self, coeffs=tuple(cs))


def _check_modulus(chi: Character, p: int, r: int):
    q = chi.table.modulus
    if q.factors != ((p, r),):
        raise ValueError(f"character is modulo {q.value}, expected {p}^{r}")


def truncated_log_coeffs(p: int, r: int) -> list[int]:
    """Coefficients (-1)^(k+1)/k mod p^r of the truncated logarithm, k = 1..r-1."""
    q = p**r
    return [(-1) ** (k + 1) * mod_inverse(k, q) % q for k in range(1, r)]


def build_postnikov(p: int, r: int, chi: Character, check: bool = True) -> PostnikovPolynomial:
    if p <= max(2, r):
        raise PrecisionUnavailable(f"need p > max(2, r); got p={p}, r={r}")
    _check_modulus(chi, p, r)
    mu = chi.mu[0]
    if r == 1:
        return PostnikovPolynomial(p, 1, (), mu)
    q = p**r
    pr1 = p ** (r - 1)
    dl = int(chi.table.dlogs[0][(1 + p) % q])
    # 1 + p has order p^(r-1), so its dlog is a multiple of p - 1
    d1 = dl // (p - 1)
    logs = truncated_log_coeffs(p, r)
    log1p = sum(c * p**k for k, c in enumerate(logs, start=1)) % q
    ell1 = log1p // p
    c = mu * d1 * mod_inverse(ell1, pr1) % pr1
    coeffs = tuple(c * a % p ** (r - k) for k, a in enumerate(logs, start=1))
    F = PostnikovPolynomial(p, r, coeffs, mu)
    if check:
        ok, dev = verify_postnikov(F, chi)
        if not ok:
            raise RuntimeError(f"Postnikov construction failed verification (deviation {dev:.3e})")
    return F


def verify_postnikov(F: PostnikovPolynomial, chi: Character, tol: float = 1e-9) -> tuple[bool, float]:
    """Exhaustive check of chi(y + pz) = chi(y) e(F(pwz)/q) over units y and z in [0, p^(r-1))."""
    p, r = F.p, F.r
    _check_modulus(chi, p, r)
    q = p**r
    ys = np.array([y for y in range(1, q) if y % p], dtype=np.int64)
    ws = np.array([pow(int(y), -1, q) for y in ys], dtype=np.int64)
    zs = np.arange(p ** (r - 1), dtype=np.int64)
    lhs = chi.values((ys[:, None] + p * zs[None, :]) % q)
    arg = (p * np.outer(ws, zs)) % q
    phase = F.poly().eval_mod(arg, q)
    rhs = chi.values(ys)[:, None] * np.exp(2j * np.pi * (phase / q))
    dev = float(np.abs(lhs - rhs).max()) if lhs.size else 0.0
    return dev < tol, dev


def prime_power_mixed_sum(p: int, r: int, f: IntegerPolynomial, lam: int, mu: int, u: int, h: int) -> SumReport:
    """sum_{x=u+1}^{u+h} chi^mu(x) e(lam f(x)/p^r) for the generator chi, against h^(1 - 1/4r^2)."""
    q = p**r
    phi = (p - 1) * p ** (r - 1)
    if not (0 <= lam < q and 0 <= mu < phi) or lam + mu == 0:
        raise BadRange(f"need 0 <= lam < {q}, 0 <= mu < {phi}, lam + mu > 0")
    if f.degree < r:
        raise ValueError(f"deg f = {f.degree} < r = {r}")
    if math.gcd(f.leading, p) != 1:
        raise ValueError("leading coefficient of f divisible by p")
    if h < 1:
        raise ValueError("h must be positive")
    table = build_character_table(FactoredModulus.prime_power(p, r))
    chi = table.generator() ** mu
    value = incomplete_mixed_sum(chi, 1, f, lam, u, h)
    m = min(p_adic_order(lam, p), p_adic_order(mu, p))
    flags = []
    if not q >= h >= p**3:
        flags.append("out-of-regime")
    if p <= max(2, r):
        flags.append("p-not-above-r")
    bound = h ** (1 - 1 / (4 * r * r))
    return SumReport(value, bound, {"op": "prime_power_mixed_sum", "p": p, "r": r, "f": list(f.coeffs),
                                    "lam": lam, "mu": mu, "u": u, "h": h,
                                    "m": m if m != math.inf else "inf", "H": h // p}, tuple(flags))
