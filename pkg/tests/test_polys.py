from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mhcount.polys import IntegerPolynomial, RationalExpPolynomial, integer_roots, sign_runs

coeff_lists = st.lists(st.integers(-50, 50), min_size=1, max_size=6)


def test_basic_shape():
    f = IntegerPolynomial([1, 0, 3, 0, 0])
    assert f.coeffs == (1, 0, 3) and f.degree == 2 and f.leading == 3
    assert IntegerPolynomial([0, 0]).degree == -1
    assert IntegerPolynomial.monomial(3)(2) == 8


@given(coeff_lists, coeff_lists, st.integers(-100, 100))
def test_ring_operations(a, b, x):
    f, g = IntegerPolynomial(a), IntegerPolynomial(b)
    assert (f + g)(x) == f(x) + g(x)
    assert (f - g)(x) == f(x) - g(x)
    assert (f * g)(x) == f(x) * g(x)
    assert (f**3)(x) == f(x) ** 3
    assert f.shift(5)(x) == f(x + 5)
    assert f.forward_difference()(x) == f(x + 1) - f(x)


@given(coeff_lists, st.lists(st.integers(-10**12, 10**12), min_size=1, max_size=20), st.integers(3, 10**9))
def test_eval_mod_matches_python_ints(cs, xs, q):
    f = IntegerPolynomial(cs)
    want = [f(x) % q for x in xs]
    assert [int(v) for v in f.eval_mod(np.array(xs, dtype=object), q)] == want
    small = [x for x in xs if abs(x) < 2**31]
    if small:
        assert [int(v) for v in f.eval_mod(np.array(small, dtype=np.int64), q)] == [f(x) % q for x in small]


def test_eval_mod_huge_coefficients():
    f = IntegerPolynomial([10**40 + 7, 3 * 10**33, 1])
    assert int(f.eval_mod(10**25 + 1, 1009)) == f(10**25 + 1) % 1009


@given(coeff_lists, st.integers(-60, 60), st.integers(0, 80))
def test_integer_roots_match_brute_force(cs, lo, width):
    f = IntegerPolynomial(cs)
    hi = lo + width
    want = [x for x in range(lo, hi + 1) if f(x) == 0]
    assert integer_roots(f, lo, hi) == want


@given(st.lists(st.integers(-30, 30), min_size=1, max_size=4), st.integers(-5, 5))
def test_integer_roots_of_products(roots, c):
    f = IntegerPolynomial([c or 1])
    for r in roots:
        f = f * IntegerPolynomial([-r, 1])
    assert integer_roots(f, -40, 40) == sorted(set(roots))


def test_sign_runs_cover_range():
    f = IntegerPolynomial([-6, 11, -6, 1])       # (x-1)(x-2)(x-3)
    runs = sign_runs(f, -2, 6)
    assert runs[0][0] == -2 and runs[-1][1] == 6
    assert all(a[1] + 1 == b[0] for a, b in zip(runs, runs[1:]))
    for s, e, sign in runs:
        assert all((f(x) > 0) - (f(x) < 0) == sign for x in range(s, e + 1))


def test_rational_polynomial():
    G = RationalExpPolynomial.from_fractions(["1/2", 0, Fraction(3, 5), 4])
    assert G.degree == 3 and G.denominator(2) == 5 and G.denominator(1) == 1
    N, D = G.numerator_poly()
    assert D == 10
    for x in range(-5, 6):
        assert Fraction(N(x), D) == G(x)
    with pytest.raises(ValueError):
        RationalExpPolynomial(((2, 4, 1),))
    with pytest.raises(ValueError):
        RationalExpPolynomial(((1, 3, 1), (1, 5, 1)))
