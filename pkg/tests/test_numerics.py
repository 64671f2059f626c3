import cmath
import math

import numpy as np
from hypothesis import given, strategies as st

from mhcount.numerics import blocked_sum, e_frac, fsum_complex


@given(st.integers(-10**30, 10**30), st.integers(1, 10**6))
def test_e_frac_reduces_exactly(num, den):
    want = cmath.exp(2j * math.pi * ((num % den) / den))
    assert abs(e_frac(num, den) - want) < 1e-12


def test_e_frac_array_forms_agree():
    nums = [0, 1, -1, 10**20 + 3, -(10**25)]
    obj = e_frac(np.array(nums, dtype=object), 97)
    scal = [e_frac(n, 97) for n in nums]
    assert np.allclose(obj, scal, atol=1e-15)
    small = e_frac(np.array([3, -5, 200], dtype=np.int64), 97)
    assert np.allclose(small, [e_frac(n, 97) for n in (3, -5, 200)], atol=1e-15)


def test_fsum_complex_is_exact_on_cancellation():
    vals = [1e16, 1.0, -1e16, 1j * 1e16, 1j, -1j * 1e16]
    assert fsum_complex(vals) == 1 + 1j


def _roots(q):
    def terms(lo, hi):
        x = np.arange(lo, hi)
        return np.exp(2j * np.pi * ((x * x % q) / q))
    return terms


@given(st.integers(0, 5000), st.integers(0, 5000), st.sampled_from([1, 2, 4]))
def test_blocked_sum_independent_of_workers(a, n, workers):
    terms = _roots(1009)
    one = blocked_sum(terms, a, a + n, workers=1, block=64)
    many = blocked_sum(terms, a, a + n, workers=workers, block=64)
    assert one == many        # bit-identical


@given(st.integers(1, 3000))
def test_blocked_sum_reverse_order(n):
    terms = _roots(1009)
    fwd = blocked_sum(terms, 0, n, block=128)
    rev = fsum_complex(terms(0, n)[::-1])
    assert abs(fwd - rev) < 1e-9


def test_blocked_sum_empty():
    assert blocked_sum(_roots(7), 5, 5) == 0
