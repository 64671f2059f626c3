"""Phase evaluation and reproducible complex summation."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

TWO_PI = 2.0 * math.pi
BLOCK = 1 << 15

# int64 products below this stay exact
INT64_SAFE = 1 << 62


def e_frac(num, den: int):
    """e(num/den) = exp(2 pi i num/den), reducing num mod den exactly first.

    ``num`` may be a Python int, an int64 array or an object array of ints.
    """
    if isinstance(num, (int, np.integer)):
        return complex(np.exp(1j * TWO_PI * ((int(num) % den) / den)))
    num = np.asarray(num)
    if num.dtype == object:
        frac = np.array([(int(v) % den) / den for v in num.ravel()], dtype=float).reshape(num.shape)
    else:
        frac = np.mod(num, den) / den
    return np.exp(1j * TWO_PI * frac)


def fsum_complex(values) -> complex:
    arr = np.asarray(values, dtype=complex).ravel()
    return complex(math.fsum(arr.real.tolist()), math.fsum(arr.imag.tolist()))


def blocked_sum(terms: Callable[[int, int], np.ndarray], start: int, stop: int,
                workers: int = 1, block: int = BLOCK) -> complex:
    """Sum ``terms(lo, hi)`` over [start, stop) in fixed-size blocks.

    Each block is summed with ``math.fsum`` (correctly rounded) and the block
    partials are combined the same way, in block order. The partition depends
    only on ``block``, so the result is bit-identical for any worker count.
    """
    bounds = [(lo, min(lo + block, stop)) for lo in range(start, stop, block)]
    if not bounds:
        return 0j

    def part(b):
        return fsum_complex(terms(*b))

    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            partials = list(ex.map(part, bounds))
    else:
        partials = [part(b) for b in bounds]
    return complex(math.fsum(z.real for z in partials), math.fsum(z.imag for z in partials))
