"""Exact point counts and character-sum tools for Markoff-Hurwitz and Dwork type hypersurfaces."""
from .arith import FactoredModulus, PrimeMode, euler_phi, is_prime, mod_inverse, select_primes
from .chars import Character, CharacterTable, build_character_table
from .counting import (Box, CountMethod, HypersurfaceSpec, count_congruence, count_points, fourth_moment,
                       reconstruct_T, select_modulus)
from .expsums import SumReport, gauss_sum, incomplete_mixed_sum, ramanujan_sum
from .polys import IntegerPolynomial, RationalExpPolynomial
from .postnikov import build_postnikov, verify_postnikov

__version__ = "0.1.0"
