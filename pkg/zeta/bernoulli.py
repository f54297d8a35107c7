"""
Bernoulli numbers B_2, B_4, ..., B_60 as exact rationals
"""
import math
from fractions import Fraction
from typing import Tuple

import mpmath

MAX_TERMS = 30


def _table() -> Tuple[Fraction, ...]:
    return tuple(Fraction(int(p), int(q)) for p, q in (mpmath.bernfrac(2 * j) for j in range(1, MAX_TERMS + 1)))


BERNOULLI_EVEN = _table()

# B_2j / (2j)! rendered to double, index j-1
EM_COEFFICIENTS = tuple(float(b / math.factorial(2 * j)) for j, b in enumerate(BERNOULLI_EVEN, start=1))
