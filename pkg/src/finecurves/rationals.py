"""Exact rational scalars used by every geometric predicate.

All geometry in this package is computed over Q, never floats: the
predicates downstream (shared-interval detection, bigon emptiness,
tangency classification) are exactly the ones that break under rounding.
gmpy2.mpq is used as the scalar because denominator growth under
piecewise-linear maps is substantial and Fraction is too slow for the
corpus sizes we run.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

import gmpy2
from gmpy2 import mpq

QLike = Union[int, str, Fraction, "mpq"]


def Q(value: QLike, den: int | None = None) -> mpq:
    """Coerce a value to an exact rational.

    Accepts ints, "p/q" strings, Fractions and mpq values. A second
    argument gives an explicit denominator: Q(3, 4) == 3/4.
    """
    if den is not None:
        return mpq(value, den)
    if isinstance(value, str):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    return mpq(value)


ZERO = mpq(0)
ONE = mpq(1)


def q_str(x: mpq) -> str:
    """Render a rational as canonical "p/q" (or "p" for integers)."""
    x = mpq(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def q_sign(x) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def rational_sqrt_lower(x: mpq) -> mpq:
    """A positive rational r with r*r <= x, within a factor 2 of sqrt(x).

    Used to turn exact squared clearances into usable offset radii.
    Requires x > 0.
    """
    if x <= 0:
        raise ValueError("rational_sqrt_lower requires a positive value")
    num, den = x.numerator, x.denominator
    # Scale so the integer sqrt has enough precision.
    scale = 1 << 64
    val = (num * scale * scale) // den
    root = gmpy2.isqrt(val)
    if root == 0:
        root = 1
    r = mpq(root, scale)
    # isqrt floors, so r*r <= x holds except when val underflowed to 0.
    while r * r > x:
        r = r / 2
    return r
