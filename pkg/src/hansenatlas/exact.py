"""Exact rational scalars and the binomial conventions used by the series engines.

All coefficients in this package are arbitrary-precision rationals kept in
lowest terms with a positive denominator.  The scalar type is gmpy2.mpq when
available (much faster), with fractions.Fraction as a drop-in fallback; both
normalize on construction and raise on division by zero.
"""
from __future__ import annotations

import math
from typing import Union

try:
    from gmpy2 import mpq as _mpq

    RATIONAL_BACKEND = "gmpy2"
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as _mpq

    RATIONAL_BACKEND = "fractions"

Rational = _mpq
RationalLike = Union[int, Rational]

ZERO = _mpq(0)
ONE = _mpq(1)


def rational(num: Union[int, str, float, Rational] = 0, den: int = 1) -> Rational:
    """Exact rational num/den in lowest terms; accepts "p/q" strings and floats (dyadic, exact)."""
    if den == 1:
        return _mpq(num)
    return _mpq(num, den)


def rational_str(x: RationalLike) -> str:
    """Canonical "num/den" text (plain integer when den == 1)."""
    q = _mpq(x)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def binomial_general(top: int, p: int) -> int:
    """Binomial coefficient C(top, p) for integer top of either sign.

    For top >= 0 this is the standard coefficient (zero when p > top).
    For top < 0 the signed convention C(-u, p) = (-1)^p C(u+p-1, p) applies.
    """
    if p < 0:
        raise ValueError(f"lower binomial index must be non-negative, got {p}")
    if top >= 0:
        return math.comb(top, p)
    c = math.comb(-top + p - 1, p)
    return -c if p & 1 else c


def binomial_rational(top: RationalLike, p: int) -> Rational:
    """C(top, p) = top (top-1) ... (top-p+1) / p! for rational top."""
    if p < 0:
        raise ValueError(f"lower binomial index must be non-negative, got {p}")
    num = ONE
    t = _mpq(top)
    for i in range(p):
        num *= t - i
    return num / math.factorial(p)


def pochhammer(x: RationalLike, s: int) -> Rational:
    """Rising factorial x (x+1) ... (x+s-1)."""
    if s < 0:
        raise ValueError(f"pochhammer length must be non-negative, got {s}")
    out = ONE
    q = _mpq(x)
    for i in range(s):
        out *= q + i
    return out
