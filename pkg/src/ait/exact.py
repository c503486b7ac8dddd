"""Exact rational helpers: powers of two, integer log bounds, renderings."""

from __future__ import annotations

import math
from fractions import Fraction

NEG_INF = float("-inf")
LOG2_DIGITS = 9


def pow2(e: int) -> Fraction:
    return Fraction(1 << e) if e >= 0 else Fraction(1, 1 << -e)


def log2_floor(q: Fraction) -> int:
    """Largest integer n with 2**n <= q (q > 0)."""
    if q <= 0:
        raise ValueError("log2 of a non-positive number")
    n = q.numerator.bit_length() - q.denominator.bit_length()
    if pow2(n) > q:
        n -= 1
    elif pow2(n + 1) <= q:
        n += 1
    return n


def log2_ceil(q: Fraction) -> int:
    """Smallest integer n with q <= 2**n (q > 0)."""
    n = log2_floor(q)
    return n if pow2(n) == q else n + 1


def log2(q: Fraction | int) -> float:
    """Floating log2 for display only; ``-inf`` for zero."""
    q = Fraction(q)
    if q == 0:
        return NEG_INF
    return math.log2(q.numerator) - math.log2(q.denominator)


def render_log2(q: Fraction | int) -> str:
    v = log2(q)
    if v == NEG_INF:
        return "-inf"
    return f"{v:.{LOG2_DIGITS}f}"


def frac_str(q: Fraction | int) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def frac_json(q: Fraction | int) -> dict:
    q = Fraction(q)
    return {"num": q.numerator, "den": q.denominator, "log2": render_log2(q) if q >= 0 else None}
