"""Small helpers for mixing exact rationals and floats."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Union

Number = Union[Fraction, float]


def exact(value) -> Fraction:
    """Coerce ``value`` to a Fraction.

    Strings are parsed as rationals ("3/4", "0.25"); floats go through their
    shortest decimal repr so that ``0.1`` becomes ``1/10``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    # numpy scalars and the like
    return exact(float(value))


def qstr(value) -> str:
    """Render a rational as ``"a/b"`` (or ``"a"``); floats as repr."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def le(a, b, tol: float = 0.0) -> bool:
    """``a <= b``, with slack ``tol`` when either side is a float."""
    if tol and (isinstance(a, float) or isinstance(b, float)):
        return a <= b + tol
    return a <= b


def is_zero(a, tol: float = 0.0) -> bool:
    if tol and isinstance(a, float):
        return abs(a) <= tol
    return a == 0
