"""Helpers for the two arithmetic modes: exact rationals and floats.

A computation is *exact* when every input number is an ``int`` or a
``Fraction``; Python arithmetic then keeps everything rational. Any float
in the inputs switches the computation to float mode, where comparisons
use an absolute tolerance.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational, Real
from typing import Iterable

FLOAT_TOL = 1e-12


def is_exact(x) -> bool:
    tp = type(x)
    if tp is int or tp is Fraction:
        return True
    if tp is float:
        return False
    return isinstance(x, Rational) and not isinstance(x, bool)


def all_exact(xs: Iterable) -> bool:
    return all(is_exact(x) for x in xs)


def check_real(x, what: str = "value"):
    tp = type(x)
    if tp is int or tp is Fraction:
        return x
    if tp is float:
        if not math.isfinite(x):
            raise ValueError(f"{what} must be finite, got {x!r}")
        return x
    if isinstance(x, bool) or not isinstance(x, Real):
        raise TypeError(f"{what} must be a real number, got {x!r}")
    if not is_exact(x) and not math.isfinite(x):
        raise ValueError(f"{what} must be finite, got {x!r}")
    return x


def tol_for(*xs) -> float:
    return 0 if all_exact(xs) else FLOAT_TOL


def leq(a, b) -> bool:
    """``a <= b`` exactly in rational mode, up to FLOAT_TOL otherwise."""
    return a <= b + tol_for(a, b)


def close(a, b) -> bool:
    if is_exact(a) and is_exact(b):
        return a == b
    return abs(a - b) <= FLOAT_TOL


def to_fraction(x) -> Fraction:
    """Convert to a Fraction using the decimal reading of floats (0.1 -> 1/10)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {x!r} to a rational")


def normalize(x):
    """Collapse integral Fractions to int so printing and JSON stay tidy."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def fmt(x, exact: bool = False) -> str:
    """Render a number: ``p/q`` for exact output, 15 significant digits otherwise."""
    if exact:
        return str(normalize(to_fraction(x)))
    return format(float(x), ".15g")
