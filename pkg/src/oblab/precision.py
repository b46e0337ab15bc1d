"""Working precision for the mpmath-backed geometry.

The default is 50 significant decimal digits.  The OBLAB_DIGITS environment
variable overrides it at import time; `set_digits` and `digits_context`
change it at run time.
"""
from __future__ import annotations

import os
from contextlib import contextmanager

import mpmath
from mpmath import mp, mpf

DEFAULT_DIGITS = 50


def _initial_digits() -> int:
    raw = os.environ.get("OBLAB_DIGITS")
    if raw is None:
        return DEFAULT_DIGITS
    value = int(raw)
    if value < 15:
        raise ValueError("OBLAB_DIGITS must be at least 15")
    return value


mp.dps = _initial_digits()


def digits() -> int:
    return mp.dps


def set_digits(d: int) -> None:
    if d < 15:
        raise ValueError("precision below 15 digits is not supported")
    mp.dps = d


@contextmanager
def digits_context(d: int):
    """Temporarily run at `d` digits."""
    old = mp.dps
    set_digits(d)
    try:
        yield
    finally:
        mp.dps = old


def eps() -> mpf:
    """Comparison tolerance 10^-(d-10) at the current precision."""
    return mpf(10) ** (-(mp.dps - 10))


def to_scalar(value) -> mpf:
    """Coerce ints, floats, decimal strings, fractions and mpf values."""
    if isinstance(value, mpf):
        return value
    if hasattr(value, "numerator") and hasattr(value, "denominator") and not isinstance(value, float):
        return mpf(value.numerator) / value.denominator
    return mpf(value)


def close(a, b, tol=None) -> bool:
    tol = eps() if tol is None else tol
    return abs(to_scalar(a) - to_scalar(b)) <= tol


def fmt(value, places: int | None = None) -> str:
    """Decimal string at the working precision (or `places` significant digits)."""
    n = mp.dps if places is None else places
    return mpmath.nstr(to_scalar(value), n, strip_zeros=False, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)


def exact_str(value) -> str:
    """Decimal string with enough digits to read back to the same mpf."""
    n = int(mp.prec * 0.30103) + 2
    return mpmath.nstr(to_scalar(value), n, strip_zeros=True, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)


pi = mpmath.pi
sin = mpmath.sin
cos = mpmath.cos
cot = mpmath.cot
sqrt = mpmath.sqrt
log = mpmath.log
