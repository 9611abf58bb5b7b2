"""
Utility functions for naraforge.
"""

import math
from fractions import Fraction
from typing import Any, Union

from mpmath import mp, mpf


def format_sci(x: Union[mpf, float, int, Fraction, Any], digits: int = 4) -> str:
    """Scientific notation with `digits` significant digits, e.g. 4.212e+47.

    Accepts mpmath floats, Python numbers and PrecisionReal (through its midpoint).
    """
    if hasattr(x, "value") and hasattr(x, "radius"):
        x = x.value
    if isinstance(x, Fraction):
        x = mp.fdiv(x.numerator, x.denominator, prec=64)
    if isinstance(x, int) and abs(x) < 10 ** 15:
        return str(x)
    value = float(x)
    if value == 0 or not math.isfinite(value):
        return str(value)
    return f"{value:.{digits - 1}e}"


def format_int(n: int) -> str:
    """Plain decimal for small integers, a short scientific form for huge ones."""
    if abs(n) < 10 ** 15:
        return str(n)
    text = str(abs(n))
    sign = "-" if n < 0 else ""
    return f"{sign}{text[0]}.{text[1:4]}e+{len(text) - 1}"


def parse_big_int(text: str) -> int:
    """Parse "2e51", "2*10**51" or a plain decimal into an exact integer."""
    cleaned = text.strip().replace("_", "")
    if "**" in cleaned:
        factor, _, power = cleaned.partition("*")
        base, _, exponent = power.lstrip("*").partition("**")
        return int(factor) * int(base) ** int(exponent)
    value = Fraction(cleaned)
    if value.denominator != 1:
        raise ValueError(f"not an integer: {text}")
    return value.numerator
