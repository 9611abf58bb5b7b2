"""
High-precision real arithmetic for the reduction pipeline.

Values are midpoint-radius balls: an exact mpmath float plus an absolute
error radius. Every operation rounds its midpoint at the working precision
and widens the radius by the propagated input error and the rounding error,
with radius arithmetic rounded upward. The true real is always inside
[value - radius, value + radius].

Also provides exact root isolation for integer polynomials, certified
continued-fraction expansion and nearest-integer distance.
"""

import logging
import numbers
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import zip_longest
from typing import Callable, Iterator, List, NamedTuple, Optional, Sequence, Tuple, TypeVar, Union

from mpmath import mp, mpf

from .error_handler import NotReached, PrecisionExhausted

logger = logging.getLogger(__name__)

DEFAULT_PRECISION = 1024
MIN_PRECISION = 64
MAX_PRECISION = 1 << 16
GUARD_BITS = 32
BISECTION_BITS = 32

# x^3 - x^2 - 1, constant term first
CHARACTERISTIC_POLY: Tuple[int, ...] = (-1, 0, -1, 1)
# 31x^3 - 3x - 1
BINET_A_MINIMAL_POLY: Tuple[int, ...] = (-1, -3, 0, 31)

_RADIUS_BITS = 64
_ZERO = mpf(0)

Number = Union["PrecisionReal", int, Fraction, float, str]
T = TypeVar("T")


def _abs(x: mpf) -> mpf:
    return mp.fneg(x, exact=True) if x < 0 else x


def _up_add(x: mpf, y: mpf) -> mpf:
    return mp.fadd(x, y, prec=_RADIUS_BITS, rounding="u")


def _up_mul(x: mpf, y: mpf) -> mpf:
    return mp.fmul(x, y, prec=_RADIUS_BITS, rounding="u")


def _up_div(x: mpf, y: mpf) -> mpf:
    return mp.fdiv(x, y, prec=_RADIUS_BITS, rounding="u")


def _ulps(value: mpf, wp: int, shift: int = 0) -> mpf:
    """|value| * 2^(shift - wp), an upper bound for 2^shift half-ulps at wp bits."""
    return mp.ldexp(_abs(value), shift - wp)


def _round_exact(exact_value: mpf, wp: int) -> Tuple[mpf, mpf]:
    """Round an exactly computed mpf to wp bits, returning (rounded, error bound)."""
    rounded = mp.fadd(exact_value, 0, prec=wp)
    if rounded == exact_value:
        return rounded, _ZERO
    return rounded, _ulps(rounded, wp)


def mpf_to_fraction(x: mpf) -> Fraction:
    """Exact rational value of an mpmath float."""
    if not mp.isfinite(x):
        raise ValueError(f"cannot convert {x} to a fraction")
    sign, man, exp, _ = x._mpf_
    man = int(man)
    q = Fraction(man << exp) if exp >= 0 else Fraction(man, 1 << -exp)
    return -q if sign else q


def floor_int(x: mpf) -> int:
    """Exact floor of an mpmath float as a Python int."""
    n = int(x)
    if x < 0 and n != x:
        n -= 1
    return n


def ceil_int(x: mpf) -> int:
    n = int(x)
    if x > 0 and n != x:
        n += 1
    return n


@dataclass(frozen=True)
class PrecisionReal:
    """
    Certified real number: the true value lies within `radius` of `value`.

    Attributes:
        value: Exact binary midpoint.
        precision_bits: Claimed significant bits; operations round at
            precision_bits + GUARD_BITS.
        radius: Absolute error bound (0 for exact values).
    """

    value: mpf
    precision_bits: int
    radius: mpf = _ZERO

    def __post_init__(self):
        if self.precision_bits < 1:
            raise ValueError(f"precision_bits must be positive, got {self.precision_bits}")
        if self.radius < 0:
            raise ValueError("radius must be non-negative")

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def exact(cls, n: int, precision_bits: int = DEFAULT_PRECISION) -> "PrecisionReal":
        return cls(mp.convert(int(n)), precision_bits)

    @classmethod
    def from_fraction(cls, q: Union[Fraction, int, float, str],
                      precision_bits: int = DEFAULT_PRECISION) -> "PrecisionReal":
        q = Fraction(q)
        if q.denominator == 1:
            return cls.exact(q.numerator, precision_bits)
        wp = precision_bits + GUARD_BITS
        v = mp.fdiv(mp.convert(q.numerator), mp.convert(q.denominator), prec=wp)
        return cls(v, precision_bits, _ulps(v, wp))

    @classmethod
    def from_string(cls, text: str, precision_bits: int = DEFAULT_PRECISION) -> "PrecisionReal":
        """Parse a decimal literal such as "2.4" or "1e-12" exactly, then round."""
        return cls.from_fraction(Fraction(text), precision_bits)

    @classmethod
    def from_dyadic(cls, numerator: int, scale_bits: int, precision_bits: int,
                    radius_numerator: int = 0) -> "PrecisionReal":
        """Exact value numerator / 2^scale_bits with radius radius_numerator / 2^scale_bits."""
        value = mp.ldexp(mp.convert(numerator), -scale_bits)
        radius = mp.ldexp(mp.convert(abs(radius_numerator)), -scale_bits)
        return cls(value, precision_bits, radius)

    def coerce(self, other: Number) -> "PrecisionReal":
        """Bring an operand to PrecisionReal at this value's precision."""
        if isinstance(other, PrecisionReal):
            return other
        if isinstance(other, numbers.Integral):
            return PrecisionReal.exact(int(other), self.precision_bits)
        if isinstance(other, (Fraction, float, str)):
            return PrecisionReal.from_fraction(other, self.precision_bits)
        if isinstance(other, mpf):
            return PrecisionReal(other, self.precision_bits)
        return NotImplemented

    @property
    def working_bits(self) -> int:
        return self.precision_bits + GUARD_BITS

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    def _binary_exact(self, other, op):
        other = self.coerce(other)
        if other is NotImplemented:
            return NotImplemented, None, None
        bits = min(self.precision_bits, other.precision_bits)
        v, err = _round_exact(op(self.value, other.value, exact=True), bits + GUARD_BITS)
        return other, bits, (v, err)

    def __add__(self, other: Number) -> "PrecisionReal":
        other, bits, rounded = self._binary_exact(other, mp.fadd)
        if other is NotImplemented:
            return NotImplemented
        v, err = rounded
        return PrecisionReal(v, bits, _up_add(_up_add(self.radius, other.radius), err))

    __radd__ = __add__

    def __sub__(self, other: Number) -> "PrecisionReal":
        other, bits, rounded = self._binary_exact(other, mp.fsub)
        if other is NotImplemented:
            return NotImplemented
        v, err = rounded
        return PrecisionReal(v, bits, _up_add(_up_add(self.radius, other.radius), err))

    def __rsub__(self, other: Number) -> "PrecisionReal":
        return (-self) + other

    def __neg__(self) -> "PrecisionReal":
        return PrecisionReal(mp.fneg(self.value, exact=True), self.precision_bits, self.radius)

    def __abs__(self) -> "PrecisionReal":
        return PrecisionReal(_abs(self.value), self.precision_bits, self.radius)

    def __mul__(self, other: Number) -> "PrecisionReal":
        other, bits, rounded = self._binary_exact(other, mp.fmul)
        if other is NotImplemented:
            return NotImplemented
        v, err = rounded
        r = _up_add(_up_mul(_abs(self.value), other.radius), _up_mul(_abs(other.value), self.radius))
        r = _up_add(r, _up_mul(self.radius, other.radius))
        return PrecisionReal(v, bits, _up_add(r, err))

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "PrecisionReal":
        other = self.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.value == 0 or _abs(other.value) <= other.radius:
            raise PrecisionExhausted("denominator enclosure contains zero")
        bits = min(self.precision_bits, other.precision_bits)
        wp = bits + GUARD_BITS
        v = mp.fdiv(self.value, other.value, prec=wp)
        b = _abs(other.value)
        denominator = mp.fmul(b, mp.fsub(b, other.radius, prec=_RADIUS_BITS, rounding="d"),
                              prec=_RADIUS_BITS, rounding="d")
        numerator = _up_add(_up_mul(_abs(self.value), other.radius), _up_mul(b, self.radius))
        r = _up_add(_up_div(numerator, denominator), _ulps(v, wp))
        return PrecisionReal(v, bits, r)

    def __rtruediv__(self, other: Number) -> "PrecisionReal":
        other = self.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n: int) -> "PrecisionReal":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return 1 / (self ** -n)
        result = PrecisionReal.exact(1, self.precision_bits)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def log(self) -> "PrecisionReal":
        """Natural logarithm; the enclosure must be strictly positive."""
        if self.value <= 0:
            raise ValueError(f"log of non-positive value {self}")
        low = mp.fsub(self.value, self.radius, prec=_RADIUS_BITS, rounding="d")
        if low <= 0:
            raise PrecisionExhausted("log argument enclosure reaches zero")
        wp = self.working_bits
        v = mp.ln(self.value, prec=wp)
        r = _up_div(self.radius, low) if self.radius else _ZERO
        r = _up_add(r, _up_add(_ulps(v, wp, 2), mp.ldexp(mp.mpf(1), -wp)))
        return PrecisionReal(v, self.precision_bits, r)

    def sqrt(self) -> "PrecisionReal":
        if self.value < 0:
            raise ValueError(f"sqrt of negative value {self}")
        wp = self.working_bits
        v = mp.sqrt(self.value, prec=wp)
        r = _ulps(v, wp, 1)
        if self.radius:
            low = mp.fsub(self.value, self.radius, prec=_RADIUS_BITS, rounding="d")
            if low <= 0:
                raise PrecisionExhausted("sqrt argument enclosure reaches zero")
            r = _up_add(r, _up_div(self.radius, mp.sqrt(low, prec=_RADIUS_BITS, rounding="d")))
        return PrecisionReal(v, self.precision_bits, r)

    # ------------------------------------------------------------------
    # Enclosure queries
    # ------------------------------------------------------------------

    @property
    def lower(self) -> mpf:
        return mp.fsub(self.value, self.radius, prec=self.working_bits, rounding="f")

    @property
    def upper(self) -> mpf:
        return mp.fadd(self.value, self.radius, prec=self.working_bits, rounding="c")

    def enclosure(self) -> Tuple[Fraction, Fraction]:
        """Exact rational endpoints [lo, hi] containing the true value."""
        return mpf_to_fraction(self.lower), mpf_to_fraction(self.upper)

    def is_positive(self) -> bool:
        return self.lower > 0

    def is_negative(self) -> bool:
        return self.upper < 0

    def contains(self, x: Union[int, Fraction, mpf]) -> bool:
        lo, hi = self.enclosure()
        if isinstance(x, mpf):
            x = mpf_to_fraction(x)
        return lo <= Fraction(x) <= hi

    def floor_lower(self) -> int:
        """floor of the lower endpoint (a certified lower bound for floor(x))."""
        return floor_int(self.lower)

    def ceil_upper(self) -> int:
        return ceil_int(self.upper)

    def agrees_with(self, other: "PrecisionReal", bits: int) -> bool:
        """True if the midpoints agree to `bits` significant bits."""
        scale = max(_abs(self.value), _abs(other.value))
        if scale == 0:
            return True
        diff = _abs(mp.fsub(self.value, other.value, exact=True))
        return diff <= mp.ldexp(scale, -bits)

    def __float__(self) -> float:
        return float(self.value)

    def __str__(self) -> str:
        return mp.nstr(self.value, 20)

    def __repr__(self) -> str:
        return (f"PrecisionReal({mp.nstr(self.value, 20)}, bits={self.precision_bits}, "
                f"radius={mp.nstr(self.radius, 5)})")


def with_precision_escalation(fn: Callable[[int], T], precision_bits: int,
                              max_bits: int = MAX_PRECISION) -> T:
    """Call fn(bits), doubling bits on PrecisionExhausted until max_bits."""
    bits = precision_bits
    while True:
        try:
            return fn(bits)
        except PrecisionExhausted as exc:
            if bits * 2 > max_bits:
                raise
            logger.warning(f"{exc}; retrying at {bits * 2} bits")
            bits *= 2


# ----------------------------------------------------------------------
# Root isolation
# ----------------------------------------------------------------------

def _sign_at(poly: Sequence[int], numerator: int, scale_bits: int) -> int:
    """Exact sign of poly(numerator / 2^scale_bits)."""
    degree = len(poly) - 1
    acc = poly[degree]
    for i in range(degree - 1, -1, -1):
        acc = acc * numerator + (poly[i] << (scale_bits * (degree - i)))
    return (acc > 0) - (acc < 0)


def _eval_fraction(poly: Sequence[int], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(poly):
        acc = acc * x + c
    return acc


def _derivative(poly: Sequence[int]) -> Tuple[int, ...]:
    return tuple(i * c for i, c in enumerate(poly))[1:]


@dataclass(frozen=True)
class RootBracket:
    """
    Dyadic bracket [lo, hi] around a simple real root of an integer polynomial.

    Endpoints are lo_numerator / 2^scale_bits and hi_numerator / 2^scale_bits.
    `poly` is stored oriented so that poly(lo) < 0 < poly(hi).
    """

    lo_numerator: int
    hi_numerator: int
    scale_bits: int
    poly: Tuple[int, ...]
    precision_bits: int

    @property
    def lo(self) -> PrecisionReal:
        return PrecisionReal.from_dyadic(self.lo_numerator, self.scale_bits, self.precision_bits)

    @property
    def hi(self) -> PrecisionReal:
        return PrecisionReal.from_dyadic(self.hi_numerator, self.scale_bits, self.precision_bits)

    @property
    def width(self) -> Fraction:
        return Fraction(self.hi_numerator - self.lo_numerator, 1 << self.scale_bits)

    def midpoint(self) -> PrecisionReal:
        """Ball centred on the bracket midpoint with radius half the width."""
        return PrecisionReal.from_dyadic(
            self.lo_numerator + self.hi_numerator,
            self.scale_bits + 1,
            self.precision_bits,
            radius_numerator=self.hi_numerator - self.lo_numerator,
        )

    def is_certified(self) -> bool:
        return (_sign_at(self.poly, self.lo_numerator, self.scale_bits) < 0
                < _sign_at(self.poly, self.hi_numerator, self.scale_bits))


def isolate_real_root(poly: Sequence[int], lo: int, hi: int, precision_bits: int) -> RootBracket:
    """
    Isolate the root of poly in the integer interval [lo, hi].

    Bisection to BISECTION_BITS, Newton steps in exact dyadic arithmetic with
    doubling precision, then an exact sign-change check on the final bracket.

    Args:
        poly: Integer coefficients, constant term first
        lo: Integer left end, poly(lo) != 0
        hi: Integer right end, poly(hi) has the opposite sign
        precision_bits: Bracket width will be below 2^(-precision_bits + 4)

    Returns:
        Certified RootBracket
    """
    if precision_bits < MIN_PRECISION:
        raise ValueError(f"precision_bits must be at least {MIN_PRECISION}, got {precision_bits}")
    if lo >= hi:
        raise ValueError("empty interval")
    poly = tuple(int(c) for c in poly)
    s_lo, s_hi = _sign_at(poly, lo, 0), _sign_at(poly, hi, 0)
    if s_lo == 0 or s_hi == 0 or s_lo == s_hi:
        raise ValueError(f"no certified sign change of {poly} on [{lo}, {hi}]")
    if s_lo > 0:
        poly = tuple(-c for c in poly)

    target = precision_bits + 2
    lo_n, hi_n, scale = lo, hi, 0
    while scale < BISECTION_BITS:
        lo_n, hi_n, scale = 2 * lo_n, 2 * hi_n, scale + 1
        mid = (lo_n + hi_n) // 2
        s = _sign_at(poly, mid, scale)
        if s == 0:
            centre = mid << (target - scale)
            return RootBracket(centre - 1, centre + 1, target, poly, precision_bits)
        if s < 0:
            lo_n = mid
        else:
            hi_n = mid

    dpoly = _derivative(poly)
    x = Fraction(lo_n + hi_n, 1 << (scale + 1))
    bits = scale
    while bits < target:
        bits = min(2 * bits, target)
        x = x - _eval_fraction(poly, x) / _eval_fraction(dpoly, x)
        x = Fraction(round(x * (1 << bits)), 1 << bits)

    centre = round(x * (1 << target))
    for t in range(5):
        bracket = RootBracket(centre - (1 << t), centre + (1 << t), target, poly, precision_bits)
        if bracket.is_certified():
            return bracket

    logger.warning("Newton bracket failed certification; bisecting to full precision")
    while scale < target:
        lo_n, hi_n, scale = 2 * lo_n, 2 * hi_n, scale + 1
        mid = (lo_n + hi_n) // 2
        if _sign_at(poly, mid, scale) < 0:
            lo_n = mid
        else:
            hi_n = mid
    return RootBracket(lo_n, hi_n, scale, poly, precision_bits)


@lru_cache(maxsize=32)
def real_root_alpha(precision_bits: int = DEFAULT_PRECISION) -> RootBracket:
    """Bracket of the real root of x^3 - x^2 - 1 (about 1.46557)."""
    return isolate_real_root(CHARACTERISTIC_POLY, 1, 2, precision_bits)


def alpha(precision_bits: int = DEFAULT_PRECISION) -> PrecisionReal:
    return real_root_alpha(precision_bits).midpoint()


@lru_cache(maxsize=32)
def log_alpha(precision_bits: int = DEFAULT_PRECISION) -> PrecisionReal:
    return alpha(precision_bits).log()


@lru_cache(maxsize=32)
def binet_coefficient_a(precision_bits: int = DEFAULT_PRECISION) -> PrecisionReal:
    """a = alpha^2 / (alpha^3 + 2), the coefficient of alpha^n in the closed form."""
    if precision_bits < MIN_PRECISION:
        raise ValueError(f"precision_bits must be at least {MIN_PRECISION}, got {precision_bits}")
    x = alpha(precision_bits)
    return x ** 2 / (x ** 3 + 2)


def eval_poly(poly: Sequence[int], x: PrecisionReal) -> PrecisionReal:
    """Horner evaluation of an integer polynomial on a ball."""
    acc = x.coerce(poly[-1])
    for c in reversed(poly[:-1]):
        acc = acc * x + c
    return acc


# ----------------------------------------------------------------------
# Continued fractions
# ----------------------------------------------------------------------

class Convergent(NamedTuple):
    p: int
    q: int


@dataclass(frozen=True)
class ContinuedFraction:
    """
    Certified partial quotients and their convergents.

    Attributes:
        partial_quotients: a_0, a_1, ...
        convergents: (p_i, q_i) for each partial quotient
        exhausted: precision ran out before the requested number of terms
        terminated: the input was rational and expanded completely
    """

    partial_quotients: Tuple[int, ...]
    convergents: Tuple[Convergent, ...]
    exhausted: bool = False
    terminated: bool = False

    def __len__(self) -> int:
        return len(self.partial_quotients)

    def determinant_holds(self) -> bool:
        """p_i q_{i-1} - p_{i-1} q_i == (-1)^(i-1) for every i >= 1."""
        for i in range(1, len(self.convergents)):
            p, q = self.convergents[i]
            pp, qq = self.convergents[i - 1]
            if p * qq - pp * q != (-1) ** (i - 1):
                return False
        return True

    def __str__(self) -> str:
        if not self.partial_quotients:
            return "[]"
        head, *tail = self.partial_quotients
        return f"[{head}; {', '.join(str(a) for a in tail)}]"


def _euclid(q: Fraction) -> Iterator[int]:
    num, den = q.numerator, q.denominator
    while den:
        a, r = divmod(num, den)
        yield a
        num, den = den, r


def _convergents(quotients: Sequence[int]) -> Tuple[Convergent, ...]:
    result: List[Convergent] = []
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    for a in quotients:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        result.append(Convergent(p, q))
    return tuple(result)


def _certified_quotients(lo: Fraction, hi: Fraction, max_terms: int) -> List[int]:
    # A term is certified when both endpoint expansions agree on it and both
    # continue past it, so every real in [lo, hi] shares it.
    certified: List[int] = []
    for a, b in zip_longest(_euclid(lo), _euclid(hi)):
        if a is None or b is None:
            if certified:
                certified.pop()
            break
        if len(certified) == max_terms or a != b:
            break
        certified.append(a)
    return certified


def cf_expand(x: Union[PrecisionReal, Fraction, int], max_terms: int,
              strict: bool = True) -> ContinuedFraction:
    """
    Continued-fraction expansion with certified terms only.

    Args:
        x: Positive ball, or an exact rational
        max_terms: Number of partial quotients wanted
        strict: Raise PrecisionExhausted when fewer terms could be certified;
            otherwise return the short expansion flagged `exhausted`

    Returns:
        ContinuedFraction
    """
    if max_terms < 1:
        raise ValueError("max_terms must be positive")

    if isinstance(x, (Fraction, int)):
        q = Fraction(x)
        if q <= 0:
            raise ValueError(f"cf_expand requires a positive input, got {q}")
        quotients = []
        for a in _euclid(q):
            if len(quotients) == max_terms:
                break
            quotients.append(a)
        terminated = _convergents(quotients)[-1] == (q.numerator, q.denominator)
        return ContinuedFraction(tuple(quotients), _convergents(quotients), terminated=terminated)

    if not x.is_positive():
        raise ValueError(f"cf_expand requires a certified positive input, got {x!r}")
    lo, hi = x.enclosure()
    if lo == hi:
        return cf_expand(lo, max_terms)

    quotients = _certified_quotients(lo, hi, max_terms)
    exhausted = len(quotients) < max_terms
    if exhausted:
        message = (f"only {len(quotients)} of {max_terms} partial quotients certified "
                   f"at {x.precision_bits} bits")
        if strict:
            raise PrecisionExhausted(message, certified_terms=len(quotients),
                                     partial=tuple(quotients))
        logger.debug(message)
    return ContinuedFraction(tuple(quotients), _convergents(quotients), exhausted=exhausted)


def convergent_exceeding(cf: ContinuedFraction, threshold: int) -> Tuple[int, Convergent]:
    """
    First convergent with q > threshold and its number.

    Convergents are numbered from 1, so number i is cf.convergents[i - 1]
    and the convergent of a_0 is number 1.
    """
    for i, conv in enumerate(cf.convergents, start=1):
        if conv.q > threshold:
            return i, conv
    raise NotReached(f"no convergent among {len(cf)} has q > {threshold}")


def nearest_int_distance(x: Union[PrecisionReal, Fraction, int]) -> PrecisionReal:
    """Distance from x to the nearest integer, in [0, 1/2]."""
    if not isinstance(x, PrecisionReal):
        x = PrecisionReal.from_fraction(Fraction(x))
    n = floor_int(x.value)
    frac, err = _round_exact(mp.fsub(x.value, mp.convert(n), exact=True), x.working_bits)
    complement = mp.fsub(1, frac, prec=x.working_bits)
    if complement < frac:
        frac = complement
        err = _up_add(err, _ulps(complement, x.working_bits))
    return PrecisionReal(frac, x.precision_bits, _up_add(x.radius, err))
