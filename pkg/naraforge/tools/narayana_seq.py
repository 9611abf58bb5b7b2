"""
Narayana's cows sequence N_n = N_{n-1} + N_{n-3}, N_0 = 0, N_1 = N_2 = N_3 = 1.

Exact values over all integer indices (negative ones through the backward
recurrence N_{n-3} = N_n - N_{n-1}), plus certified checks of the growth
estimates used by the bound chain.
"""

import logging
import threading
from typing import Dict, List, Optional

from .error_handler import IndexOutOfRange, PrecisionExhausted
from .hp_arith import DEFAULT_PRECISION, PrecisionReal, alpha, binet_coefficient_a

logger = logging.getLogger(__name__)

DEFAULT_MAX_INDEX = 10 ** 6
INITIAL_TERMS = (0, 1, 1, 1)


class SequenceCache:
    """
    Incrementally extended table of N_n for a contiguous window of indices.

    A single writer extends the window under a lock; reads of indices that
    are already materialized need no lock.
    """

    def __init__(self, max_index: int = DEFAULT_MAX_INDEX):
        if max_index < 3:
            raise ValueError("max_index must be at least 3")
        self.max_index = max_index
        self.values: Dict[int, int] = {0: 0, 1: 1, 2: 1}
        self._low = 0
        self._high = 2
        self._lock = threading.Lock()

    def _check(self, n: int) -> None:
        if abs(n) > self.max_index:
            raise IndexOutOfRange(f"index {n} outside [-{self.max_index}, {self.max_index}]")

    def _extend_to(self, n: int) -> None:
        with self._lock:
            values = self.values
            while self._high < n:
                h = self._high
                values[h + 1] = values[h] + values[h - 2]
                self._high = h + 1
            while self._low > n:
                lo = self._low
                values[lo - 1] = values[lo + 2] - values[lo + 1]
                self._low = lo - 1

    def value(self, n: int) -> int:
        self._check(n)
        if not self._low <= n <= self._high:
            self._extend_to(n)
        return self.values[n]

    def range(self, start: int, stop: int) -> List[int]:
        """Values N_start .. N_stop inclusive."""
        if start > stop:
            raise ValueError(f"empty range: {start} > {stop}")
        self._check(start)
        self._check(stop)
        self._extend_to(stop)
        self._extend_to(start)
        return [self.values[i] for i in range(start, stop + 1)]

    def check_recurrence(self) -> bool:
        """N_n == N_{n-1} + N_{n-3} across the whole materialized window."""
        values = self.values
        return all(values[n] == values[n - 1] + values[n - 3]
                   for n in range(self._low + 3, self._high + 1))

    @property
    def window(self) -> range:
        return range(self._low, self._high + 1)


_default_cache = SequenceCache()


def narayana(n: int, cache: Optional[SequenceCache] = None) -> int:
    """Exact N_n for any signed index within the cache limit."""
    return (cache or _default_cache).value(n)


def narayana_range(start: int, stop: int, cache: Optional[SequenceCache] = None) -> List[int]:
    """Exact N_start .. N_stop inclusive, in index order."""
    return (cache or _default_cache).range(start, stop)


def narayana_stateless(n: int) -> int:
    """Recompute N_n from the initial terms without touching any cache."""
    if abs(n) > DEFAULT_MAX_INDEX:
        raise IndexOutOfRange(f"index {n} outside [-{DEFAULT_MAX_INDEX}, {DEFAULT_MAX_INDEX}]")
    a, b, c = 0, 1, 1  # N_0, N_1, N_2
    if n >= 0:
        for _ in range(n):
            a, b, c = b, c, c + a
        return a
    for _ in range(-n):
        a, b, c = c - b, a, b
    return a


def binet_residual(n: int, precision_bits: int = DEFAULT_PRECISION) -> PrecisionReal:
    """
    Upper bound for |N_n - a * alpha^n|.

    The returned ball is exact (radius 0) and sits at the upper endpoint of
    the certified enclosure of the residual.

    Raises:
        PrecisionExhausted: if the enclosure is too wide to be useful next to
            alpha^(-n/2)
    """
    if n <= 1:
        raise ValueError(f"residual bound is stated for n > 1, got {n}")
    x = alpha(precision_bits)
    residual = abs(narayana(n) - binet_coefficient_a(precision_bits) * x ** n)
    root = (x ** n).sqrt()
    if residual.radius * root.upper * 256 > 1:
        raise PrecisionExhausted(
            f"residual enclosure at n={n} is too wide for {precision_bits} bits")
    return PrecisionReal(residual.upper, precision_bits)


def residual_bound_holds(n: int, precision_bits: int = DEFAULT_PRECISION) -> bool:
    """Certified check of |N_n - a alpha^n| < alpha^(-n/2)."""
    x = alpha(precision_bits)
    residual = binet_residual(n, precision_bits)
    # residual < alpha^(-n/2)  <=>  residual^2 * alpha^n < 1
    return (residual ** 2 * x ** n).upper < 1


def growth_bracket_holds(n: int, lower_shift: int = 3,
                         precision_bits: int = 256) -> bool:
    """
    Certified check of alpha^(n - lower_shift) <= N_n <= alpha^(n - 1).

    With lower_shift = 3 this holds for every n >= 1; the sharper
    lower_shift = 2 fails from n = 3 on since N_n / alpha^n tends to
    a < alpha^(-2).
    """
    if n < 1:
        raise ValueError(f"growth bracket is stated for n >= 1, got {n}")
    x = alpha(precision_bits)
    value = narayana(n)
    low = x ** (n - lower_shift)
    high = x ** (n - 1)
    return low.upper <= value and value <= high.lower
