"""
Base-rho digits, three-block decompositions and the exhaustive search.

A value is a concatenation of three repdigits when its digit string splits
into three non-empty constant blocks d1^ell d2^m d3^k (most significant
first), in which case

    (rho - 1) * value = d1 rho^(ell+m+k) - (d1-d2) rho^(m+k) - (d2-d3) rho^k - d3.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import groupby
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .error_handler import BaseTooSmall, NonExactDivision
from .narayana_seq import SequenceCache, narayana

logger = logging.getLogger(__name__)

MAX_BASE = 64
_DIGIT_ALPHABET = "0123456789abcdefghijklmnopqrstuvwxyz"


def _check_base(base: int, max_base: int = MAX_BASE) -> None:
    if base < 2:
        raise BaseTooSmall(f"base must be at least 2, got {base}")
    if base > max_base:
        raise ValueError(f"base {base} exceeds the configured maximum {max_base}")


@dataclass(frozen=True)
class DigitString:
    """Positional representation, most significant digit first."""

    base: int
    digits: Tuple[int, ...]

    def __post_init__(self):
        _check_base(self.base)
        if not self.digits:
            raise ValueError("digit string is empty")
        if any(not 0 <= d < self.base for d in self.digits):
            raise ValueError(f"digit out of range for base {self.base}: {self.digits}")
        if self.digits[0] == 0 and len(self.digits) > 1:
            raise ValueError("leading zero")

    def __len__(self) -> int:
        return len(self.digits)

    @property
    def value(self) -> int:
        v = 0
        for d in self.digits:
            v = v * self.base + d
        return v

    def __str__(self) -> str:
        if self.base <= len(_DIGIT_ALPHABET):
            body = "".join(_DIGIT_ALPHABET[d] for d in self.digits)
        else:
            body = ".".join(str(d) for d in self.digits)
        return f"{body}_{self.base}"


@dataclass(frozen=True)
class ConcatPattern:
    """d1 repeated ell times, then d2 repeated m times, then d3 repeated k times."""

    base: int
    d1: int
    d2: int
    d3: int
    ell: int
    m: int
    k: int

    def validate(self) -> None:
        _check_base(self.base)
        if not 0 < self.d1 < self.base:
            raise ValueError(f"leading digit {self.d1} not in 1..{self.base - 1}")
        if not (0 <= self.d2 < self.base and 0 <= self.d3 < self.base):
            raise ValueError(f"digits ({self.d2}, {self.d3}) out of range for base {self.base}")
        if min(self.ell, self.m, self.k) < 1:
            raise ValueError(f"block lengths must be positive: {(self.ell, self.m, self.k)}")

    @property
    def length(self) -> int:
        return self.ell + self.m + self.k

    def satisfies_ordering(self) -> bool:
        return self.k <= self.m <= self.ell

    def block_string(self) -> DigitString:
        digits = (self.d1,) * self.ell + (self.d2,) * self.m + (self.d3,) * self.k
        return DigitString(self.base, digits)

    def describe(self) -> str:
        return f"({self.d1}^{self.ell})({self.d2}^{self.m})({self.d3}^{self.k})"


@dataclass(frozen=True)
class SearchHit:
    """A sequence index whose value splits into three blocks in `base`."""

    n: int
    value: int
    base: int
    patterns: Tuple[ConcatPattern, ...]

    @property
    def digit_string(self) -> DigitString:
        return to_digits(self.value, self.base)


def to_digits(v: int, base: int) -> DigitString:
    """Base-`base` digits of v >= 0, most significant first."""
    _check_base(base)
    if v < 0:
        raise ValueError(f"negative value {v}")
    if v == 0:
        return DigitString(base, (0,))
    digits: List[int] = []
    while v:
        v, d = divmod(v, base)
        digits.append(d)
    return DigitString(base, tuple(reversed(digits)))


def digit_count(v: int, base: int) -> int:
    return len(to_digits(v, base))


def maximal_runs(ds: DigitString) -> List[Tuple[int, int]]:
    """(digit, run_length) for each maximal constant run, in order."""
    return [(d, sum(1 for _ in group)) for d, group in groupby(ds.digits)]


def three_block_patterns(ds: DigitString, enforce_ordering: bool = False) -> List[ConcatPattern]:
    """
    Every split of ds into exactly three constant blocks.

    Args:
        ds: Digit string with at least three digits
        enforce_ordering: keep only splits with k <= m <= ell

    Returns:
        Patterns ordered by (ell, m); empty when ds has more than three runs
    """
    if len(ds) < 3:
        return []
    runs = maximal_runs(ds)
    base = ds.base
    splits: List[Tuple[int, int, int, int, int, int]] = []

    if len(runs) == 3:
        (a, x), (b, y), (c, z) = runs
        splits.append((a, b, c, x, y, z))
    elif len(runs) == 2:
        (a, x), (b, y) = runs
        for ell in range(1, x):
            splits.append((a, a, b, ell, x - ell, y))
        for m in range(1, y):
            splits.append((a, b, b, x, m, y - m))
    elif len(runs) == 1:
        (a, total), = runs
        for ell in range(1, total - 1):
            for m in range(1, total - ell):
                splits.append((a, a, a, ell, m, total - ell - m))

    patterns = [ConcatPattern(base, d1, d2, d3, ell, m, k) for d1, d2, d3, ell, m, k in splits]
    if enforce_ordering:
        patterns = [p for p in patterns if p.satisfies_ordering()]
    patterns.sort(key=lambda p: (p.ell, p.m))
    return patterns


def reconstruct(p: ConcatPattern) -> int:
    """Value of a pattern through the closed form, with an exact division check."""
    p.validate()
    rho = p.base
    numerator = (p.d1 * rho ** (p.ell + p.m + p.k)
                 - (p.d1 - p.d2) * rho ** (p.m + p.k)
                 - (p.d2 - p.d3) * rho ** p.k
                 - p.d3)
    value, remainder = divmod(numerator, rho - 1)
    if remainder:
        raise NonExactDivision(f"{p.describe()} in base {rho}: remainder {remainder}")
    return value


def _search_base(base: int, indexed_values: Sequence[Tuple[int, int]],
                 enforce_ordering: bool) -> List[SearchHit]:
    hits = []
    for n, value in indexed_values:
        if value < base * base:
            continue
        patterns = three_block_patterns(to_digits(value, base), enforce_ordering)
        if patterns:
            hits.append(SearchHit(n, value, base, tuple(patterns)))
    return hits


def search_hits(bases: Iterable[int], n_range: Iterable[int], enforce_ordering: bool = False,
                workers: int = 1, cache: Optional[SequenceCache] = None,
                max_base: int = MAX_BASE) -> List[SearchHit]:
    """
    All (n, base) for which N_n has at least three digits and a three-block split.

    Args:
        bases: Bases to scan
        n_range: Sequence indices to scan
        enforce_ordering: Apply k <= m <= ell
        workers: Process count; results do not depend on it
        cache: Sequence cache (module default when None)
        max_base: Upper limit on accepted bases

    Returns:
        Hits sorted by (n, base)
    """
    bases = sorted(set(bases))
    for base in bases:
        _check_base(base, max_base)
    indices = sorted(set(n_range))
    if indices and indices[0] < 1:
        raise ValueError(f"search indices must be positive, got {indices[0]}")
    indexed_values = [(n, narayana(n, cache)) for n in indices]
    logger.info(f"Searching {len(indices)} indices in bases {bases} (workers={workers})")

    hits: List[SearchHit] = []
    if workers > 1 and len(bases) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_search_base, base, indexed_values, enforce_ordering)
                       for base in bases]
            for future in futures:
                hits.extend(future.result())
    else:
        for base in bases:
            hits.extend(_search_base(base, indexed_values, enforce_ordering))

    hits.sort(key=lambda h: (h.n, h.base))
    logger.info(f"Search found {len(hits)} hits over {len({h.value for h in hits})} values")
    return hits


def group_hits_by_value(hits: Iterable[SearchHit]) -> Dict[int, List[SearchHit]]:
    """Fold hits into one entry per value, bases ascending."""
    grouped: Dict[int, List[SearchHit]] = {}
    for hit in sorted(hits, key=lambda h: (h.value, h.base)):
        grouped.setdefault(hit.value, []).append(hit)
    return grouped
