"""
The published list of Narayana numbers that are concatenations of three
repdigits in some base 2..10, with the representations given for each.
"""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Set, Tuple

from .narayana_seq import narayana
from .repdigit import SearchHit, reconstruct, three_block_patterns, to_digits

EXPECTED_VALUES: Tuple[int, ...] = (
    4, 6, 9, 13, 19, 28, 41, 60, 88, 129, 189, 277, 406, 595, 872,
    1278, 1873, 2745, 4023, 18560, 58425,
)

# (value, n, base, digits)
EXPECTED_REPRESENTATIONS: Tuple[Tuple[int, int, int, str], ...] = (
    (4, 6, 2, "100"),
    (6, 7, 2, "110"),
    (13, 9, 3, "111"), (13, 9, 2, "1101"),
    (19, 10, 2, "10011"), (19, 10, 3, "201"), (19, 10, 4, "103"),
    (28, 11, 3, "1001"), (28, 11, 4, "130"), (28, 11, 5, "103"), (28, 11, 2, "11100"),
    (41, 12, 3, "1112"), (41, 12, 4, "221"), (41, 12, 5, "131"),
    (60, 13, 2, "111100"), (60, 13, 4, "330"), (60, 13, 5, "220"), (60, 13, 6, "140"),
    (60, 13, 7, "114"),
    (88, 14, 5, "323"), (88, 14, 6, "224"), (88, 14, 7, "154"), (88, 14, 8, "130"),
    (88, 14, 4, "1120"), (88, 14, 9, "107"),
    (129, 15, 6, "333"), (129, 15, 7, "243"), (129, 15, 8, "201"), (129, 15, 5, "1004"),
    (129, 15, 4, "2001"), (129, 15, 9, "153"), (129, 15, 2, "10000001"), (129, 15, 10, "129"),
    (189, 16, 4, "2331"), (189, 16, 3, "21000"), (189, 16, 7, "360"), (189, 16, 9, "230"),
    (189, 16, 5, "1224"), (189, 16, 6, "513"), (189, 16, 8, "275"), (189, 16, 10, "189"),
    (277, 17, 6, "1141"), (277, 17, 7, "544"), (277, 17, 8, "425"), (277, 17, 9, "337"),
    (277, 17, 4, "10111"),
    (406, 18, 5, "3111"), (406, 18, 8, "626"), (406, 18, 7, "1120"), (406, 18, 9, "501"),
    (406, 18, 10, "406"),
    (595, 19, 8, "1123"), (595, 19, 9, "731"), (595, 19, 10, "595"),
    (872, 20, 5, "11442"), (872, 20, 9, "1168"), (872, 20, 8, "1550"), (872, 20, 10, "872"),
    (1278, 21, 6, "5530"),
    (1873, 22, 5, "24443"), (1873, 22, 9, "2511"),
    (2745, 23, 7, "11001"),
    (4023, 24, 8, "7667"),
    (18560, 28, 8, "44200"),
    (58425, 31, 5, "3332200"), (58425, 31, 7, "332223"),
)


@dataclass(frozen=True)
class VerificationDiff:
    missing_values: Tuple[int, ...]
    extra_values: Tuple[int, ...]
    missing_representations: Tuple[Tuple[int, int, str], ...]

    @property
    def matches(self) -> bool:
        return not (self.missing_values or self.extra_values or self.missing_representations)


def self_check() -> List[str]:
    """Round-trip every embedded representation; returns problems (empty when sound)."""
    problems: List[str] = []
    if len(set(EXPECTED_VALUES)) != 21:
        problems.append(f"expected 21 distinct values, found {len(set(EXPECTED_VALUES))}")
    for value, n, base, digits in EXPECTED_REPRESENTATIONS:
        ds = to_digits(value, base)
        if "".join(str(d) for d in ds.digits) != digits:
            problems.append(f"{value} in base {base} is {ds}, not {digits}")
            continue
        if narayana(n) != value:
            problems.append(f"N_{n} = {narayana(n)}, not {value}")
        patterns = three_block_patterns(ds)
        if not patterns:
            problems.append(f"{digits}_{base} has no three-block split")
        for p in patterns:
            if reconstruct(p) != value:
                problems.append(f"{p.describe()} in base {base} reconstructs to {reconstruct(p)}")
        if value not in EXPECTED_VALUES:
            problems.append(f"{value} is not in the value list")
    return problems


def representations_by_value() -> Dict[int, Set[Tuple[int, str]]]:
    grouped: Dict[int, Set[Tuple[int, str]]] = {v: set() for v in EXPECTED_VALUES}
    for value, _, base, digits in EXPECTED_REPRESENTATIONS:
        grouped[value].add((base, digits))
    return grouped


def diff_representations(found: Iterable[Tuple[int, int, str]]) -> VerificationDiff:
    """Compare (value, base, digits) triples with the published list."""
    found_reprs = set(found)
    found_values = {value for value, _, _ in found_reprs}
    missing_reprs = tuple(sorted(
        (value, base, digits)
        for value, _, base, digits in EXPECTED_REPRESENTATIONS
        if (value, base, digits) not in found_reprs
    ))
    return VerificationDiff(
        missing_values=tuple(sorted(set(EXPECTED_VALUES) - found_values)),
        extra_values=tuple(sorted(found_values - set(EXPECTED_VALUES))),
        missing_representations=missing_reprs,
    )


def diff_against_expected(hits: Iterable[SearchHit]) -> VerificationDiff:
    """Compare search hits with the published list."""
    return diff_representations(
        (h.value, h.base, "".join(str(d) for d in h.digit_string.digits)) for h in hits
    )
