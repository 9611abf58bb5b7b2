"""
Search Stage - Exhaustive search below the reduced bound and the comparison
with the published solution list.
"""

import logging
from typing import Any, Dict, Iterable, List, Optional

from ..tools.baker_bounds import lemma2_digit_bounds
from ..tools.expected import VerificationDiff, diff_representations
from ..tools.export import VALUE_COLUMNS, hit_rows, to_table, value_rows
from ..tools.repdigit import SearchHit, digit_count, group_hits_by_value, search_hits
from .settings_stage import RunConfig

logger = logging.getLogger(__name__)


def digit_count_violations(hits: Iterable[SearchHit]) -> List[str]:
    """Hits whose digit count or block lengths disagree with the index-based bracket."""
    problems = []
    for hit in hits:
        count = digit_count(hit.value, hit.base)
        low, high = lemma2_digit_bounds(hit.n, hit.base)
        if not low <= count <= high:
            problems.append(f"N_{hit.n} has {count} digits in base {hit.base}, outside [{low}, {high}]")
        for p in hit.patterns:
            if p.length != count:
                problems.append(f"{p.describe()} has length {p.length}, expected {count}")
    return problems


def diff_from_rows(rows: Iterable[Dict[str, Any]]) -> VerificationDiff:
    return diff_representations((r["value"], r["base"], r["digits"]) for r in rows)


class SearchStage:
    """Scans 1..n_limit in every base of the run."""

    def __init__(self, config: RunConfig, n_limit: Optional[int] = None):
        self.config = config
        self.n_limit = max(config.n_max, n_limit or 0)
        self.hits: List[SearchHit] = []

    def run(self) -> Dict[str, Any]:
        c = self.config
        logger.info(f"SearchStage: n <= {self.n_limit} in bases {c.base_min}..{c.base_max}")
        self.hits = search_hits(c.bases, range(1, self.n_limit + 1), c.enforce_ordering,
                                c.parallel_workers, max_base=c.max_base)
        problems = digit_count_violations(self.hits)
        for problem in problems:
            logger.error(problem)
        values = sorted(group_hits_by_value(self.hits))
        return {
            "n_limit": self.n_limit,
            "hits": hit_rows(self.hits),
            "values": values,
            "digit_count_problems": problems,
        }


def compare_with_expected(search_result: Dict[str, Any]) -> Dict[str, Any]:
    """Diff a search result (fresh or reloaded from a session) with the published list."""
    diff = diff_from_rows(search_result.get("hits", []))
    problems = list(search_result.get("digit_count_problems", []))
    return {
        "matches": diff.matches and not problems,
        "missing_values": list(diff.missing_values),
        "extra_values": list(diff.extra_values),
        "missing_representations": [list(r) for r in diff.missing_representations],
        "digit_count_problems": problems,
    }


def print_solutions(search_result: Dict[str, Any], console: Optional[Any] = None) -> None:
    rows = value_rows(search_result.get("hits", []))
    if console:
        console.print(to_table(rows, VALUE_COLUMNS, title="Solutions"))
    else:
        for row in rows:
            print(f"{row['value']} = N_{row['n']}: {row['representations']}")
