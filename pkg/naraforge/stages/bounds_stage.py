"""
Bounds Stage - Initial bound on the sequence index for every base.

Runs the linear-form estimates and the recursive resolution per base and
keeps the audit trail for the report.
"""

import logging
from typing import Any, Dict, List, Optional

from ..tools.baker_bounds import InitialBoundReport, initial_n_bound, reproduce_matveev_coefficients
from ..tools.export import BOUND_COLUMNS, to_table
from ..utils import format_sci
from .settings_stage import RunConfig

logger = logging.getLogger(__name__)

COEFFICIENT_COLUMNS = ("form", "value", "ceiling", "relative_gap", "within_ceiling")


def coefficient_rows() -> List[Dict[str, Any]]:
    """Reproduced linear-form constants next to the published ceilings."""
    return [
        {"form": a.which, "value": format_sci(a.value.upper, 6), "ceiling": format_sci(a.ceiling, 6),
         "relative_gap": f"{a.relative_gap:.2e}", "within_ceiling": a.within_ceiling}
        for a in reproduce_matveev_coefficients()
    ]


class BoundsStage:
    """Computes InitialBoundReport for each base of the run."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.reports: List[InitialBoundReport] = []

    def run(self) -> Dict[str, Any]:
        logger.info(f"BoundsStage: bases {self.config.base_min}..{self.config.base_max}")
        self.reports = [initial_n_bound(rho) for rho in self.config.bases]
        failed = [r.rho for r in self.reports if not r.log_h_check]
        if failed:
            logger.warning(f"log H check failed for bases {failed}")
        coefficients = coefficient_rows()
        return {
            "bounds": [r.to_dict() for r in self.reports],
            "coefficients": coefficients,
            "checks_pass": not failed and all(c["within_ceiling"] for c in coefficients),
        }

    @staticmethod
    def print_report(result: Dict[str, Any], console: Optional[Any] = None) -> None:
        rows = result.get("bounds", [])
        if console:
            console.print(to_table(rows, BOUND_COLUMNS, title="Initial bounds on n"))
        else:
            for row in rows:
                print(f"rho={row['rho']}: n < {row['capped_bound']}")
