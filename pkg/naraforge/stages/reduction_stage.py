"""
Reduction Stage - Three-step continued-fraction reduction for every base.

A base whose reduction cannot be certified is recorded as a failure with
the partial step rows; the remaining bases still run.
"""

import logging
from typing import Any, Dict, List, Optional

from ..tools.dp_reduction import ReductionSummary, full_reduction
from ..tools.error_handler import EpsilonNeverPositive, PrecisionExhausted
from ..tools.export import STEP_COLUMNS, SUMMARY_COLUMNS, to_table
from .settings_stage import RunConfig

logger = logging.getLogger(__name__)


def summary_record(summary: ReductionSummary) -> Dict[str, Any]:
    return {
        "rho": summary.rho,
        "ell_max": summary.ell_max,
        "m_max": summary.m_max,
        "n_max": summary.n_max,
        "certified": all(s.certified for s in summary.steps),
        "rows": summary.to_rows(),
    }


def failure_row(error: Exception, rho: int, step: int = 0) -> Dict[str, Any]:
    """A flagged report row for a step that could not be certified."""
    report = getattr(error, "report", None)
    if report is not None:
        row = report.to_row()
    else:
        step = getattr(getattr(error, "case", None), "step", step)
        row = {"step": step, "rho": rho}
    row["bound"] = None
    row["certified"] = False
    return row


class ReductionStage:
    """Runs full_reduction per base and keeps the largest certified n bound."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.summaries: List[ReductionSummary] = []

    def run(self) -> Dict[str, Any]:
        c = self.config
        logger.info(f"ReductionStage: bases {c.base_min}..{c.base_max}, M={c.M}, "
                    f"step-3 base {c.step3_base}, workers={c.parallel_workers}")
        records: List[Dict[str, Any]] = []
        failures: List[Dict[str, Any]] = []

        for rho in c.bases:
            try:
                summary = full_reduction(rho, c.M, c.precision_bits, c.strict_paper,
                                         c.step3_base, c.parallel_workers)
            except (EpsilonNeverPositive, PrecisionExhausted) as e:
                logger.error(f"Reduction failed for rho={rho}: {e}")
                failures.append({"rho": rho, "error": str(e), "row": failure_row(e, rho)})
                continue
            self.summaries.append(summary)
            records.append(summary_record(summary))
            logger.info(f"rho={rho}: ell <= {summary.ell_max}, m <= {summary.m_max}, n <= {summary.n_max}")

        n_bound = max((r["n_max"] for r in records), default=0)
        return {
            "summaries": records,
            "failures": failures,
            "n_bound": n_bound,
            "success": not failures,
        }

    @staticmethod
    def step_rows(result: Dict[str, Any]) -> List[Dict[str, Any]]:
        rows = [row for record in result.get("summaries", []) for row in record["rows"]]
        rows.extend(f["row"] for f in result.get("failures", []))
        return sorted(rows, key=lambda r: (r["rho"], r["step"]))

    @staticmethod
    def print_report(result: Dict[str, Any], console: Optional[Any] = None) -> None:
        if console:
            console.print(to_table(result.get("summaries", []), SUMMARY_COLUMNS, title="Reduced bounds"))
            console.print(to_table(ReductionStage.step_rows(result), STEP_COLUMNS, title="Reduction steps"))
            for failure in result.get("failures", []):
                console.print(f"[red]rho={failure['rho']}: {failure['error']}[/]")
        else:
            for record in result.get("summaries", []):
                print(f"rho={record['rho']}: ell <= {record['ell_max']}, "
                      f"m <= {record['m_max']}, n <= {record['n_max']}")
