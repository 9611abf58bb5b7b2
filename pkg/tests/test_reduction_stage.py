from dataclasses import replace

import pytest

from naraforge.stages.reduction_stage import ReductionStage, failure_row
from naraforge.tools.dp_reduction import CaseLabel
from naraforge.tools.error_handler import EpsilonNeverPositive, PrecisionExhausted


def test_failure_row_from_case_label():
    error = EpsilonNeverPositive("no positive epsilon", case=CaseLabel(2, 4, 3, 1, ell=7), attempts=21)
    row = failure_row(error, 4)
    assert row == {"step": 2, "rho": 4, "bound": None, "certified": False}


def test_failure_row_without_case():
    row = failure_row(PrecisionExhausted("too few bits"), 6, step=3)
    assert row["step"] == 3
    assert not row["certified"]


@pytest.mark.slow
def test_stage_with_small_m(run_config, console):
    config = replace(run_config, base_min=3, base_max=4, M=10 ** 8, precision_bits=512)
    result = ReductionStage(config).run()
    assert result["success"]
    assert [r["rho"] for r in result["summaries"]] == [3, 4]
    assert result["n_bound"] == max(r["n_max"] for r in result["summaries"])
    assert len(ReductionStage.step_rows(result)) == 6
    ReductionStage.print_report(result, console)
    assert "Reduced bounds" in console.file.getvalue()
