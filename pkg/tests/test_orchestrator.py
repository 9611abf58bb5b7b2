from dataclasses import replace
from pathlib import Path

from naraforge.orchestrator import (
    EXIT_MISMATCH,
    EXIT_OK,
    EXIT_USAGE,
    VerificationOrchestrator,
    run_verification,
)
from naraforge.session_manager import SessionManager
from naraforge.tools import run_logger


def test_pipeline_without_reduction_matches(run_config, console):
    results = run_verification(run_config, console=console, skip_reduction=True)
    assert results["exit_code"] == EXIT_OK
    assert results["success"]
    assert len(results["search"]["values"]) == 21
    assert results["reduction"]["skipped"]
    assert results["bounds"]["checks_pass"]
    assert "Stage 4: Search" in console.file.getvalue()


def test_restricted_bases_give_a_mismatch(run_config):
    config = replace(run_config, base_min=2, base_max=3, n_max=60)
    results = run_verification(config, skip_reduction=True)
    assert results["exit_code"] == EXIT_MISMATCH
    assert 58425 in results["verify"]["missing_values"]
    assert results["verify"]["extra_values"] == []


def test_invalid_settings_stop_the_pipeline(run_config):
    results = run_verification(replace(run_config, base_min=1), skip_reduction=True)
    assert results["exit_code"] == EXIT_USAGE
    assert results["bounds"] is None
    assert any("base_min" in e for e in results["settings"]["errors"])


def test_resume_skips_completed_stages(run_config):
    run_logger.set_output_dir(run_config.output_dir)
    first = run_verification(replace(run_config, base_max=3, n_max=60), skip_reduction=True)
    assert first["exit_code"] == EXIT_MISMATCH

    manager = SessionManager(run_config.output_dir)
    orchestrator = VerificationOrchestrator(run_config, session_manager=manager)
    resumed = orchestrator.run(resume_session_id=first["session_id"])
    # stored config and search result are reused
    assert orchestrator.config.base_max == 3
    assert orchestrator.skip_reduction
    assert resumed["search"] == first["search"]
    assert resumed["exit_code"] == EXIT_MISMATCH

    log_text = (Path(run_config.output_dir) / "run.log").read_text(encoding="utf-8")
    assert "status=MISMATCH" in log_text
