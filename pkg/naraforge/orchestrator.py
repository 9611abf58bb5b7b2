"""
Verification Orchestrator for naraforge

Runs the stages of a full verification in sequence:
1. SettingsStage - Validates the run configuration
2. BoundsStage - Initial bound on n per base
3. ReductionStage - Three-step reduction per base
4. SearchStage - Exhaustive search up to max(n_max, reduced bound)
5. Verify - Diff against the published solution list

Supports session resumption - if a run is interrupted, it resumes from the
last completed stage.
"""

import logging
from typing import Any, Dict, Optional

from .session_manager import SessionManager
from .stages import BoundsStage, ReductionStage, RunConfig, SearchStage, SettingsStage, compare_with_expected
from .tools import run_logger

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISMATCH = 2
EXIT_REDUCTION_FAILED = 3


class VerificationOrchestrator:
    """
    Orchestrates the verification pipeline.

    Pipeline:
        RunConfig -> Settings -> Bounds -> Reduction -> Search -> Verify

    Supports resumption from incomplete sessions.
    """

    def __init__(self, config: RunConfig, console=None,
                 session_manager: Optional[SessionManager] = None,
                 skip_reduction: bool = False):
        """
        Initialize orchestrator.

        Args:
            config: Run configuration (replaced by the stored one on resume)
            console: Rich Console for stage banners and reports (optional)
            session_manager: SessionManager for state persistence (optional)
            skip_reduction: Search up to n_max without running the reduction
        """
        self.config = config
        self.console = console
        self.session_manager = session_manager or SessionManager(config.output_dir)
        self.skip_reduction = skip_reduction

    def run(self, resume_session_id: Optional[str] = None) -> Dict[str, Any]:
        """
        Execute the full pipeline.

        Args:
            resume_session_id: Optional session ID to resume from

        Returns:
            Dict with the result of every stage plus exit_code
        """
        logger.info("=" * 60)
        logger.info("naraforge Orchestrator: Starting verification pipeline")
        logger.info("=" * 60)

        session = None
        if resume_session_id:
            session = self.session_manager.load_session(resume_session_id)
            if session:
                logger.info(f"Resuming session {resume_session_id} from stage: {session.get('current_stage')}")
                self.config = RunConfig.from_dict(session.get("config", {}))
                self.skip_reduction = bool(session.get("skip_reduction", self.skip_reduction))
                if self.console:
                    self.console.print(f"[green]Resuming session from: {session.get('current_stage')}[/]")
            else:
                logger.warning(f"Session {resume_session_id} not found, starting fresh")
        if session is None:
            session = self.session_manager.create_session(self.config.to_dict())
            session["skip_reduction"] = self.skip_reduction

        results: Dict[str, Any] = {stage: None for stage in SessionManager.STAGES}
        results.update({"success": False, "exit_code": EXIT_USAGE, "session_id": session.get("session_id")})
        run_logger.log_event(f"verify session={results['session_id']} bases={self.config.base_min}..{self.config.base_max}")

        # ========================================
        # STAGE 1: Settings Validation
        # ========================================
        if not self.session_manager.should_skip_stage("settings"):
            self._print_stage("Stage 1: Settings Validation")
            settings_stage = SettingsStage(self.config)
            success, config, errors, warnings = settings_stage.validate()
            settings_stage.print_report(self.console)
            results["settings"] = {"success": success, "config": config, "errors": errors, "warnings": warnings}
            self.session_manager.update_stage("settings", results["settings"], success)
            if not success:
                logger.error("Settings validation failed. Aborting pipeline.")
                self.session_manager.mark_failed("settings", "; ".join(errors))
                return self._finish(results, "CONFIG_ERROR")
        else:
            logger.info("Skipping settings (already completed)")
            results["settings"] = self.session_manager.get_stage_result("settings")

        # ========================================
        # STAGE 2: Initial Bounds
        # ========================================
        if not self.session_manager.should_skip_stage("bounds"):
            self._print_stage("Stage 2: Initial Bounds")
            bounds_stage = BoundsStage(self.config)
            results["bounds"] = bounds_stage.run()
            bounds_stage.print_report(results["bounds"], self.console)
            self.session_manager.update_stage("bounds", results["bounds"])
        else:
            logger.info("Skipping bounds (already completed)")
            results["bounds"] = self.session_manager.get_stage_result("bounds")

        # ========================================
        # STAGE 3: Reduction
        # ========================================
        if not self.session_manager.should_skip_stage("reduction"):
            if self.skip_reduction:
                results["reduction"] = {"summaries": [], "failures": [], "n_bound": 0,
                                        "success": True, "skipped": True}
                logger.info("Reduction skipped; searching up to n_max only")
            else:
                self._print_stage("Stage 3: Reduction")
                reduction_stage = ReductionStage(self.config)
                results["reduction"] = reduction_stage.run()
                reduction_stage.print_report(results["reduction"], self.console)
            success = results["reduction"]["success"]
            self.session_manager.update_stage("reduction", results["reduction"], success)
            if not success:
                failed = [f["rho"] for f in results["reduction"]["failures"]]
                self.session_manager.mark_failed("reduction", f"reduction failed for bases {failed}")
                results["exit_code"] = EXIT_REDUCTION_FAILED
                return self._finish(results, "REDUCTION_FAILED")
        else:
            logger.info("Skipping reduction (already completed)")
            results["reduction"] = self.session_manager.get_stage_result("reduction")

        # ========================================
        # STAGE 4: Search
        # ========================================
        if not self.session_manager.should_skip_stage("search"):
            self._print_stage("Stage 4: Search")
            search_stage = SearchStage(self.config, n_limit=results["reduction"].get("n_bound", 0))
            results["search"] = search_stage.run()
            self.session_manager.update_stage("search", results["search"])
        else:
            logger.info("Skipping search (already completed)")
            results["search"] = self.session_manager.get_stage_result("search")

        # ========================================
        # STAGE 5: Verify
        # ========================================
        self._print_stage("Stage 5: Verify")
        results["verify"] = compare_with_expected(results["search"])
        matches = results["verify"]["matches"]
        self.session_manager.update_stage("verify", results["verify"], matches)
        if not matches:
            self.session_manager.mark_failed("verify", "search does not match the published list")
            results["exit_code"] = EXIT_MISMATCH
            return self._finish(results, "MISMATCH")

        results["success"] = True
        results["exit_code"] = EXIT_OK
        return self._finish(results, "MATCH")

    def _finish(self, results: Dict[str, Any], status: str) -> Dict[str, Any]:
        stages = sum(1 for stage in SessionManager.STAGES if results.get(stage) is not None)
        details = f"session={results['session_id']}"
        if results.get("search"):
            details += f" | values={len(results['search'].get('values', []))}"
        run_logger.log_summary(status, stages, details)
        logger.info(f"Pipeline finished: {status} (exit {results['exit_code']})")
        return results

    def _print_stage(self, stage: str):
        """Print stage separator."""
        if self.console:
            from rich.panel import Panel
            self.console.print()
            self.console.print(Panel(f"[bold cyan]{stage}[/]", border_style="cyan"))
            self.console.print()
        else:
            logger.info(f"--- {stage} ---")


def run_verification(config: RunConfig, console=None, resume_session_id: Optional[str] = None,
                     skip_reduction: bool = False) -> Dict[str, Any]:
    """
    Convenience function to run the full pipeline.

    Args:
        config: Run configuration
        console: Optional Rich Console for banners
        resume_session_id: Optional session ID to resume from
        skip_reduction: Search up to n_max without running the reduction

    Returns:
        Pipeline results
    """
    orchestrator = VerificationOrchestrator(config, console=console, skip_reduction=skip_reduction)
    return orchestrator.run(resume_session_id=resume_session_id)
