"""
Settings Stage - Validates the run configuration before any computation.

Responsibilities:
- Check base, index and precision ranges
- Check worker count against the machine
- Check the output folder is writable
- Self-check the embedded list of expected solutions
- Verify required dependencies
"""

import logging
import os
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from ..tools.dp_reduction import DEFAULT_BIG_M, STEP3_BASES
from ..tools.export import SUPPORTED_FORMATS
from ..tools.hp_arith import DEFAULT_PRECISION
from ..tools.repdigit import MAX_BASE
from ..utils import format_int

logger = logging.getLogger(__name__)

MIN_RUN_PRECISION = 256
DEFAULT_N_MAX = 600


@dataclass(frozen=True)
class RunConfig:
    """Everything a search, reduction or verification run depends on."""

    base_min: int = 2
    base_max: int = 10
    n_max: int = DEFAULT_N_MAX
    precision_bits: int = DEFAULT_PRECISION
    M: int = DEFAULT_BIG_M
    enforce_ordering: bool = False
    output_format: str = "table"
    parallel_workers: int = 1
    strict_paper: bool = False
    step3_base: str = "rho"
    output_dir: str = "output"
    max_base: int = MAX_BASE

    @classmethod
    def from_args(cls, args: Any) -> "RunConfig":
        """Build a config from an argparse namespace; missing attributes keep their defaults."""
        defaults = cls()
        values = {}
        for name, attr in (
            ("base_min", "base_min"),
            ("base_max", "base_max"),
            ("n_max", "n_max"),
            ("precision_bits", "precision"),
            ("M", "big_m"),
            ("enforce_ordering", "ordering"),
            ("output_format", "format"),
            ("parallel_workers", "workers"),
            ("strict_paper", "strict_paper"),
            ("step3_base", "step3_base"),
            ("output_dir", "output_dir"),
        ):
            value = getattr(args, attr, None)
            values[name] = getattr(defaults, name) if value is None else value
        return cls(**values)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        """Inverse of to_dict, used when a session is resumed."""
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        if "M" in known:
            known["M"] = int(known["M"])
        return cls(**known)

    @property
    def bases(self) -> range:
        return range(self.base_min, self.base_max + 1)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["M"] = str(self.M)
        return data


class SettingsStage:
    """Stage responsible for validating the run configuration."""

    def __init__(self, config: RunConfig):
        self.run_config = config
        self.errors: List[str] = []
        self.warnings: List[str] = []
        self.config: Dict[str, Any] = {}

    def validate(self) -> Tuple[bool, Dict[str, Any], List[str], List[str]]:
        """
        Validate all settings.

        Returns:
            Tuple of (success, config, errors, warnings)
        """
        logger.info("SettingsStage: Starting validation...")

        self._check_ranges()
        self._check_workers()
        self._check_output_directory()
        self._check_expected_solutions()
        self._check_dependencies()
        self._build_config()

        success = len(self.errors) == 0
        if success:
            logger.info("SettingsStage: Validation PASSED [OK]")
        else:
            logger.error(f"SettingsStage: Validation FAILED with {len(self.errors)} errors")
        return success, self.config, self.errors, self.warnings

    def _check_ranges(self) -> None:
        c = self.run_config
        if c.base_min < 2:
            self.errors.append(f"base_min must be at least 2, got {c.base_min}")
        if c.base_max < c.base_min:
            self.errors.append(f"base_max ({c.base_max}) is below base_min ({c.base_min})")
        if c.base_max > c.max_base:
            self.errors.append(f"base_max must be at most {c.max_base}, got {c.base_max}")
        if c.n_max < 4:
            self.errors.append(f"n_max must be at least 4, got {c.n_max}")
        if c.precision_bits < MIN_RUN_PRECISION:
            self.errors.append(f"precision must be at least {MIN_RUN_PRECISION} bits, got {c.precision_bits}")
        if c.M < 1:
            self.errors.append(f"M must be at least 1, got {c.M}")
        if c.output_format not in SUPPORTED_FORMATS:
            self.errors.append(f"format must be one of {', '.join(SUPPORTED_FORMATS)}, got {c.output_format!r}")
        if c.step3_base not in STEP3_BASES:
            self.errors.append(f"step3 base must be one of {', '.join(STEP3_BASES)}, got {c.step3_base!r}")

    def _check_workers(self) -> None:
        workers = self.run_config.parallel_workers
        if workers < 1:
            self.errors.append(f"workers must be at least 1, got {workers}")
            return
        cpus = os.cpu_count() or 1
        if workers > cpus:
            self.warnings.append(f"{workers} workers requested but only {cpus} CPUs available")

    def _check_output_directory(self) -> None:
        output_dir = Path(self.run_config.output_dir)
        try:
            output_dir.mkdir(parents=True, exist_ok=True)
            test_file = output_dir / ".write_test"
            test_file.write_text("test")
            test_file.unlink()
            logger.info(f"[OK] Output directory: {output_dir.absolute()}")
        except OSError as e:
            self.errors.append(f"Cannot write to output directory: {e}")

    def _check_expected_solutions(self) -> None:
        from ..tools.expected import self_check

        problems = self_check()
        for problem in problems:
            self.errors.append(f"Expected solution list: {problem}")
        if not problems:
            logger.debug("[OK] Expected solution list round-trips")

    def _check_dependencies(self) -> None:
        missing = []
        for package in ("mpmath", "rich", "dotenv"):
            try:
                __import__(package)
            except ImportError:
                missing.append(package)
        if missing:
            self.errors.append(f"Missing required packages: {', '.join(missing)}")
            self.errors.append("Run: pip install -r requirements.txt")

    def _build_config(self) -> None:
        self.config = self.run_config.to_dict()
        self.config["output_dir"] = str(Path(self.run_config.output_dir).absolute())
        logger.info(f"Config built: bases {self.run_config.base_min}..{self.run_config.base_max}, "
                    f"n <= {self.run_config.n_max}, {self.run_config.precision_bits} bits, "
                    f"M = {format_int(self.run_config.M)}")

    def print_report(self, console: Optional[Any] = None) -> None:
        """Print validation report."""
        if console:
            from rich.panel import Panel
            from rich.text import Text

            report = Text()
            report.append("Settings Validation Report\n\n", style="bold cyan")
            if self.errors:
                report.append("[ERROR] ERRORS:\n", style="bold red")
                for error in self.errors:
                    report.append(f"  - {error}\n", style="red")
                report.append("\n")
            if self.warnings:
                report.append("[WARN] WARNINGS:\n", style="bold yellow")
                for warning in self.warnings:
                    report.append(f"  - {warning}\n", style="yellow")
                report.append("\n")
            if not self.errors:
                c = self.run_config
                report.append("[OK] All validations passed\n", style="bold green")
                report.append(f"Bases: {c.base_min}..{c.base_max}  n <= {c.n_max}\n", style="green")
                report.append(f"Precision: {c.precision_bits} bits  M: {format_int(c.M)}\n", style="green")
            console.print(Panel(report, title="Stage 1: Settings", border_style="cyan"))
        else:
            print("\n=== Settings Validation Report ===")
            if self.errors:
                print("\n[ERROR] ERRORS:")
                for error in self.errors:
                    print(f"  - {error}")
            if self.warnings:
                print("\n[WARN] WARNINGS:")
                for warning in self.warnings:
                    print(f"  - {warning}")
            if not self.errors:
                print("\n[OK] All validations passed")
            print("")
