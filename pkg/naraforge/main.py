"""
naraforge command-line interface.

Subcommands:
    seq FROM TO        Narayana numbers N_FROM .. N_TO
    search             Three-block representations in a range of bases
    bound              Initial bound on n with its audit trail
    reduce             Continued-fraction reduction steps
    verify             Full pipeline, diffed against the published solution list
"""

import argparse
import logging
import os
import sys
from typing import Any, Dict, List, Optional, Sequence

from dotenv import load_dotenv
from rich.console import Console
from rich.panel import Panel

from .orchestrator import EXIT_MISMATCH, EXIT_OK, EXIT_REDUCTION_FAILED, EXIT_USAGE, run_verification
from .stages import RunConfig, SettingsStage
from .stages.bounds_stage import COEFFICIENT_COLUMNS, coefficient_rows
from .stages.reduction_stage import failure_row
from .stages.search_stage import print_solutions
from .tools import run_logger
from .tools.baker_bounds import initial_n_bound
from .tools.dp_reduction import DEFAULT_BIG_M, STEP3_BASES, step1, step2, step3
from .tools.error_handler import (
    ConfigError,
    EpsilonNeverPositive,
    NaraForgeError,
    PrecisionExhausted,
    display_error,
)
from .tools.export import (
    BOUND_COLUMNS,
    HIT_COLUMNS,
    SEQUENCE_COLUMNS,
    STEP_COLUMNS,
    SUPPORTED_FORMATS,
    VALUE_COLUMNS,
    export_rows,
    hit_rows,
    render_rows,
    to_table,
    value_rows,
)
from .tools.hp_arith import DEFAULT_PRECISION
from .tools.narayana_seq import narayana_range
from .tools.repdigit import search_hits
from .utils import parse_big_int

logger = logging.getLogger(__name__)

Row = Dict[str, Any]


class CliParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with status 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"Ignoring {name}={raw!r}: not an integer")
        return default


def _big_int(text: str) -> int:
    try:
        return parse_big_int(text)
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}: {e}")


def _common_options() -> argparse.ArgumentParser:
    """Flags shared by every subcommand; env vars supply the defaults."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--base-min', type=int, default=2, help='Smallest base (default 2)')
    common.add_argument('--base-max', type=int, default=10, help='Largest base (default 10)')
    common.add_argument('--n-max', type=int, default=600, help='Largest sequence index searched (default 600)')
    common.add_argument('--precision', type=int,
                        default=_env_int("NARAFORGE_PRECISION", DEFAULT_PRECISION),
                        help='Working precision in bits (env NARAFORGE_PRECISION)')
    common.add_argument('--big-m', type=_big_int, default=DEFAULT_BIG_M,
                        help='Bound M on the reduced variable, e.g. 2e51')
    common.add_argument('--ordering', action='store_true',
                        help='Only report splits with k <= m <= ell')
    common.add_argument('--format', choices=SUPPORTED_FORMATS, default="table",
                        help='Report format')
    common.add_argument('--workers', type=int, default=_env_int("NARAFORGE_WORKERS", 1),
                        help='Worker processes (env NARAFORGE_WORKERS)')
    common.add_argument('--strict-paper', action='store_true',
                        help='Sweep d2, d3 over 1..rho-1 only')
    common.add_argument('--step3-base', choices=STEP3_BASES, default="rho",
                        help='Base of the exponential in the step-3 inequality')
    common.add_argument('--output-dir', default=os.getenv("NARAFORGE_OUTPUT_DIR", "output"),
                        help='Sessions, run.log and exports (env NARAFORGE_OUTPUT_DIR)')
    common.add_argument('--export-dir', help='Also write the report as CSV and JSON here')
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = CliParser(
        prog="naraforge",
        description="Narayana numbers that are concatenations of three repdigits",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", parser_class=CliParser)
    sub.required = True

    seq = sub.add_parser('seq', parents=[common], help='Print N_FROM .. N_TO')
    seq.add_argument('start', type=int, metavar='FROM')
    seq.add_argument('stop', type=int, metavar='TO')

    sub.add_parser('search', parents=[common], help='Search bases base-min..base-max up to n-max')

    bound = sub.add_parser('bound', parents=[common], help='Initial bound on n')
    bound.add_argument('--rho', type=int, help='Single base (default: base-min..base-max)')

    reduce = sub.add_parser('reduce', parents=[common], help='Reduction steps')
    reduce.add_argument('--rho', type=int, help='Single base (default: base-min..base-max)')
    reduce.add_argument('--step', choices=("1", "2", "3", "all"), default="all",
                        help='Last step to run (default all)')

    verify = sub.add_parser('verify', parents=[common], help='Full verification pipeline')
    verify.add_argument('--resume', metavar='SESSION_ID', help='Resume a stored session')
    verify.add_argument('--no-reduction', action='store_true',
                        help='Search up to n-max without running the reduction')
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """Parse CLI arguments."""
    return build_parser().parse_args(argv)


def get_rich_console(stderr: bool = False) -> Console:
    """Get a Rich console instance with safe defaults."""
    try:
        console = Console(stderr=stderr)
        if console.size.width < 80:
            return Console(stderr=stderr, width=80)
        return console
    except Exception:
        return Console(stderr=stderr, width=80)


def _emit(rows: List[Row], columns: Sequence[str], args: argparse.Namespace,
          console: Console, err_console: Console, stem: str, title: str) -> None:
    render_rows(rows, columns, args.format, console, title=title)
    if args.export_dir:
        status = export_rows(rows, columns, args.export_dir, stem)
        err_console.print(status, highlight=False)
        run_logger.log_event(status)


def _validated_config(args: argparse.Namespace, err_console: Console) -> RunConfig:
    config = RunConfig.from_args(args)
    stage = SettingsStage(config)
    success, _, errors, warnings = stage.validate()
    if not success or warnings:
        stage.print_report(err_console)
    if not success:
        raise ConfigError("; ".join(errors))
    run_logger.set_output_dir(config.output_dir)
    return config


def _bases(args: argparse.Namespace) -> range:
    if args.rho is not None:
        if args.rho < 2:
            raise ConfigError(f"--rho must be at least 2, got {args.rho}")
        return range(args.rho, args.rho + 1)
    return range(args.base_min, args.base_max + 1)


def cmd_seq(args: argparse.Namespace, console: Console, err_console: Console) -> int:
    values = narayana_range(args.start, args.stop)
    rows = [{"n": n, "value": v} for n, v in zip(range(args.start, args.stop + 1), values)]
    _emit(rows, SEQUENCE_COLUMNS, args, console, err_console, "sequence", "Narayana numbers")
    return EXIT_OK


def cmd_search(args: argparse.Namespace, console: Console, err_console: Console) -> int:
    config = _validated_config(args, err_console)
    hits = search_hits(config.bases, range(1, config.n_max + 1), config.enforce_ordering,
                       config.parallel_workers, max_base=config.max_base)
    rows = hit_rows(hits)
    _emit(rows, HIT_COLUMNS, args, console, err_console, "search", "Three-block representations")
    run_logger.log_event(f"search bases={config.base_min}..{config.base_max} n<={config.n_max} "
                         f"hits={len(rows)}")
    return EXIT_OK


def cmd_bound(args: argparse.Namespace, console: Console, err_console: Console) -> int:
    bases = _bases(args)
    reports = [initial_n_bound(rho) for rho in bases]
    rows = [r.to_dict() for r in reports]
    _emit(rows, BOUND_COLUMNS, args, console, err_console, "bounds", "Initial bounds on n")
    if args.format == "table":
        console.print(to_table(coefficient_rows(), COEFFICIENT_COLUMNS, title="Linear-form constants"))
        for report in reports:
            console.print(to_table([{"quantity": q, "value": v} for q, v in report.audit],
                                   ("quantity", "value"), title=f"Audit, rho={report.rho}"))
    return EXIT_OK


def _reduce_base(rho: int, last_step: int, config: RunConfig) -> List[Row]:
    """Step rows for one base; a step that cannot be certified ends the chain with a flagged row."""
    rows: List[Row] = []
    try:
        first = step1(rho, config.M, config.precision_bits, config.parallel_workers)
        rows.append(first.to_row())
        if last_step >= 2:
            second = step2(rho, config.M, first.bound, config.precision_bits,
                           config.strict_paper, config.parallel_workers)
            rows.append(second.to_row())
            if last_step >= 3:
                third = step3(rho, config.M, first.bound, second.bound, config.precision_bits,
                              config.strict_paper, config.step3_base, config.parallel_workers)
                rows.append(third.to_row())
    except (EpsilonNeverPositive, PrecisionExhausted) as e:
        logger.error(f"Reduction failed for rho={rho}: {e}")
        run_logger.log_error(f"reduce rho={rho}: {e}")
        rows.append(failure_row(e, rho, len(rows) + 1))
    return rows


def cmd_reduce(args: argparse.Namespace, console: Console, err_console: Console) -> int:
    config = _validated_config(args, err_console)
    last_step = 3 if args.step == "all" else int(args.step)
    rows: List[Row] = []
    for rho in _bases(args):
        rows.extend(_reduce_base(rho, last_step, config))
    _emit(rows, STEP_COLUMNS, args, console, err_console, "reduction", "Reduction steps")
    if any(not row["certified"] for row in rows):
        err_console.print("[red]Some reduction steps could not be certified (flagged rows)[/]")
        return EXIT_REDUCTION_FAILED
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, console: Console, err_console: Console) -> int:
    config = RunConfig.from_args(args)
    run_logger.set_output_dir(config.output_dir)
    results = run_verification(config, console=err_console, resume_session_id=args.resume,
                               skip_reduction=args.no_reduction)
    if results.get("search"):
        rows = value_rows(results["search"]["hits"])
        if args.format == "table":
            print_solutions(results["search"], console)
        else:
            render_rows(rows, VALUE_COLUMNS, args.format, console)
        if args.export_dir:
            err_console.print(export_rows(rows, VALUE_COLUMNS, args.export_dir, "solutions"), highlight=False)

    verify = results.get("verify") or {}
    if results["exit_code"] == EXIT_MISMATCH:
        lines = [f"Missing values: {verify.get('missing_values')}",
                 f"Extra values: {verify.get('extra_values')}",
                 f"Missing representations: {verify.get('missing_representations')}"]
        lines.extend(verify.get("digit_count_problems", []))
        err_console.print(Panel("\n".join(lines), title="Verification mismatch", border_style="red"))
    elif results["exit_code"] == EXIT_OK:
        err_console.print(f"[bold green]MATCH[/] session {results['session_id']}: "
                          f"{len(results['search']['values'])} values")
    return results["exit_code"]


COMMANDS = {
    "seq": cmd_seq,
    "search": cmd_search,
    "bound": cmd_bound,
    "reduce": cmd_reduce,
    "verify": cmd_verify,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    load_dotenv()
    args = parse_args(argv)
    console = get_rich_console()
    err_console = get_rich_console(stderr=True)

    try:
        return COMMANDS[args.command](args, console, err_console)
    except (EpsilonNeverPositive, PrecisionExhausted) as e:
        display_error(err_console, e, context=args.command)
        run_logger.log_error(f"{args.command}: {e}")
        return EXIT_REDUCTION_FAILED
    except (NaraForgeError, ValueError) as e:
        display_error(err_console, e, context=args.command)
        run_logger.log_error(f"{args.command}: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
