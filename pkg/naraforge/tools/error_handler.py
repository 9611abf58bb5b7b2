"""
Error handling utilities for naraforge.

Defines the exception hierarchy shared by the computational tools and turns
any of them into a user-facing message with fix steps.
"""

from typing import Any, Optional

from rich.console import Console
from rich.panel import Panel
from rich.text import Text


class NaraForgeError(Exception):
    """Base class for every error raised by naraforge."""


class PrecisionExhausted(NaraForgeError):
    """Working precision was too small to certify a result.

    Attributes:
        certified_terms: Number of terms (or digits) that were certified
            before precision ran out, when meaningful.
        partial: Partially computed result, if any.
    """

    def __init__(self, message: str, certified_terms: Optional[int] = None, partial: Any = None):
        super().__init__(message)
        self.certified_terms = certified_terms
        self.partial = partial


class NotReached(NaraForgeError):
    """A continued fraction ended before reaching the requested denominator."""


class IndexOutOfRange(NaraForgeError, IndexError):
    """Sequence index outside the configured window."""


class BaseTooSmall(NaraForgeError, ValueError):
    """Positional base below 2."""


class NonExactDivision(NaraForgeError, ArithmeticError):
    """Closed-form reconstruction did not divide exactly by (base - 1)."""


class InvalidInstance(NaraForgeError, ValueError):
    """Parameters of a linear-form lower bound are out of range."""


class HypothesisViolated(NaraForgeError):
    """Input does not satisfy the hypothesis of a bound-resolution lemma."""


class EpsilonNeverPositive(NaraForgeError):
    """No tried convergent gave a certified positive epsilon.

    Attributes:
        case: The case (or its label) that could not be certified.
        attempts: Number of convergents tried.
        report: Partial step report when raised from a sweep.
    """

    def __init__(self, message: str, case: Any = None, attempts: int = 0, report: Any = None):
        super().__init__(message)
        self.case = case
        self.attempts = attempts
        self.report = report


class ConfigError(NaraForgeError, ValueError):
    """Invalid run configuration."""


def format_error_message(error: Exception, context: str = "") -> str:
    """
    Format an error message in a user-friendly way.

    Args:
        error: The exception that occurred
        context: Additional context about what was being done

    Returns:
        Formatted error message
    """
    if isinstance(error, PrecisionExhausted):
        msg = (
            "Precision Exhausted\n\n"
            f"{error}\n\n"
            "Fix steps:\n"
            "1. Re-run with a larger --precision (e.g. double it)\n"
            "2. Or set NARAFORGE_PRECISION in your .env file\n"
        )
    elif isinstance(error, EpsilonNeverPositive):
        msg = (
            "Reduction Failed\n\n"
            f"{error}\n\n"
            "Fix steps:\n"
            "1. Try a different --big-m (a slightly larger M moves the start convergent)\n"
            "2. Increase --precision so more convergents can be certified\n"
        )
    elif isinstance(error, ConfigError):
        msg = (
            "Invalid Configuration\n\n"
            f"{error}\n\n"
            "Fix steps:\n"
            "1. Check the --base-min/--base-max/--n-max/--precision flags\n"
            "2. Check NARAFORGE_* entries in your .env file\n"
        )
    elif isinstance(error, (IndexOutOfRange, BaseTooSmall, InvalidInstance, HypothesisViolated)):
        msg = f"Invalid Input\n\n{error}\n"
    else:
        msg = f"Error Occurred\n\n{error}\n"

    if context:
        msg += f"\nContext: {context}\n"
    return msg


def display_error(console: Console, error: Exception, context: str = "") -> None:
    """
    Display a formatted error message to the console.

    Args:
        console: Rich Console instance
        error: The exception
        context: Additional context
    """
    error_text = Text(format_error_message(error, context), style="yellow")
    console.print(Panel(error_text, title="[!] Error", border_style="red"))
