from naraforge.tools.error_handler import (
    BaseTooSmall,
    ConfigError,
    EpsilonNeverPositive,
    IndexOutOfRange,
    PrecisionExhausted,
    display_error,
    format_error_message,
)


def test_hierarchy_doubles_as_builtin_errors():
    assert issubclass(BaseTooSmall, ValueError)
    assert issubclass(IndexOutOfRange, IndexError)
    assert issubclass(ConfigError, ValueError)


def test_messages_carry_fix_steps():
    text = format_error_message(PrecisionExhausted("only 12 terms"), context="reduce")
    assert text.startswith("Precision Exhausted")
    assert "--precision" in text
    assert text.rstrip().endswith("Context: reduce")
    assert "--big-m" in format_error_message(EpsilonNeverPositive("eps <= 0"))
    assert format_error_message(RuntimeError("boom")).startswith("Error Occurred")


def test_display_error(console):
    display_error(console, ConfigError("base_min must be at least 2"))
    out = console.file.getvalue()
    assert "Invalid Configuration" in out
    assert "base_min must be at least 2" in out
