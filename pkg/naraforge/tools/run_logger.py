"""Run logging utilities for naraforge.

Plain-text log of a run with one short line per entry, kept next to the
other artifacts in the output directory.
"""

import os
import time
from typing import Optional

_LOG_FILE_NAME = "run.log"
_MAX_LOG_SIZE = 1024 * 1024  # 1MB
_BACKUP_COUNT = 3

_output_dir: Optional[str] = None


def set_output_dir(path: Optional[str]) -> None:
    """Direct run.log into `path`; None disables logging."""
    global _output_dir
    _output_dir = path
    if path:
        os.makedirs(path, exist_ok=True)


def get_log_path() -> Optional[str]:
    if not _output_dir:
        return None
    return os.path.join(_output_dir, _LOG_FILE_NAME)


def _rotate_log_if_needed(path: str) -> None:
    try:
        if not os.path.exists(path) or os.path.getsize(path) < _MAX_LOG_SIZE:
            return
        for i in range(_BACKUP_COUNT - 1, 0, -1):
            src, dst = f"{path}.{i}", f"{path}.{i + 1}"
            if os.path.exists(src):
                os.replace(src, dst)
        os.replace(path, f"{path}.1")
    except OSError:
        pass


def _append(level: str, message: str) -> None:
    path = get_log_path()
    if not path:
        return
    _rotate_log_if_needed(path)
    ts = time.strftime("%Y-%m-%d %H:%M:%S", time.localtime())
    line = f"{ts} | {level} | {message.strip()}".rstrip() + "\n"
    try:
        with open(path, "a", encoding="utf-8") as f:
            f.write(line)
    except OSError:
        return


def log_event(message: str) -> None:
    """Append "YYYY-MM-DD HH:MM:SS | INFO | message" to run.log."""
    _append("INFO", message)


def log_error(message: str) -> None:
    _append("ERROR", message)


def log_summary(status: str, stages: int, details: str = "") -> None:
    """Append a final run summary line.

    status: short code like "MATCH", "MISMATCH", "REDUCTION_FAILED", "ERROR".
    """
    message = f"Run summary | status={status} | stages={stages}"
    if details:
        message += f" | {details.strip()}"
    log_event(message)
