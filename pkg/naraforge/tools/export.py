"""Rendering of report rows as a rich table, CSV or JSON.

Rows are plain dicts; the column list fixes the order so CSV and JSON output
is byte-identical for identical rows.
"""

import csv
import io
import json
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

from rich.console import Console
from rich.table import Table

from .repdigit import SearchHit

SUPPORTED_FORMATS = ("table", "csv", "json")

HIT_COLUMNS = ("n", "value", "base", "digits", "patterns")
STEP_COLUMNS = ("step", "rho", "convergent_index", "q", "epsilon_lower", "bound",
                "variable", "cases", "w_floor", "base_mode", "certified")
SEQUENCE_COLUMNS = ("n", "value")
VALUE_COLUMNS = ("value", "n", "representations")
BOUND_COLUMNS = ("rho", "H", "lemma3_bound", "capped_bound", "theorem_cap", "log_h_check")
SUMMARY_COLUMNS = ("rho", "ell_max", "m_max", "n_max", "certified")

_TEXT_COLUMNS = ("digits", "patterns", "variable", "representations")

Row = Dict[str, object]


def hit_rows(hits: Iterable[SearchHit]) -> List[Row]:
    rows = []
    for hit in hits:
        rows.append({
            "n": hit.n,
            "value": hit.value,
            "base": hit.base,
            "digits": "".join(str(d) for d in hit.digit_string.digits),
            "patterns": ";".join(p.describe() for p in hit.patterns),
        })
    return rows


def value_rows(rows: Iterable[Row]) -> List[Row]:
    """Fold hit rows into one row per value listing every representation, e.g. 3332200_5;332223_7."""
    grouped: Dict[int, List[Row]] = {}
    for row in sorted(rows, key=lambda r: (r["value"], r["base"])):
        grouped.setdefault(row["value"], []).append(row)
    return [
        {
            "value": value,
            "n": group[0]["n"],
            "representations": ";".join(f"{r['digits']}_{r['base']}" for r in group),
        }
        for value, group in grouped.items()
    ]


def to_csv(rows: Sequence[Row], columns: Sequence[str]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(["" if row.get(c) is None else row.get(c) for c in columns])
    return buffer.getvalue()


def to_json(rows: Sequence[Row], columns: Sequence[str]) -> str:
    ordered = [{c: row.get(c) for c in columns} for row in rows]
    return json.dumps(ordered, indent=2) + "\n"


def to_table(rows: Sequence[Row], columns: Sequence[str], title: Optional[str] = None) -> Table:
    table = Table(title=title)
    for c in columns:
        table.add_column(c, justify="left" if c in _TEXT_COLUMNS else "right")
    for row in rows:
        table.add_row(*["" if row.get(c) is None else str(row.get(c)) for c in columns])
    return table


def render_rows(rows: Sequence[Row], columns: Sequence[str], fmt: str,
                console: Console, title: Optional[str] = None) -> None:
    """Print rows to the console in the requested format."""
    if fmt not in SUPPORTED_FORMATS:
        raise ValueError(f"unsupported format {fmt!r}, expected one of {SUPPORTED_FORMATS}")
    if fmt == "table":
        console.print(to_table(rows, columns, title))
    elif fmt == "csv":
        console.file.write(to_csv(rows, columns))
    else:
        console.file.write(to_json(rows, columns))


def export_rows(rows: Sequence[Row], columns: Sequence[str], directory: str, stem: str) -> str:
    """Write <stem>.csv and <stem>.json into directory; returns a STATUS line."""
    out_dir = Path(directory)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / f"{stem}.csv").write_text(to_csv(rows, columns), encoding="utf-8")
    (out_dir / f"{stem}.json").write_text(to_json(rows, columns), encoding="utf-8")
    return f"STATUS: OK | exported={out_dir / stem}.{{csv,json}} | rows={len(rows)}"
