"""
Render - Formats scan rows as an aligned text table, CSV or JSON
"""

import json
from typing import List, Optional, Sequence

from scans import ScanRow

# columns per table kind
TWO_BRIDGE_COLUMNS = ("link", "sigma", "m", "genus_gt")
MONTESINOS_COLUMNS = ("link", "mu", "sigma", "h1", "genus_gt")
SLICE_COLUMNS = ("link", "sigma", "h1", "verdict")

_TITLES = {
    "link": "Link",
    "mu": "mu",
    "sigma": "sigma",
    "h1": "H1",
    "m": "m",
    "genus_gt": "g* >",
    "verdict": "verdict",
}


def _cell(row: ScanRow, column: str) -> str:
    value = getattr(row, column)
    return "" if value is None else str(value)


def render_text(rows: Sequence[ScanRow], columns: Sequence[str]) -> str:
    table = [[_TITLES[c] for c in columns]] + [[_cell(r, c) for c in columns] for r in rows]
    widths = [max(len(line[i]) for line in table) for i in range(len(columns))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip() for line in table]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def render_csv(rows: Sequence[ScanRow], columns: Sequence[str]) -> str:
    """Comma-joined cells without quoting; link names such as S(67,39) are written as they are"""
    lines = [",".join(columns)] + [",".join(_cell(row, c) for c in columns) for row in rows]
    return "\n".join(lines) + "\n"


def render_json(rows: Sequence[ScanRow]) -> str:
    return json.dumps([row.to_dict() for row in rows], indent=2) + "\n"


def render(rows: Sequence[ScanRow], fmt: str = "text",
           columns: Optional[Sequence[str]] = None) -> str:
    """Rows in the requested format; json always carries every key"""
    columns = columns or MONTESINOS_COLUMNS
    if fmt == "text":
        return render_text(rows, columns)
    if fmt == "csv":
        return render_csv(rows, columns)
    if fmt == "json":
        return render_json(rows)
    raise ValueError(f"unknown format {fmt!r}")


def rows_from_json(text: str) -> List[ScanRow]:
    return [ScanRow.from_dict(item) for item in json.loads(text)]
