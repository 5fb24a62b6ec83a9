"""CSV output shared by every module that writes artifacts.

All files use a header row, 12 significant digits for floats, and LF line
endings regardless of platform, so identical inputs produce byte-identical
output.
"""

from __future__ import annotations

import numbers
from pathlib import Path

__all__ = ["format_value", "write_csv"]


def format_value(x) -> str:
    if isinstance(x, numbers.Integral):
        return str(int(x))
    if isinstance(x, numbers.Real):
        return f"{float(x):.12g}"
    return str(x)


def write_csv(path, header, rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_value(x) for x in row) + "\n")
