"""Input contracts shared by the figure scripts.

Each figure kind names the CSV columns it needs; loading validates the
header and refuses empty tables before any drawing happens, so a bad input
never produces an output file.
"""

import csv
from dataclasses import dataclass
from pathlib import Path

FIGURE_KINDS = (
    "sim_vs_ode",
    "outbreak_kappa",
    "periodic_sweep",
    "ratio_scenarios",
    "seir_lambda_panel",
)

REQUIRED_COLUMNS = {
    "sim_vs_ode": ("t", "state", "sim_mean", "ci_lo", "ci_hi", "ode"),
    "outbreak_kappa": ("kappa", "n", "sim_mean", "ci_lo", "ci_hi", "ode", "mf"),
    "periodic_sweep": ("omega", "delta", "A", "outbreak"),
    "ratio_scenarios": ("scenario", "t", "s_inf"),
    "seir_lambda_panel": ("lambda", "t", "s_bar", "e_bar", "i_bar"),
}

# optional second input of the ratio_scenarios figure
SUMMARY_COLUMNS = ("scenario", "F", "s_final", "r_hat")


class FigureError(Exception):
    """Unusable input: missing file, wrong schema, or no data rows."""


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: the kind, its input CSV path(s), and labeling."""

    kind: str
    inputs: tuple
    out: Path | None = None
    title: str | None = None

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise FigureError(f"unknown figure kind {self.kind!r}")
        if not self.inputs:
            raise FigureError("at least one input CSV is required")


def load_table(path, required) -> list[dict]:
    """Rows of one CSV as dicts, after checking every required column."""
    path = Path(path)
    if not path.exists():
        raise FigureError(f"input file not found: {path}")
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in required:
            if column not in header:
                raise FigureError(
                    f"{path} is missing column {column!r} "
                    f"(expected {', '.join(required)})")
        rows = list(reader)
    if not rows:
        raise FigureError(f"{path} has a header but no data rows")
    return rows


def floats(rows, column):
    """One column as a list of floats."""
    return [float(row[column]) for row in rows]
