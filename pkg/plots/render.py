#!/usr/bin/env python3
"""Render a harness CSV into a figure image.

    render.py --kind <kind> --in <csv> [--in2 <csv>] --out <png>

Exit codes: 0 on success, 1 when the input is missing, has the wrong
columns, or carries no data rows.
"""

import argparse
import sys
from pathlib import Path

if __package__ in (None, ""):
    sys.path.insert(0, str(Path(__file__).resolve().parent))

from matplotlib.backends.backend_agg import FigureCanvasAgg

from figspec import FIGURE_KINDS, FigureError, FigureSpec

# keep output bytes independent of the library version string
PNG_METADATA = {"Software": "epilimit plots"}


def _builder(kind):
    import fig_outbreak_kappa
    import fig_periodic_sweep
    import fig_ratio_scenarios
    import fig_seir_lambda_panel
    import fig_sim_vs_ode

    return {
        "sim_vs_ode": fig_sim_vs_ode,
        "outbreak_kappa": fig_outbreak_kappa,
        "periodic_sweep": fig_periodic_sweep,
        "ratio_scenarios": fig_ratio_scenarios,
        "seir_lambda_panel": fig_seir_lambda_panel,
    }[kind].build_figure


def render(spec: FigureSpec, dpi: int = 150) -> Path:
    fig = _builder(spec.kind)(spec)
    out = Path(spec.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    FigureCanvasAgg(fig)
    fig.savefig(out, dpi=dpi, format="png", metadata=PNG_METADATA)
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render.py", description="render harness CSV output to PNG")
    parser.add_argument("--kind", required=True, choices=FIGURE_KINDS)
    parser.add_argument("--in", dest="input", required=True,
                        help="input CSV from the experiment harness")
    parser.add_argument("--in2", dest="input2", default=None,
                        help="secondary CSV (ratio_scenarios summary)")
    parser.add_argument("--out", required=True, help="output PNG path")
    parser.add_argument("--title", default=None)
    parser.add_argument("--dpi", type=int, default=150)
    args = parser.parse_args(argv)

    inputs = (args.input,) if args.input2 is None else (args.input, args.input2)
    try:
        spec = FigureSpec(kind=args.kind, inputs=inputs, out=Path(args.out),
                          title=args.title)
        render(spec, dpi=args.dpi)
    except FigureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
