"""Outbreak size under a periodically modulated infection rate: one panel
per period, amplitude on the x axis, one line per phase offset."""

from matplotlib.figure import Figure

from figspec import REQUIRED_COLUMNS, FigureSpec, load_table

REQUIRED = REQUIRED_COLUMNS["periodic_sweep"]


def build_figure(spec: FigureSpec) -> Figure:
    rows = load_table(spec.inputs[0], REQUIRED)
    omegas = sorted({float(r["omega"]) for r in rows})
    deltas = sorted({float(r["delta"]) for r in rows})

    fig = Figure(figsize=(3.1 * len(omegas) + 0.8, 3.4), layout="constrained")
    axes = fig.subplots(1, len(omegas), sharey=True, squeeze=False)[0]
    for ax, omega in zip(axes, omegas):
        for delta in deltas:
            block = [r for r in rows
                     if float(r["omega"]) == omega
                     and float(r["delta"]) == delta]
            block.sort(key=lambda r: float(r["A"]))
            ax.plot([float(r["A"]) for r in block],
                    [float(r["outbreak"]) for r in block],
                    marker="o", markersize=4,
                    label=f"phase {delta:g}")
        ax.set_title(f"period {omega:g}", fontsize=10)
        ax.set_xlabel("amplitude")
        ax.grid(alpha=0.3)
    axes[0].set_ylabel("outbreak size")
    axes[-1].legend(fontsize=8)
    if spec.title:
        fig.suptitle(spec.title)
    return fig
