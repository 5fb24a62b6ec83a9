"""Susceptible limit curves for the equal-ratio rate scenarios; with the
optional summary CSV the final sizes and effective rates are annotated."""

from matplotlib.figure import Figure

from figspec import (
    REQUIRED_COLUMNS,
    SUMMARY_COLUMNS,
    FigureSpec,
    floats,
    load_table,
)

REQUIRED = REQUIRED_COLUMNS["ratio_scenarios"]

COLORS = ("tab:blue", "tab:red", "tab:green", "tab:purple")


def build_figure(spec: FigureSpec) -> Figure:
    rows = load_table(spec.inputs[0], REQUIRED)
    summary = {}
    if len(spec.inputs) > 1:
        for r in load_table(spec.inputs[1], SUMMARY_COLUMNS):
            summary[r["scenario"]] = r

    fig = Figure(figsize=(7.0, 4.4), layout="constrained")
    ax = fig.subplots()
    scenarios = sorted({r["scenario"] for r in rows})
    for idx, which in enumerate(scenarios):
        color = COLORS[idx % len(COLORS)]
        block = [r for r in rows if r["scenario"] == which]
        block.sort(key=lambda r: float(r["t"]))
        label = f"scenario {which}"
        if which in summary:
            r_hat = float(summary[which]["r_hat"])
            label = f"scenario {which} (effective ratio {r_hat:.3g})"
            ax.axhline(float(summary[which]["s_final"]), color=color,
                       linestyle=":", linewidth=1.2)
        ax.plot(floats(block, "t"), floats(block, "s_inf"), color=color,
                linewidth=1.6, label=label)
    ax.set_xlabel("t")
    ax.set_ylabel("susceptible fraction")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    if spec.title:
        ax.set_title(spec.title)
    return fig
