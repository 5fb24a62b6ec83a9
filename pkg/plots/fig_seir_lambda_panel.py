"""SEIR limit curves across incubation rates: one panel per compartment,
one line per lambda."""

from matplotlib.figure import Figure

from figspec import REQUIRED_COLUMNS, FigureSpec, floats, load_table

REQUIRED = REQUIRED_COLUMNS["seir_lambda_panel"]

PANELS = (("s_bar", "susceptible"), ("e_bar", "exposed"),
          ("i_bar", "infectious"))
COLORS = ("tab:blue", "tab:orange", "tab:green", "tab:red", "tab:purple")


def build_figure(spec: FigureSpec) -> Figure:
    rows = load_table(spec.inputs[0], REQUIRED)
    lambdas = sorted({float(r["lambda"]) for r in rows})

    fig = Figure(figsize=(9.6, 3.4), layout="constrained")
    axes = fig.subplots(1, len(PANELS), squeeze=False)[0]
    for ax, (column, name) in zip(axes, PANELS):
        for idx, lam in enumerate(lambdas):
            block = [r for r in rows if float(r["lambda"]) == lam]
            block.sort(key=lambda r: float(r["t"]))
            ax.plot(floats(block, "t"), floats(block, column),
                    color=COLORS[idx % len(COLORS)], linewidth=1.5,
                    label=f"incubation rate {lam:g}")
        ax.set_title(name, fontsize=10)
        ax.set_xlabel("t")
        ax.grid(alpha=0.3)
    axes[0].set_ylabel("fraction of vertices")
    axes[-1].legend(fontsize=8)
    if spec.title:
        fig.suptitle(spec.title)
    return fig
