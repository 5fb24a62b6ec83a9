"""Monte Carlo state fractions against the limit curves: shaded CI bands,
simulation means as markers, ODE curves as solid lines."""

from matplotlib.figure import Figure

from figspec import REQUIRED_COLUMNS, FigureSpec, floats, load_table

REQUIRED = REQUIRED_COLUMNS["sim_vs_ode"]

STATE_STYLE = {
    "s": ("tab:blue", "susceptible"),
    "e": ("tab:orange", "exposed"),
    "i": ("tab:red", "infectious"),
    "r": ("tab:green", "recovered"),
}


def build_figure(spec: FigureSpec) -> Figure:
    rows = load_table(spec.inputs[0], REQUIRED)
    fig = Figure(figsize=(7.0, 4.5), layout="constrained")
    ax = fig.subplots()
    for state, (color, label) in STATE_STYLE.items():
        block = [r for r in rows if r["state"] == state]
        if not block:
            continue
        t = floats(block, "t")
        sim = floats(block, "sim_mean")
        ode = floats(block, "ode")
        if max(map(abs, sim + ode)) < 1e-12:
            continue
        ax.fill_between(t, floats(block, "ci_lo"), floats(block, "ci_hi"),
                        color=color, alpha=0.25, linewidth=0)
        ax.plot(t, ode, color=color, linewidth=1.6, label=f"{label} (limit)")
        ax.plot(t, sim, color=color, linestyle="none", marker="o",
                markersize=3.5, markevery=max(1, len(t) // 40),
                label=f"{label} (simulation)")
    ax.set_xlabel("t")
    ax.set_ylabel("fraction of vertices")
    ax.set_ylim(bottom=0.0)
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8, ncols=2)
    if spec.title:
        ax.set_title(spec.title)
    return fig
