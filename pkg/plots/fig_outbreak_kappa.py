"""Outbreak size on random regular graphs: simulation means with error bars
per graph size, the analytic final size, and its mean-field comparator."""

from matplotlib.figure import Figure

from figspec import REQUIRED_COLUMNS, FigureSpec, load_table

REQUIRED = REQUIRED_COLUMNS["outbreak_kappa"]

MARKERS = ("o", "s", "^", "D", "v")


def build_figure(spec: FigureSpec) -> Figure:
    rows = load_table(spec.inputs[0], REQUIRED)
    fig = Figure(figsize=(6.4, 4.2), layout="constrained")
    ax = fig.subplots()

    analytic = {}
    for r in rows:
        analytic[int(r["kappa"])] = (float(r["ode"]), float(r["mf"]))
    kappas = sorted(analytic)
    ax.plot(kappas, [analytic[k][0] for k in kappas], "-", color="black",
            linewidth=1.6, label="limit outbreak")
    ax.plot(kappas, [analytic[k][1] for k in kappas], "--", color="gray",
            linewidth=1.4, label="mean-field outbreak")

    sizes = sorted({int(r["n"]) for r in rows})
    for idx, n in enumerate(sizes):
        block = [r for r in rows if int(r["n"]) == n]
        block.sort(key=lambda r: int(r["kappa"]))
        x = [int(r["kappa"]) for r in block]
        y = [float(r["sim_mean"]) for r in block]
        lo = [y_j - float(r["ci_lo"]) for y_j, r in zip(y, block)]
        hi = [float(r["ci_hi"]) - y_j for y_j, r in zip(y, block)]
        ax.errorbar(x, y, yerr=[lo, hi], fmt=MARKERS[idx % len(MARKERS)],
                    markersize=5, capsize=3, linestyle="none",
                    label=f"simulation, n={n}")

    ax.set_xlabel("degree")
    ax.set_ylabel("outbreak size")
    ax.set_xticks(kappas)
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    if spec.title:
        ax.set_title(spec.title)
    return fig
