"""Monte Carlo experiment orchestration and CSV artifact production.

Each experiment kind reproduces one figure-class protocol: simulation panels
against the limit curves, outbreak size against degree with the analytic and
mean-field values, the periodic-rate amplitude sweep, the equal-ratio scenario
pair, and the SEIR lambda panel. Experiments are configured from plain JSON
dicts, draw per-trial seeds by spawning the master seed (so results do not
depend on scheduling), and write CSV plus a JSON metadata sidecar recording
any defaults that were filled in.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import graphs
from .csvio import write_csv
from .degree import DegreeDistribution
from .errors import ConfigError
from .grids import uniform_ticks
from .ode import LimitSolution, solve_seir_limit, solve_sir_limit
from .outbreak import (
    effective_rate_from_solution,
    mean_field_outbreak,
    regular_outbreak,
    result_from_solution,
    sir_extinction_solution,
)
from .rates import Constant, LinearRamp, RateFunction, RateQuotient, Sinusoidal
from .sim import EpidemicParams, simulate

__all__ = [
    "ExperimentConfig",
    "SummaryCurve",
    "build_graph",
    "limit_law",
    "run_experiment",
    "run_sim_vs_ode",
    "run_outbreak_vs_kappa",
    "run_periodic_sweep",
    "run_ratio_scenarios",
    "run_seir_lambda_panel",
    "summarize_trials",
]

EXPERIMENT_KINDS = (
    "sim_vs_ode",
    "outbreak_vs_kappa",
    "periodic_sweep",
    "ratio_scenarios",
    "seir_lambda_panel",
)

STATE_COLUMNS = ("s", "e", "i", "r")


def build_graph(spec: dict, seed) -> graphs.SparseGraph:
    """Realize a graph spec dict: {"model": "erdos_renyi", "n", "c"} or
    {"model": "configuration_model", "n", "degree": <law config>}."""
    try:
        model = spec["model"]
        if model == "erdos_renyi":
            return graphs.erdos_renyi(int(spec["n"]), float(spec["c"]), seed)
        if model == "configuration_model":
            law = DegreeDistribution.from_config(spec["degree"])
            return graphs.configuration_model(int(spec["n"]), law, seed)
    except KeyError as exc:
        raise ConfigError(f"graph spec missing field {exc}") from exc
    raise ConfigError(f"unknown graph model {model!r}")


def limit_law(spec: dict) -> DegreeDistribution:
    """Degree law of the graph spec's large-n local limit."""
    try:
        model = spec["model"]
        if model == "erdos_renyi":
            return DegreeDistribution.poisson(float(spec["c"]))
        if model == "configuration_model":
            return DegreeDistribution.from_config(spec["degree"])
    except KeyError as exc:
        raise ConfigError(f"graph spec missing field {exc}") from exc
    raise ConfigError(f"unknown graph model {model!r}")


@dataclass
class ExperimentConfig:
    """One experiment: a kind, its inputs, trial count, master seed, the time
    grid, and the output directory. ``options`` carries kind-specific grids
    (kappa lists, sweep grids, lambda lists). ``defaults_applied`` records
    every value that was filled in rather than given, and lands in the
    metadata sidecar next to each CSV."""

    kind: str
    graph: dict | None = None
    params: EpidemicParams | None = None
    trials: int = 500
    seed: int = 0
    t_max: float = 10.0
    grid_step: float = 0.05
    out_dir: Path = Path("out")
    options: dict = field(default_factory=dict)
    defaults_applied: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.t_max <= 0:
            raise ConfigError("t_max must be > 0")
        if self.grid_step <= 0:
            raise ConfigError("grid_step must be > 0")
        self.out_dir = Path(self.out_dir)

    @classmethod
    def from_config(cls, cfg: dict, *, seed=None, out_dir=None) -> "ExperimentConfig":
        cfg = dict(cfg)
        kind = cfg.pop("kind", None)
        if kind is None:
            raise ConfigError("experiment config needs a 'kind'")
        defaults: dict = {}

        def take(name, fallback):
            if name in cfg:
                return cfg.pop(name)
            defaults[name] = fallback
            return fallback

        graph = cfg.pop("graph", None)
        params_cfg = cfg.pop("params", None)
        params = None
        if params_cfg is not None:
            params = EpidemicParams.from_config(params_cfg)
        elif kind == "sim_vs_ode":
            params = _default_params(graph, defaults)
        trials = int(take("trials", 500))
        master = int(seed if seed is not None else take("seed", 0))
        # Outbreak runs must reach extinction; the scenario curves are shown
        # out to t = 30. Panel comparisons default to the figure window.
        t_max_default = {"outbreak_vs_kappa": 200.0, "ratio_scenarios": 30.0}
        t_max = float(take("t_max", t_max_default.get(kind, 10.0)))
        grid_step = float(take("grid_step", 0.05))
        out = Path(out_dir if out_dir is not None else cfg.pop("out_dir", "out"))
        # Kind-specific knobs may sit at the top level or under "options".
        options = cfg.pop("options", {}) | cfg
        return cls(kind=kind, graph=graph, params=params, trials=trials,
                   seed=master, t_max=t_max, grid_step=grid_step, out_dir=out,
                   options=options, defaults_applied=defaults)


def _default_params(graph, defaults: dict) -> EpidemicParams:
    # Figure-style panels leave initial fractions unstated; the reconstruction
    # (SIR: s0=0.9; rates all 1) is recorded in the metadata sidecar.
    defaults["params"] = {
        "alpha": 0.0, "beta": {"kind": "constant", "value": 1.0},
        "rho": {"kind": "constant", "value": 1.0}, "s0": 0.9, "i0": 0.1,
    }
    return EpidemicParams(alpha=0.0, beta=Constant(1.0), rho=Constant(1.0),
                          s0=0.9, i0=0.1)


@dataclass(frozen=True)
class SummaryCurve:
    """Per-grid-time Monte Carlo mean and 95% half-width (1.96*sd/sqrt(M))."""

    grid: np.ndarray
    mean: np.ndarray
    half_width: np.ndarray


def summarize_trials(grid: np.ndarray, stack: np.ndarray) -> SummaryCurve:
    """stack has shape (M, len(grid)); normal-approximation CI as in the
    figure captions."""
    m = stack.shape[0]
    mean = stack.mean(axis=0)
    if m > 1:
        half = 1.96 * stack.std(axis=0, ddof=1) / np.sqrt(m)
    else:
        half = np.zeros_like(mean)
    return SummaryCurve(grid, mean, half)


def _write_metadata(csv_path: Path, cfg: ExperimentConfig) -> None:
    meta = {
        "kind": cfg.kind,
        "graph": cfg.graph,
        "params": cfg.params.to_config() if cfg.params is not None else None,
        "trials": cfg.trials,
        "seed": cfg.seed,
        "t_max": cfg.t_max,
        "grid_step": cfg.grid_step,
        "options": cfg.options,
        "defaults_applied": cfg.defaults_applied,
        "note": "defaults_applied lists reconstructed values that were not "
                "part of the scenario description",
    }
    path = csv_path.with_suffix(".meta.json")
    path.write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n",
                    encoding="ascii")


def _trial_curves(graph_spec, params, t_max, grid_step, child_seed) -> np.ndarray:
    g_seed, s_seed = child_seed.spawn(2)
    g = build_graph(graph_spec, g_seed)
    tr = simulate(g, params, t_max, grid_step=grid_step, seed=s_seed)
    return tr.fractions


def _trial_outbreak(graph_spec, params, t_max, grid_step, child_seed) -> float:
    g_seed, s_seed = child_seed.spawn(2)
    g = build_graph(graph_spec, g_seed)
    tr = simulate(g, params, t_max, grid_step=grid_step, seed=s_seed)
    return tr.final_outbreak()


def _run_trials(fn, cfg: ExperimentConfig, graph_spec, params, t_max, threads):
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.trials)
    args = [(graph_spec, params, t_max, cfg.grid_step, child) for child in children]
    if threads and threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(fn, *zip(*args)))
    else:
        results = [fn(*a) for a in args]
    return results


def run_sim_vs_ode(cfg: ExperimentConfig, threads: int = 1) -> Path:
    """M simulation trials (fresh graph each) against the limit curves;
    long-format CSV with one row per (state, grid time)."""
    if cfg.graph is None or cfg.params is None:
        raise ConfigError("sim_vs_ode needs a graph spec and epidemic params")
    p = cfg.params
    if p.alpha not in (0.0, 1.0):
        raise ConfigError("limit curves exist for alpha = 0 (SIR) or 1 (SEIR) only")

    stacks = np.asarray(_run_trials(_trial_curves, cfg, cfg.graph, p, cfg.t_max, threads))
    grid = uniform_ticks(cfg.t_max, cfg.grid_step)

    theta = limit_law(cfg.graph)
    if p.alpha == 0.0:
        sol = solve_sir_limit(theta, p.beta, p.rho, p.s0, cfg.t_max,
                              grid_step=cfg.grid_step)
        ode = {"s": sol.s_inf, "e": np.zeros_like(sol.s_inf), "i": sol.i_inf}
    else:
        sol = solve_seir_limit(theta, p.beta, p.rho, p.lam, p.s0, p.e0, p.i0,
                               cfg.t_max, grid_step=cfg.grid_step)
        ode = {"s": sol.s_bar, "e": sol.e_bar, "i": sol.i_bar}
    ode["r"] = 1.0 - ode["s"] - ode["e"] - ode["i"]
    if not np.array_equal(sol.grid, grid):
        raise ConfigError("simulation and ODE grids diverged")

    def rows():
        for idx, state in enumerate(STATE_COLUMNS):
            curve = summarize_trials(grid, stacks[:, :, idx])
            for j, t in enumerate(grid):
                yield [t, state, curve.mean[j],
                       curve.mean[j] - curve.half_width[j],
                       curve.mean[j] + curve.half_width[j],
                       ode[state][j]]

    out = cfg.out_dir / "sim_vs_ode.csv"
    write_csv(out, ["t", "state", "sim_mean", "ci_lo", "ci_hi", "ode"], rows())
    _write_metadata(out, cfg)
    return out


def run_outbreak_vs_kappa(cfg: ExperimentConfig, threads: int = 1) -> Path:
    """Monte Carlo outbreak size on random kappa-regular graphs against the
    analytic final size and its mean-field comparator."""
    opts = cfg.options
    kappas = [int(k) for k in opts.get("kappas", range(2, 9))]
    n_values = [int(n) for n in opts.get("n_values", [400])]
    beta = _rate_option(opts, "beta", cfg.defaults_applied, 0.5)
    rho = _rate_option(opts, "rho", cfg.defaults_applied, 1.0)
    s0 = float(opts.get("s0", 0.95))
    if "s0" not in opts:
        cfg.defaults_applied["s0"] = 0.95
    r = rho.evaluate(0.0) / beta.evaluate(0.0)

    params = EpidemicParams(alpha=0.0, beta=beta, rho=rho, s0=s0, i0=1.0 - s0)

    def rows():
        for kappa in kappas:
            sigma = regular_outbreak(kappa, r, s0)
            sigma_mf = mean_field_outbreak(kappa, r, s0)
            for n in n_values:
                spec = {"model": "configuration_model", "n": n,
                        "degree": {"kind": "regular", "k": kappa}}
                sub = ExperimentConfig(
                    kind=cfg.kind, graph=spec, params=params,
                    trials=cfg.trials, seed=cfg.seed + 1000 * kappa + n,
                    t_max=cfg.t_max, grid_step=cfg.grid_step,
                    out_dir=cfg.out_dir)
                vals = np.asarray(_run_trials(
                    _trial_outbreak, sub, spec, params, cfg.t_max, threads))
                mean = float(vals.mean())
                half = (1.96 * float(vals.std(ddof=1)) / np.sqrt(len(vals))
                        if len(vals) > 1 else 0.0)
                yield [kappa, n, mean, mean - half, mean + half,
                       1.0 - sigma, 1.0 - sigma_mf]

    out = cfg.out_dir / "outbreak_vs_kappa.csv"
    write_csv(out, ["kappa", "n", "sim_mean", "ci_lo", "ci_hi", "ode", "mf"], rows())
    _write_metadata(out, cfg)
    return out


def _rate_option(opts: dict, name: str, defaults: dict, fallback: float) -> RateFunction:
    if name in opts:
        return RateFunction.from_config(opts[name])
    defaults[name] = {"kind": "constant", "value": fallback}
    return Constant(fallback)


def _theta_option(opts: dict, defaults: dict) -> DegreeDistribution:
    if "theta" in opts:
        return DegreeDistribution.from_config(opts["theta"])
    defaults["theta"] = {"kind": "regular", "k": 3}
    return DegreeDistribution.point_mass(3)


def run_periodic_sweep(cfg: ExperimentConfig) -> Path:
    """ODE-only sweep of the outbreak size under the periodic infection rate
    base 1, amplitude A, period omega, phase delta, with rho constant 1."""
    opts = cfg.options
    omegas = [float(w) for w in opts.get("omegas", (0.5, 1.0, 5.0, 10.0))]
    deltas = [float(d) for d in opts.get("deltas", (0.0, 0.25, 0.5))]
    amplitudes = [float(a) for a in opts.get("amplitudes", (0.0, 0.25, 0.5, 0.75))]
    theta = _theta_option(opts, cfg.defaults_applied)
    s0 = float(opts.get("s0", 0.9))
    if "s0" not in opts:
        cfg.defaults_applied["s0"] = 0.9
    rho = Constant(1.0)

    def rows():
        for omega in omegas:
            for delta in deltas:
                for amp in amplitudes:
                    beta = (Constant(1.0) if amp == 0.0 else
                            Sinusoidal(1.0, amp, omega, delta))
                    sol = sir_extinction_solution(theta, beta, rho, s0,
                                                  grid_step=cfg.grid_step)
                    res = result_from_solution(sol)
                    yield [omega, delta, amp, res.outbreak]

    out = cfg.out_dir / "periodic_sweep.csv"
    write_csv(out, ["omega", "delta", "A", "outbreak"], rows())
    _write_metadata(out, cfg)
    return out


def ratio_scenario_rates(which: str) -> tuple[RateFunction, RateFunction]:
    """The equal-ratio scenario pair: ratio rho/beta follows 1.5 + sin(pi*t)
    in both; scenario A ramps rho from 0.5 up to 1.5 over [0, 10], scenario B
    ramps it down from 1.5 to 0.5."""
    ratio = Sinusoidal(1.5, 1.0, 2.0, 0.0)
    if which == "A":
        rho = LinearRamp(0.5, 1.5, 0.0, 10.0)
    elif which == "B":
        rho = LinearRamp(1.5, 0.5, 0.0, 10.0)
    else:
        raise ConfigError(f"unknown ratio scenario {which!r}")
    return RateQuotient(rho, ratio), rho


def run_ratio_scenarios(cfg: ExperimentConfig) -> Path:
    """Limit susceptible curves and final sizes for the two equal-ratio
    scenarios, plus each scenario's effective constant ratio."""
    opts = cfg.options
    theta = _theta_option(opts, cfg.defaults_applied)
    s0 = float(opts.get("s0", 0.9))
    if "s0" not in opts:
        cfg.defaults_applied["s0"] = 0.9

    curve_rows = []
    summary_rows = []
    for which in ("A", "B"):
        beta, rho = ratio_scenario_rates(which)
        sol = sir_extinction_solution(theta, beta, rho, s0,
                                      grid_step=cfg.grid_step)
        res = result_from_solution(sol)
        r_hat = effective_rate_from_solution(sol)
        keep = sol.grid <= cfg.t_max + 1e-12
        for t, s_val in zip(sol.grid[keep], sol.s_inf[keep]):
            curve_rows.append([which, t, s_val])
        summary_rows.append([which, res.F, res.s_final, r_hat])

    out = cfg.out_dir / "ratio_scenarios_curves.csv"
    write_csv(out, ["scenario", "t", "s_inf"], curve_rows)
    summary = cfg.out_dir / "ratio_scenarios_summary.csv"
    write_csv(summary, ["scenario", "F", "s_final", "r_hat"], summary_rows)
    _write_metadata(out, cfg)
    return out


def run_seir_lambda_panel(cfg: ExperimentConfig) -> Path:
    """ODE-only SEIR panel: s, e, i limit curves for several exposure rates
    lambda under a shared beta, rho, and degree law."""
    opts = cfg.options
    theta = _theta_option(opts, cfg.defaults_applied)
    beta = _rate_option(opts, "beta", cfg.defaults_applied, 1.0)
    rho = _rate_option(opts, "rho", cfg.defaults_applied, 1.0)
    lambdas = [float(v) for v in opts.get("lambdas", (0.5, 1.0, 2.0))]
    e0 = float(opts.get("e0", 0.01))
    i0 = float(opts.get("i0", 0.0))
    s0 = float(opts.get("s0", 1.0 - e0 - i0))
    if "s0" not in opts:
        cfg.defaults_applied.update({"s0": s0, "e0": e0, "i0": i0})

    def rows():
        for lam_val in lambdas:
            sol = solve_seir_limit(theta, beta, rho, Constant(lam_val),
                                   s0, e0, i0, cfg.t_max,
                                   grid_step=cfg.grid_step)
            for j, t in enumerate(sol.grid):
                yield [lam_val, t, sol.s_bar[j], sol.e_bar[j], sol.i_bar[j]]

    out = cfg.out_dir / "seir_lambda_panel.csv"
    write_csv(out, ["lambda", "t", "s_bar", "e_bar", "i_bar"], rows())
    _write_metadata(out, cfg)
    return out


def run_experiment(cfg: ExperimentConfig, threads: int = 1) -> Path:
    if cfg.kind == "sim_vs_ode":
        return run_sim_vs_ode(cfg, threads)
    if cfg.kind == "outbreak_vs_kappa":
        return run_outbreak_vs_kappa(cfg, threads)
    if cfg.kind == "periodic_sweep":
        return run_periodic_sweep(cfg)
    if cfg.kind == "ratio_scenarios":
        return run_ratio_scenarios(cfg)
    return run_seir_lambda_panel(cfg)
