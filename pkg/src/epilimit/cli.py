"""Command line front end.

Every subcommand reads a JSON config file, writes CSV artifacts into the
output directory, and exits 0 on success, 1 on a configuration problem, and
2 on a numerical failure (an integration or root solve that did not
converge).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .csvio import write_csv
from .degree import DegreeDistribution
from .errors import ConfigError, NumericalError
from .harness import ExperimentConfig, build_graph, run_experiment
from .ode import solve_seir_limit, solve_sir_limit
from .outbreak import (
    effective_rate,
    mean_field_outbreak,
    regular_outbreak,
    seir_outbreak,
    solve_constant_ratio,
    solve_time_varying,
    write_results_csv,
)
from .rates import RateFunction
from .sim import EpidemicParams, simulate

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; remap to the config error code."""

    def error(self, message):
        raise ConfigError(message)


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}") from exc


def _require(cfg: dict, key: str):
    try:
        return cfg[key]
    except KeyError as exc:
        raise ConfigError(f"config missing required key {key!r}") from exc


def _cmd_simulate(cfg: dict, seed, out: Path, threads: int) -> None:
    master = int(seed if seed is not None else cfg.get("seed", 0))
    graph_seed, sim_seed = np.random.SeedSequence(master).spawn(2)
    graph = build_graph(_require(cfg, "graph"), graph_seed)
    params = EpidemicParams.from_config(_require(cfg, "params"))
    t_max = float(cfg.get("t_max", 10.0))
    traj = simulate(graph, params, t_max,
                    grid_step=float(cfg.get("grid_step", 0.05)),
                    seed=sim_seed)
    traj.to_csv(out / "trajectory.csv")
    traj.events_to_csv(out / "events.csv")


def _cmd_ode(cfg: dict, seed, out: Path, threads: int) -> None:
    theta = DegreeDistribution.from_config(_require(cfg, "theta"))
    beta = RateFunction.from_config(_require(cfg, "beta"))
    rho = RateFunction.from_config(_require(cfg, "rho"))
    t_max = float(cfg.get("t_max", 10.0))
    grid_step = float(cfg.get("grid_step", 0.05))
    model = cfg.get("model", "sir")
    if model == "sir":
        sol = solve_sir_limit(theta, beta, rho, float(_require(cfg, "s0")),
                              t_max, grid_step=grid_step)
    elif model == "seir":
        lam = RateFunction.from_config(_require(cfg, "lambda"))
        sol = solve_seir_limit(theta, beta, rho, lam,
                               float(_require(cfg, "s0")),
                               float(cfg.get("e0", 0.0)),
                               float(cfg.get("i0", 0.0)),
                               t_max, grid_step=grid_step)
    else:
        raise ConfigError(f"unknown model {model!r}, expected 'sir' or 'seir'")
    sol.to_csv(out / "ode.csv")


def _cmd_outbreak(cfg: dict, seed, out: Path, threads: int) -> None:
    mode = cfg.get("mode", "constant_ratio")
    theta = DegreeDistribution.from_config(_require(cfg, "theta"))
    s0 = float(_require(cfg, "s0"))
    entries = []
    if mode == "constant_ratio":
        for r in _require(cfg, "r_values"):
            res = solve_constant_ratio(theta, float(r), s0)
            entries.append((None, float(r), s0, res))
    elif mode == "time_varying":
        beta = RateFunction.from_config(_require(cfg, "beta"))
        rho = RateFunction.from_config(_require(cfg, "rho"))
        res = solve_time_varying(theta, beta, rho, s0)
        entries.append((None, None, s0, res))
    elif mode == "seir":
        beta = RateFunction.from_config(_require(cfg, "beta"))
        rho = RateFunction.from_config(_require(cfg, "rho"))
        lam = RateFunction.from_config(_require(cfg, "lambda"))
        res = seir_outbreak(theta, beta, rho, lam, s0,
                            float(cfg.get("e0", 0.0)),
                            float(cfg.get("i0", 0.0)))
        entries.append((None, None, s0, res))
    else:
        raise ConfigError(f"unknown outbreak mode {mode!r}")
    write_results_csv(out / "outbreak.csv", entries)


def _cmd_compare_mf(cfg: dict, seed, out: Path, threads: int) -> None:
    r = float(_require(cfg, "r"))
    s0 = float(_require(cfg, "s0"))
    rows = []
    for kappa in _require(cfg, "kappas"):
        kappa = int(kappa)
        rows.append([kappa, r, s0, regular_outbreak(kappa, r, s0),
                     mean_field_outbreak(kappa, r, s0)])
    write_csv(out / "compare_mf.csv", ["kappa", "r", "s0", "sigma", "sigma_mf"], rows)


def _cmd_effective_rate(cfg: dict, seed, out: Path, threads: int) -> None:
    theta = DegreeDistribution.from_config(_require(cfg, "theta"))
    beta = RateFunction.from_config(_require(cfg, "beta"))
    rho = RateFunction.from_config(_require(cfg, "rho"))
    s0 = float(_require(cfg, "s0"))
    r_hat = effective_rate(theta, beta, rho, s0)
    write_csv(out / "effective_rate.csv", ["s0", "r_hat"], [[s0, r_hat]])
    print(f"effective rate r_hat = {r_hat:.12g}")


def _experiment_command(kind):
    def run(cfg: dict, seed, out: Path, threads: int) -> None:
        cfg = dict(cfg)
        cfg["kind"] = kind
        exp = ExperimentConfig.from_config(cfg, seed=seed, out_dir=out)
        run_experiment(exp, threads)
    return run


_COMMANDS = {
    "simulate": _cmd_simulate,
    "ode": _cmd_ode,
    "outbreak": _cmd_outbreak,
    "compare-mf": _cmd_compare_mf,
    "sweep-periodic": _experiment_command("periodic_sweep"),
    "ratio-scenarios": _experiment_command("ratio_scenarios"),
    "effective-rate": _cmd_effective_rate,
    "sim-vs-ode": _experiment_command("sim_vs_ode"),
}


def _build_parser() -> _Parser:
    parser = _Parser(prog="epilimit",
                     description="epidemics on sparse graphs and their limits")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON config file")
        p.add_argument("--seed", type=int, default=None,
                       help="master seed (overrides the config)")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--threads", type=int, default=1,
                       help="worker processes for Monte Carlo trials")
    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        cfg = _load_config(args.config)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        _COMMANDS[args.command](cfg, args.seed, out, args.threads)
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
