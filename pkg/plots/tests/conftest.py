"""Fixtures for the figure tests: a real set of harness CSVs, kept small."""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from epilimit.harness import ExperimentConfig, run_experiment


@pytest.fixture(scope="session")
def harness_csvs(tmp_path_factory):
    """Paths of one CSV per experiment kind, generated by the harness."""
    root = tmp_path_factory.mktemp("harness")
    configs = {
        "sim_vs_ode": {
            "kind": "sim_vs_ode",
            "graph": {"model": "erdos_renyi", "n": 60, "c": 2.0},
            "trials": 8, "t_max": 2.0, "seed": 5,
        },
        "outbreak_vs_kappa": {
            "kind": "outbreak_vs_kappa", "seed": 0, "trials": 30,
            "kappas": [2, 3], "n_values": [50],
        },
        "periodic_sweep": {
            "kind": "periodic_sweep",
            "omegas": [1.0], "deltas": [0.0, 0.5], "amplitudes": [0.0, 0.5],
        },
        "ratio_scenarios": {"kind": "ratio_scenarios"},
        "seir_lambda_panel": {"kind": "seir_lambda_panel"},
    }
    paths = {}
    for name, cfg in configs.items():
        out_dir = root / name
        exp = ExperimentConfig.from_config(cfg, out_dir=out_dir)
        paths[name] = run_experiment(exp)
    paths["ratio_scenarios_summary"] = (
        root / "ratio_scenarios" / "ratio_scenarios_summary.csv")
    return paths
