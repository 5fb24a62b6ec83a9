"""Experiment harness: config handling, trial summaries, and the CSV-emitting
experiment runners."""

import csv
import json
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from epilimit.errors import ConfigError
from epilimit.graphs import SparseGraph
from epilimit.harness import (
    ExperimentConfig,
    build_graph,
    limit_law,
    ratio_scenario_rates,
    run_outbreak_vs_kappa,
    run_periodic_sweep,
    run_ratio_scenarios,
    run_seir_lambda_panel,
    run_sim_vs_ode,
    summarize_trials,
)
from epilimit.degree import DegreeDistribution
from epilimit.outbreak import solve_constant_ratio
from epilimit.rates import Constant
from epilimit.sim import EpidemicParams, simulate


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestConfig:
    def test_unknown_kind_rejected(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(kind="nope")

    def test_bad_scalars_rejected(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(kind="periodic_sweep", trials=0)
        with pytest.raises(ConfigError):
            ExperimentConfig(kind="periodic_sweep", t_max=0.0)
        with pytest.raises(ConfigError):
            ExperimentConfig(kind="periodic_sweep", grid_step=-0.1)

    def test_from_config_needs_kind(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_config({"trials": 5})

    def test_from_config_records_defaults(self):
        cfg = ExperimentConfig.from_config({"kind": "outbreak_vs_kappa"})
        assert cfg.t_max == 200.0
        assert cfg.defaults_applied["t_max"] == 200.0
        assert cfg.defaults_applied["trials"] == 500
        assert "seed" in cfg.defaults_applied
        cfg2 = ExperimentConfig.from_config({"kind": "ratio_scenarios"})
        assert cfg2.t_max == 30.0

    def test_options_merge_both_spellings(self):
        cfg = ExperimentConfig.from_config({
            "kind": "outbreak_vs_kappa",
            "options": {"kappas": [3]},
            "n_values": [50],
        })
        assert cfg.options["kappas"] == [3]
        assert cfg.options["n_values"] == [50]

    def test_seed_and_out_dir_overrides(self, tmp_path):
        cfg = ExperimentConfig.from_config(
            {"kind": "periodic_sweep", "seed": 3},
            seed=11, out_dir=tmp_path / "x")
        assert cfg.seed == 11
        assert cfg.out_dir == tmp_path / "x"


class TestSummaries:
    def test_ci_formula(self):
        stack = np.array([[1.0, 2.0], [3.0, 2.0], [2.0, 2.0], [6.0, 2.0]])
        curve = summarize_trials(np.array([0.0, 1.0]), stack)
        assert_allclose(curve.mean, [3.0, 2.0])
        sd = np.std(stack[:, 0], ddof=1)
        assert_allclose(curve.half_width, [1.96 * sd / 2.0, 0.0])

    def test_single_trial_degenerate_band(self):
        curve = summarize_trials(np.array([0.0]), np.array([[5.0]]))
        assert curve.half_width[0] == 0.0

    def test_coverage_of_known_mean(self):
        # repeated single-vertex recovery experiments: the unit true mean
        # should land inside the 95% band in at least 90 of 100 repetitions
        master = np.random.SeedSequence(7)
        g = SparseGraph(1, [])
        params = EpidemicParams(alpha=0.0, beta=Constant(1.0),
                                rho=Constant(1.0), s0=1e-4, i0=1.0 - 1e-4)
        hits = 0
        for rep_seed in master.spawn(100):
            times = []
            for s in rep_seed.spawn(200):
                tr = simulate(g, params, t_max=50.0, seed=s)
                times.extend(t for t, v, src, dst in tr.events if dst == "R")
            curve = summarize_trials(np.zeros(1),
                                     np.asarray(times)[:, None])
            hits += abs(curve.mean[0] - 1.0) <= curve.half_width[0]
        assert hits >= 90


class TestGraphSpecs:
    def test_build_and_limit_law(self):
        spec = {"model": "erdos_renyi", "n": 50, "c": 2.0}
        g = build_graph(spec, np.random.SeedSequence(0))
        assert g.n == 50
        law = limit_law(spec)
        assert abs(law.mean - 2.0) < 1e-9
        cm = {"model": "configuration_model", "n": 40,
              "degree": {"kind": "regular", "k": 3}}
        assert limit_law(cm).pmf(3) == 1.0

    def test_bad_specs_rejected(self):
        with pytest.raises(ConfigError):
            build_graph({"model": "small_world", "n": 10},
                        np.random.SeedSequence(0))
        with pytest.raises(ConfigError):
            build_graph({"model": "erdos_renyi", "n": 10},
                        np.random.SeedSequence(0))
        with pytest.raises(ConfigError):
            limit_law({"n": 10})


class TestSimVsOde:
    CFG = {
        "kind": "sim_vs_ode",
        "graph": {"model": "erdos_renyi", "n": 60, "c": 2.0},
        "trials": 8,
        "t_max": 2.0,
        "seed": 5,
    }

    def test_csv_shape_and_meta(self, tmp_path):
        cfg = ExperimentConfig.from_config(dict(self.CFG), out_dir=tmp_path)
        out = run_sim_vs_ode(cfg)
        rows = read_rows(out)
        n_grid = int(round(2.0 / 0.05)) + 1
        assert list(rows[0]) == ["t", "state", "sim_mean", "ci_lo", "ci_hi", "ode"]
        assert len(rows) == 4 * n_grid
        assert {r["state"] for r in rows} == {"s", "e", "i", "r"}
        for r in rows:
            assert float(r["ci_lo"]) <= float(r["sim_mean"]) <= float(r["ci_hi"])
        meta = json.loads(out.with_suffix(".meta.json").read_text())
        assert meta["trials"] == 8
        assert "params" in meta["defaults_applied"]

    def test_reruns_and_threads_are_byte_stable(self, tmp_path):
        cfg = ExperimentConfig.from_config(dict(self.CFG), out_dir=tmp_path / "a")
        first = run_sim_vs_ode(cfg).read_bytes()
        again = run_sim_vs_ode(cfg).read_bytes()
        cfg2 = ExperimentConfig.from_config(dict(self.CFG), out_dir=tmp_path / "b")
        threaded = run_sim_vs_ode(cfg2, threads=2).read_bytes()
        assert first == again
        assert first == threaded

    def test_needs_graph_and_pure_alpha(self, tmp_path):
        with pytest.raises(ConfigError):
            run_sim_vs_ode(ExperimentConfig(kind="sim_vs_ode",
                                            out_dir=tmp_path))
        params = EpidemicParams(alpha=0.5, beta=Constant(1.0),
                                rho=Constant(1.0), s0=0.9, i0=0.1,
                                lam=Constant(1.0))
        cfg = ExperimentConfig(kind="sim_vs_ode",
                               graph={"model": "erdos_renyi", "n": 20, "c": 2.0},
                               params=params, trials=2, out_dir=tmp_path)
        with pytest.raises(ConfigError):
            run_sim_vs_ode(cfg)


class TestOutbreakVsKappa:
    def test_tracks_analytic_size(self, tmp_path):
        cfg = ExperimentConfig.from_config(
            {"kind": "outbreak_vs_kappa", "seed": 0,
             "options": {"kappas": list(range(2, 9)), "n_values": [400]}},
            out_dir=tmp_path)
        rows = read_rows(run_outbreak_vs_kappa(cfg, threads=4))
        assert len(rows) == 7
        for r in rows:
            assert abs(float(r["sim_mean"]) - float(r["ode"])) <= 0.02
            assert float(r["mf"]) > float(r["ode"])
        sub = next(r for r in rows if r["kappa"] == "2")
        assert float(sub["ci_lo"]) <= float(sub["ode"]) <= float(sub["ci_hi"])

        # the finite-size gap shrinks as n grows (sub-seeds depend only on
        # kappa and n, so the n=400 rows above are the reference points)
        small = ExperimentConfig.from_config(
            {"kind": "outbreak_vs_kappa", "seed": 0,
             "kappas": [4, 5], "n_values": [50, 150]},
            out_dir=tmp_path / "small")
        small_rows = read_rows(run_outbreak_vs_kappa(small, threads=4))
        for kappa in (4, 5):
            devs = {}
            for r in small_rows:
                if r["kappa"] == str(kappa):
                    devs[int(r["n"])] = abs(float(r["sim_mean"])
                                            - float(r["ode"]))
            big = next(r for r in rows if r["kappa"] == str(kappa))
            devs[400] = abs(float(big["sim_mean"]) - float(big["ode"]))
            assert devs[50] > devs[150] > devs[400]


class TestPeriodicSweep:
    def test_sweep_structure(self, tmp_path):
        cfg = ExperimentConfig.from_config(
            {"kind": "periodic_sweep",
             "omegas": [0.5, 10.0], "deltas": [0.0, 0.25, 0.5],
             "amplitudes": [0.0, 0.25, 0.5, 0.75]},
            out_dir=tmp_path)
        out = run_periodic_sweep(cfg)
        rows = read_rows(out)
        assert list(rows[0]) == ["omega", "delta", "A", "outbreak"]
        assert len(rows) == 24

        flat = solve_constant_ratio(DegreeDistribution.point_mass(3),
                                    1.0, 0.9).outbreak
        by_key = {(float(r["omega"]), float(r["delta"]), float(r["A"])):
                  float(r["outbreak"]) for r in rows}
        for (omega, delta, amp), val in by_key.items():
            if amp == 0.0:
                assert abs(val - flat) < 1e-9

        # fast oscillation averages out; the phase decides the sign of the
        # small leftover boundary effect
        amps = [0.25, 0.5, 0.75]
        up = [by_key[(0.5, 0.0, a)] for a in [0.0] + amps]
        down = [by_key[(0.5, 0.5, a)] for a in [0.0] + amps]
        assert all(a < b for a, b in zip(up, up[1:]))
        assert all(a > b for a, b in zip(down, down[1:]))
        assert max(abs(by_key[(0.5, d, a)] - flat)
                   for d in (0.0, 0.25, 0.5) for a in amps) < 0.02

        # slow oscillation leaves the phase fully exposed
        slow = [by_key[(10.0, d, 0.75)] for d in (0.0, 0.25, 0.5)]
        assert max(slow) - min(slow) > 0.1


class TestRatioScenarios:
    def test_shared_ratio_distinct_outcomes(self, tmp_path):
        beta_a, rho_a = ratio_scenario_rates("A")
        beta_b, rho_b = ratio_scenario_rates("B")
        for t in np.linspace(0.0, 20.0, 101):
            ratio_a = rho_a.evaluate(t) / beta_a.evaluate(t)
            ratio_b = rho_b.evaluate(t) / beta_b.evaluate(t)
            assert abs(ratio_a - ratio_b) < 1e-12
        with pytest.raises(ConfigError):
            ratio_scenario_rates("C")

        cfg = ExperimentConfig.from_config({"kind": "ratio_scenarios"},
                                           out_dir=tmp_path)
        curves = read_rows(run_ratio_scenarios(cfg))
        summary_path = cfg.out_dir / "ratio_scenarios_summary.csv"
        summary = {r["scenario"]: r for r in read_rows(summary_path)}
        assert list(curves[0]) == ["scenario", "t", "s_inf"]
        assert {r["scenario"] for r in curves} == {"A", "B"}
        assert max(float(r["t"]) for r in curves) <= 30.0 + 1e-9

        s_a = float(summary["A"]["s_final"])
        s_b = float(summary["B"]["s_final"])
        assert abs(s_a - s_b) > 0.05

        # each scenario's effective constant ratio reproduces its final size
        theta = DegreeDistribution.point_mass(3)
        for which, s_val in (("A", s_a), ("B", s_b)):
            r_hat = float(summary[which]["r_hat"])
            matched = solve_constant_ratio(theta, r_hat, 0.9)
            assert abs(matched.s_final - s_val) < 1e-5


class TestSeirLambdaPanel:
    def test_panel_curves(self, tmp_path):
        cfg = ExperimentConfig.from_config({"kind": "seir_lambda_panel"},
                                           out_dir=tmp_path)
        rows = read_rows(run_seir_lambda_panel(cfg))
        assert list(rows[0]) == ["lambda", "t", "s_bar", "e_bar", "i_bar"]
        lams = sorted({float(r["lambda"]) for r in rows})
        assert lams == [0.5, 1.0, 2.0]
        for lam in lams:
            start = next(r for r in rows
                         if float(r["lambda"]) == lam and float(r["t"]) == 0.0)
            assert_allclose(
                [float(start["s_bar"]), float(start["e_bar"]),
                 float(start["i_bar"])],
                [0.99, 0.01, 0.0], atol=1e-12)

        def i_at(lam, t):
            return next(float(r["i_bar"]) for r in rows
                        if float(r["lambda"]) == lam and float(r["t"]) == t)

        # faster incubation converts the seeded exposure sooner
        assert i_at(2.0, 1.0) > i_at(0.5, 1.0)
