"""Event-driven epidemic simulation: state machine, rates, and statistics."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import stats

from epilimit.errors import ConfigError, NumericalError
from epilimit.graphs import SparseGraph, erdos_renyi
from epilimit.rates import Constant, Sinusoidal
from epilimit.sim import EpidemicParams, simulate

from invariant_checks import (
    check_edge_consistent_infections,
    check_monotone_states,
    check_recovery_times_exponential,
)

BETA1 = Constant(1.0)
RHO1 = Constant(1.0)


def sir_params(s0=0.9, i0=0.1, beta=BETA1, rho=RHO1):
    return EpidemicParams(alpha=0.0, beta=beta, rho=rho, s0=s0, i0=i0)


class TestParams:
    def test_alpha_range(self):
        with pytest.raises(ConfigError):
            EpidemicParams(alpha=1.5, beta=BETA1, rho=RHO1, s0=0.9, i0=0.1)

    def test_fractions_must_sum_to_one(self):
        with pytest.raises(ConfigError):
            EpidemicParams(alpha=0.0, beta=BETA1, rho=RHO1, s0=0.5, i0=0.4)

    def test_sir_cannot_seed_exposed(self):
        with pytest.raises(ConfigError):
            EpidemicParams(alpha=0.0, beta=BETA1, rho=RHO1,
                           s0=0.9, e0=0.05, i0=0.05, lam=Constant(1.0))

    def test_seir_needs_lambda(self):
        with pytest.raises(ConfigError):
            EpidemicParams(alpha=1.0, beta=BETA1, rho=RHO1, s0=0.9, i0=0.1)

    def test_config_round_trip(self):
        p = EpidemicParams(alpha=1.0, beta=BETA1, rho=RHO1,
                           s0=0.9, e0=0.04, i0=0.06, lam=Constant(2.0))
        q = EpidemicParams.from_config(p.to_config())
        assert q.alpha == 1.0
        assert q.e0 == 0.04
        assert q.lam(3.0) == 2.0


class TestEdgelessGraph:
    """With no edges the states decouple: S stays put, I decays at rho."""

    def test_susceptibles_never_move(self):
        traj = simulate(SparseGraph(400, []), sir_params(s0=0.5, i0=0.5),
                        t_max=20.0, seed=np.random.SeedSequence(0))
        s_curve = traj.fractions[:, 0]
        assert np.all(s_curve == s_curve[0])

    def test_extinction_empties_active_states(self):
        traj = simulate(SparseGraph(200, []), sir_params(), t_max=50.0,
                        seed=np.random.SeedSequence(1))
        assert traj.extinction_time is not None
        frac = traj.fractions_at(traj.extinction_time)
        assert frac[1] == 0.0 and frac[2] == 0.0

    def test_final_outbreak_is_initial_non_susceptible(self):
        traj = simulate(SparseGraph(300, []), sir_params(), t_max=60.0,
                        seed=np.random.SeedSequence(2))
        initial_non_s = 1.0 - traj.initial_counts[0] / 300
        assert_allclose(traj.final_outbreak(), initial_non_s, atol=1e-12)

    def test_grid_fractions_are_count_multiples(self):
        traj = simulate(SparseGraph(64, []), sir_params(), t_max=5.0,
                        seed=np.random.SeedSequence(3))
        scaled = traj.fractions * 64
        assert_allclose(scaled, np.round(scaled), atol=1e-9)
        assert_allclose(traj.fractions.sum(axis=1), 1.0, atol=1e-12)


class TestSingleVertex:
    def test_mean_recovery_entry_time(self):
        # each initially-infectious vertex enters R after an Exp(1) wait
        master = np.random.SeedSequence(42)
        times = []
        params = sir_params(s0=0.01, i0=0.99)
        g = SparseGraph(1, [])
        for child in master.spawn(10000):
            traj = simulate(g, params, t_max=50.0, seed=child)
            times.extend(t for t, v, src, dst in traj.events if dst == "R")
        assert abs(np.mean(times) - 1.0) < 0.03


class TestStateMachine:
    def test_sir_run_monotone_and_edge_consistent(self):
        g = erdos_renyi(200, 2.0, seed=10)
        traj = simulate(g, sir_params(), t_max=60.0,
                        seed=np.random.SeedSequence(10))
        assert traj.extinction_time is not None
        check_monotone_states(traj)
        check_edge_consistent_infections(g, traj)

    def test_seir_run_monotone_and_edge_consistent(self):
        g = erdos_renyi(150, 2.0, seed=11)
        params = EpidemicParams(alpha=1.0, beta=BETA1, rho=RHO1,
                                s0=0.9, e0=0.05, i0=0.05, lam=Constant(2.0))
        traj = simulate(g, params, t_max=80.0,
                        seed=np.random.SeedSequence(11))
        assert traj.extinction_time is not None
        check_monotone_states(traj)
        check_edge_consistent_infections(g, traj)

    def test_pure_sir_never_exposes(self):
        g = erdos_renyi(150, 2.0, seed=12)
        traj = simulate(g, sir_params(), t_max=40.0,
                        seed=np.random.SeedSequence(12))
        assert all(src != "E" and dst != "E" for _, _, src, dst in traj.events)

    def test_pure_seir_never_infects_directly(self):
        g = erdos_renyi(150, 2.0, seed=13)
        params = EpidemicParams(alpha=1.0, beta=BETA1, rho=RHO1,
                                s0=0.9, i0=0.1, lam=Constant(1.0))
        traj = simulate(g, params, t_max=60.0,
                        seed=np.random.SeedSequence(13))
        assert not any(src == "S" and dst == "I"
                       for _, _, src, dst in traj.events)

    def test_hybrid_takes_both_routes(self):
        g = erdos_renyi(300, 3.0, seed=14)
        params = EpidemicParams(alpha=0.5, beta=BETA1, rho=RHO1,
                                s0=0.9, i0=0.1, lam=Constant(1.0))
        traj = simulate(g, params, t_max=40.0,
                        seed=np.random.SeedSequence(14))
        kinds = {(src, dst) for _, _, src, dst in traj.events}
        assert ("S", "E") in kinds and ("S", "I") in kinds

    def test_unfinished_run_refuses_final_outbreak(self):
        g = erdos_renyi(300, 3.0, seed=15)
        traj = simulate(g, sir_params(), t_max=0.5,
                        seed=np.random.SeedSequence(15))
        assert traj.extinction_time is None
        with pytest.raises(NumericalError):
            traj.final_outbreak()


class TestReplay:
    def test_fractions_at_matches_grid(self):
        g = erdos_renyi(120, 2.0, seed=16)
        traj = simulate(g, sir_params(), t_max=8.0,
                        seed=np.random.SeedSequence(16))
        for idx in (0, 41, len(traj.grid) - 1):
            assert_allclose(traj.fractions_at(traj.grid[idx]),
                            traj.fractions[idx], atol=1e-12)

    def test_out_of_window_rejected(self):
        traj = simulate(SparseGraph(10, []), sir_params(), t_max=2.0,
                        seed=np.random.SeedSequence(17))
        with pytest.raises(ValueError):
            traj.fractions_at(-0.1)
        with pytest.raises(ValueError):
            traj.fractions_at(2.5)

    def test_same_seed_same_events(self):
        g = erdos_renyi(100, 2.0, seed=18)
        a = simulate(g, sir_params(), t_max=10.0,
                     seed=np.random.SeedSequence(18))
        b = simulate(g, sir_params(), t_max=10.0,
                     seed=np.random.SeedSequence(18))
        assert a.events == b.events

    def test_csv_artifacts(self, tmp_path):
        g = erdos_renyi(50, 2.0, seed=19)
        traj = simulate(g, sir_params(), t_max=3.0,
                        seed=np.random.SeedSequence(19))
        tpath = tmp_path / "trajectory.csv"
        epath = tmp_path / "events.csv"
        traj.to_csv(tpath)
        traj.events_to_csv(epath)
        tlines = tpath.read_text().splitlines()
        assert tlines[0] == "t,s,e,i,r"
        assert len(tlines) == len(traj.grid) + 1
        elines = epath.read_text().splitlines()
        assert elines[0] == "time,vertex,from,to"
        assert len(elines) == len(traj.events) + 1


class TestWaitingTimes:
    def test_constant_rate_recoveries_are_exponential(self):
        p = check_recovery_times_exponential(seed=7)
        assert p > 0.01

    def test_sinusoidal_rate_recoveries_match_time_change(self):
        # survival exp(-Lambda(t)) with Lambda = t + (1 - cos(pi t))/(2 pi)
        rho = Sinusoidal(1.0, 0.5, 2.0, 0.0)
        params = EpidemicParams(alpha=0.0, beta=BETA1, rho=rho,
                                s0=1e-4, i0=1.0 - 1e-4)
        traj = simulate(SparseGraph(10000, []), params, t_max=50.0,
                        seed=np.random.SeedSequence(11))
        times = [t for t, v, src, dst in traj.events if src == "I"]
        assert len(times) > 9000

        def cdf(t):
            t = np.asarray(t)
            return 1.0 - np.exp(-(t + 0.5 * (1.0 - np.cos(np.pi * t)) / np.pi))

        p = stats.kstest(times, cdf).pvalue
        assert p > 0.01
