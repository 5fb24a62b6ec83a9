"""Reusable structural checks shared by the module suites.

Each helper asserts one invariant through public package surfaces only, so
both the per-module tests and the combined property battery can run the same
logic on fresh objects without duplicating it.
"""

import numpy as np
from scipy import stats

from epilimit.graphs import SparseGraph
from epilimit.ode import LimitSolution
from epilimit.sim import STATE_NAMES, EpidemicParams, Trajectory, simulate

_STATE_ORDER = {name: idx for idx, name in enumerate(STATE_NAMES)}


# ---------------------------------------------------------------------------
# degree-distribution invariants


def check_phi_monotone(dist, z_max=50.0, n_points=201):
    """tilted_mean is nonincreasing in z: tilting moves mass to small k."""
    z = np.linspace(0.0, z_max, n_points)
    vals = np.array([dist.tilted_mean(v) for v in z])
    worst = np.diff(vals).max() if len(vals) > 1 else 0.0
    assert worst <= 1e-12, f"tilted_mean increased by {worst:.3e}"


def check_phi_limits(dist):
    """tilted_mean starts at the plain mean and tends to the minimum support."""
    assert abs(dist.tilted_mean(0.0) - dist.mean) < 1e-9
    assert abs(dist.tilted_mean(50.0) - dist.min_support) < 1e-6


def check_laplace_log_convex(dist, seed=0, n_pairs=200):
    """x -> log M(x) is convex on x <= 0 (midpoint test on random pairs)."""
    rng = np.random.default_rng(seed)
    x = -10.0 * rng.random(n_pairs)
    y = -10.0 * rng.random(n_pairs)
    lhs = np.log([dist.laplace(v) for v in (x + y) / 2.0])
    rhs = 0.5 * (np.log([dist.laplace(v) for v in x])
                 + np.log([dist.laplace(v) for v in y]))
    worst = (lhs - rhs).max()
    assert worst <= 1e-12, f"log-laplace midpoint convexity off by {worst:.3e}"


def check_size_biased_fixed_point(dist, tol=1e-10):
    """Total variation between the law and its size-biased version."""
    hat = dist.size_biased()
    top = max(dist.max_degree, hat.max_degree)
    tv = 0.5 * sum(abs(dist.pmf(k) - hat.pmf(k)) for k in range(top + 1))
    assert tv < tol, f"size-biased law moved by TV {tv:.3e}"


# ---------------------------------------------------------------------------
# simulation invariants


def _transitions_by_vertex(traj):
    by_vertex = {}
    for t, v, src, dst in traj.events:
        by_vertex.setdefault(v, []).append((t, src, dst))
    return by_vertex


def check_monotone_states(traj):
    """Every vertex walks forward through S -> E -> I -> R, never back."""
    for v, moves in _transitions_by_vertex(traj).items():
        assert len(moves) <= 3, f"vertex {v} has {len(moves)} transitions"
        for (t0, src0, dst0), (t1, src1, dst1) in zip(moves, moves[1:]):
            assert t0 <= t1, f"vertex {v} events out of order"
            assert dst0 == src1, f"vertex {v} chain breaks at t={t1}"
        for t, src, dst in moves:
            assert _STATE_ORDER[src] < _STATE_ORDER[dst], (
                f"vertex {v} moved backward {src}->{dst}"
            )


def check_edge_consistent_infections(graph, traj):
    """Each infection event has an infectious neighbor at that instant.

    Requires an extinct trajectory so initially-infectious vertices are
    identifiable by their recovery events.
    """
    assert traj.extinction_time is not None, "need an extinct trajectory"
    entered_i = {}
    left_i = {}
    for t, v, src, dst in traj.events:
        if dst == "I":
            entered_i[v] = t
        if src == "I":
            left_i[v] = t
            # a recovery with no recorded entry means the vertex started I
            entered_i.setdefault(v, 0.0)
    for t, v, src, dst in traj.events:
        if src != "S":
            continue
        exposed = any(
            entered_i.get(u, np.inf) < t <= left_i.get(u, np.inf)
            for u in graph.neighbors(v)
        )
        assert exposed, f"vertex {v} infected at t={t:.4f} with no I neighbor"


def check_recovery_times_exponential(n=10000, seed=7):
    """Recovery times on an edgeless graph are i.i.d. samples of the unit
    exponential law; returns the KS p-value (asserted > 0.01)."""
    graph = SparseGraph(n, [])
    from epilimit.rates import Constant

    params = EpidemicParams(alpha=0.0, beta=Constant(1.0), rho=Constant(1.0),
                            s0=1e-4, i0=1.0 - 1e-4)
    traj = simulate(graph, params, t_max=50.0,
                    seed=np.random.SeedSequence(seed))
    times = [t for t, v, src, dst in traj.events if src == "I"]
    assert len(times) > 9000
    p = stats.kstest(times, stats.expon.cdf).pvalue
    assert p > 0.01, f"exponential KS rejected, p={p:.4g}"
    return p


# ---------------------------------------------------------------------------
# limit-ODE invariants


def check_pressure_monotone(sol: LimitSolution):
    """The integrated pressure (F_I or G_I) never decreases."""
    pressure = sol.F_I if sol.kind == "sir" else sol.G_I
    worst = np.diff(pressure).min() if len(pressure) > 1 else 0.0
    assert worst >= -1e-12, f"pressure decreased by {abs(worst):.3e}"


def check_active_mass_decreasing(sol: LimitSolution):
    """The not-yet-removed neighbor mass shrinks: f_S + f_I (SIR) or
    g_S + g_E + g_I (SEIR) is nonincreasing."""
    if sol.kind == "sir":
        total = sol.f_S + sol.f_I
    else:
        total = sol.g_S + sol.g_E + sol.g_I
    worst = np.diff(total).max() if len(total) > 1 else 0.0
    assert worst <= 1e-12, f"active neighbor mass grew by {worst:.3e}"


def check_marginal_representation(sol: LimitSolution, tol=1e-8):
    """The susceptible curve equals the degree mixture of the per-degree
    conditional survival probabilities."""
    from epilimit.ode import seir_marginals, sir_marginals

    theta = sol.theta
    ks = list(range(theta.max_degree + 1))
    weights = np.array([theta.pmf(k) for k in ks])
    if sol.kind == "sir":
        marg = sir_marginals(sol, sol.rho, ks)
        mixture = sol.s0 * weights @ np.array([marg.p_ss[k] for k in ks])
        curve = sol.s_inf
    else:
        marg = seir_marginals(sol, sol.rho, sol.lam, ks)
        mixture = sol.s0 * weights @ np.array([marg.q_ss[k] for k in ks])
        curve = sol.s_bar
    worst = np.max(np.abs(mixture - curve))
    assert worst < tol, f"marginal mixture off susceptible curve by {worst:.3e}"


def check_tolerance_halving(solve, tol_ratio=10.0):
    """Halving rk_tol moves the susceptible curve by at most
    ``tol_ratio * rk_tol``: the integrator is inside its tolerance regime.

    ``solve`` maps rk_tol -> LimitSolution.
    """
    rk_tol = 1e-9
    coarse = solve(rk_tol)
    fine = solve(rk_tol / 2.0)
    s_coarse = coarse.s_inf if coarse.kind == "sir" else coarse.s_bar
    s_fine = fine.s_inf if fine.kind == "sir" else fine.s_bar
    worst = np.max(np.abs(s_coarse - s_fine))
    assert worst < tol_ratio * rk_tol, (
        f"halving rk_tol moved s-curve by {worst:.3e}"
    )
