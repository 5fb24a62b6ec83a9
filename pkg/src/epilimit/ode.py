"""Large-graph limit dynamics of SIR and SEIR epidemics.

On sparse random graphs whose local limit is a unimodular Galton-Watson tree
with degree law theta, the epidemic's state fractions converge to closed-form
functions of a low-dimensional ODE system driven by the size-biased offspring
law. This module integrates those systems, evaluates the derived fraction
curves, and provides the conditional marginal curves and the 2-regular
closed form used to cross-validate everything else.

The susceptible limit is s0*M_theta(-F_I(t)) where F_I is the cumulative
infection pressure; the infectious limit and the conditional marginals add
damped integrals of the form e^{-R(t)} * integral of w(u)*e^{R(u)}. Those are
evaluated by a trapezoid recursion in integrating-factor form, so the growing
exponential e^{R} is never formed.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import solve_ivp

from .csvio import write_csv
from .degree import DegreeDistribution
from .errors import ConfigError, NumericalError
from .grids import uniform_ticks
from .rates import RateFunction

__all__ = [
    "LimitSolution",
    "SirMarginals",
    "SeirMarginals",
    "solve_sir_limit",
    "solve_seir_limit",
    "sir_marginals",
    "seir_marginals",
    "line_graph_pss",
]


def _memo_last(fn):
    """Single-entry cache: RK stages and event callbacks repeatedly evaluate
    the tilt ratio at identical arguments."""
    last_arg = None
    last_val = None

    def wrapped(x):
        nonlocal last_arg, last_val
        if last_arg is not None and x == last_arg:
            return last_val
        last_arg = x
        last_val = fn(x)
        return last_val

    return wrapped


def _damped_cumulative(grid, damp, integrand):
    """Trapezoid evaluation, along ``grid``, of

        D(t) = exp(-int_0^t damp)  and  J(t) = D(t) * int_0^t integrand(u)/D(u) du

    via the recursion J_k = e^{-r_k} J_{k-1} + h/2 (w_{k-1} e^{-r_k} + w_k),
    where r_k is the trapezoid increment of the damping rate. Only decaying
    exponentials appear, so long horizons cannot overflow."""
    n = grid.size
    big_j = np.zeros(n)
    decay = np.ones(n)
    for k in range(1, n):
        h = grid[k] - grid[k - 1]
        d = math.exp(-0.5 * h * (damp[k - 1] + damp[k]))
        big_j[k] = d * big_j[k - 1] + 0.5 * h * (integrand[k - 1] * d + integrand[k])
        decay[k] = d * decay[k - 1]
    return decay, big_j


def _sample(rate: RateFunction, grid: np.ndarray) -> np.ndarray:
    return np.array([rate.evaluate(float(t)) for t in grid])


class LimitSolution:
    """Gridded solution of a limit ODE system plus its derived fraction curves.

    ``kind`` is "sir" or "seir". SIR solutions carry f_S, f_I, F_I and the
    derived s_inf, i_inf; SEIR solutions carry g_S, g_E, g_I, G_I and s_bar,
    e_bar, i_bar. ``horizon`` is the last integrated time, which is below the
    requested t_max when the solve was stopped at extinction; ``extinct``
    records whether the active compartments fell below extinction_eps there.
    """

    def __init__(self, kind, grid, states, derived, theta, theta_hat, rates,
                 initial, rk_tol, extinct, dense, pressure_flux=0.0):
        self.kind = kind
        self.grid = grid
        self.theta = theta
        self.theta_hat = theta_hat
        self.rk_tol = rk_tol
        self.extinct = extinct
        self._dense = dense
        # int_0^horizon exp(-pressure) * rho * active dt, integrated alongside
        # the state so downstream fixed point residuals are solver-accurate.
        self.pressure_flux = float(pressure_flux)
        if kind == "sir":
            self.f_S, self.f_I, self.F_I = states
            self.s_inf, self.i_inf = derived
            self.beta, self.rho = rates
            self.s0, self.i0 = initial
        else:
            self.g_S, self.g_E, self.g_I, self.G_I = states
            self.s_bar, self.e_bar, self.i_bar = derived
            self.beta, self.rho, self.lam = rates
            self.s0, self.e0, self.i0 = initial

    @property
    def horizon(self) -> float:
        return float(self.grid[-1])

    def interpolate(self, times) -> np.ndarray:
        """Dense-output ODE state at arbitrary times in [0, horizon]; rows are
        (f_S, f_I, F_I) or (g_S, g_E, g_I, G_I)."""
        times = np.atleast_1d(np.asarray(times, dtype=float))
        if times.size and (times.min() < 0 or times.max() > self.horizon * (1 + 1e-12) + 1e-12):
            raise ValueError("interpolation times must lie in [0, horizon]")
        n_states = 3 if self.kind == "sir" else 4
        if self._dense is None:
            cols = [self.f_S, self.f_I, self.F_I] if self.kind == "sir" else [
                self.g_S, self.g_E, self.g_I, self.G_I]
            return np.tile(np.array([c[0] for c in cols])[:, None], (1, times.size))
        # The integrated vector carries the auxiliary flux state last.
        return self._dense(np.minimum(times, self.horizon))[:n_states]

    def to_csv(self, path) -> None:
        if self.kind == "sir":
            header = ["t", "f_S", "f_I", "F_I", "s_inf", "i_inf"]
            cols = [self.grid, self.f_S, self.f_I, self.F_I, self.s_inf, self.i_inf]
        else:
            header = ["t", "g_S", "g_E", "g_I", "G_I", "s_bar", "e_bar", "i_bar"]
            cols = [self.grid, self.g_S, self.g_E, self.g_I, self.G_I,
                    self.s_bar, self.e_bar, self.i_bar]
        write_csv(path, header, zip(*cols))


def _integrate(rhs, y0, t_max, rk_tol, event, atol=None):
    res = solve_ivp(
        rhs,
        (0.0, float(t_max)),
        y0,
        method="RK45",
        rtol=rk_tol,
        atol=rk_tol if atol is None else atol,
        dense_output=True,
        events=event,
    )
    if not res.success and res.status != 1:
        raise NumericalError(
            f"limit ODE integration failed at t = {res.t[-1]:.6g}: {res.message}"
        )
    return res


def solve_sir_limit(
    theta: DegreeDistribution,
    beta: RateFunction,
    rho: RateFunction,
    s0: float,
    t_max: float,
    rk_tol: float = 1e-9,
    *,
    grid_step: float = 0.05,
    stop_at_extinction: bool = False,
    extinction_eps: float = 1e-10,
) -> LimitSolution:
    """Integrate the SIR limit system for degree law ``theta``.

    States are f_S, f_I (neighbor state probabilities conditioned on a
    susceptible root) and the pressure F_I = int beta*f_I, started from
    (s0, 1-s0, 0). With ``stop_at_extinction`` the solve terminates once f_I
    drops below ``extinction_eps``, which operationalizes t -> infinity: F_I
    is frozen at that point.
    """
    if not 0.0 < s0 < 1.0:
        raise ConfigError("s0 must lie in (0, 1)")
    if t_max < 0:
        raise ConfigError("t_max must be >= 0")
    if rk_tol <= 0:
        raise ConfigError("rk_tol must be > 0")
    theta_hat = theta.size_biased()
    phi = _memo_last(theta_hat.tilted_mean)
    i0 = 1.0 - s0

    def rhs(t, y):
        f_s, f_i, big_f = y[0], y[1], y[2]
        b = beta.evaluate(t)
        rho_t = rho.evaluate(t)
        p = phi(big_f if big_f > 0.0 else 0.0)
        infect = b * f_s * f_i
        return (
            infect * (1.0 - p),
            infect * p - f_i * (rho_t + b - b * f_i),
            b * f_i,
            math.exp(-big_f if big_f > 0.0 else 0.0) * rho_t * f_i,
        )

    event = None
    if stop_at_extinction:
        def event(t, y):
            return y[1] - extinction_eps

        event.terminal = True
        event.direction = -1.0

    if t_max == 0:
        grid = np.zeros(1)
        states = (np.array([s0]), np.array([i0]), np.zeros(1))
        derived = (np.array([s0]), np.array([i0]))
        return LimitSolution("sir", grid, states, derived, theta, theta_hat,
                             (beta, rho), (s0, i0), rk_tol,
                             extinct=i0 < extinction_eps, dense=None)

    # The event can only fire if decay stays resolved below the threshold,
    # so the absolute tolerance must sit well under extinction_eps.
    atol = min(rk_tol, extinction_eps * 1e-3) if stop_at_extinction else None
    res = _integrate(rhs, [s0, i0, 0.0, 0.0], t_max, rk_tol, event, atol=atol)
    horizon = float(res.t[-1])
    grid = uniform_ticks(horizon, grid_step)
    y = res.sol(grid)
    f_S, f_I = y[0], y[1]
    big_f = np.maximum(y[2], 0.0)  # F_I >= 0; dense output can round below

    s_inf = s0 * theta.laplace(-big_f)
    beta_vals = _sample(beta, grid)
    rho_vals = _sample(rho, grid)
    w = theta.laplace_derivative(-big_f) * beta_vals * f_I
    decay, big_j = _damped_cumulative(grid, rho_vals, w)
    i_inf = decay * i0 + s0 * big_j

    extinct = res.status == 1 or f_I[-1] < extinction_eps
    return LimitSolution("sir", grid, (f_S, f_I, big_f), (s_inf, i_inf), theta,
                         theta_hat, (beta, rho), (s0, i0), rk_tol, extinct,
                         res.sol, pressure_flux=res.y[3, -1])


def solve_seir_limit(
    theta: DegreeDistribution,
    beta: RateFunction,
    rho: RateFunction,
    lam: RateFunction,
    s0: float,
    e0: float,
    i0: float,
    t_max: float,
    rk_tol: float = 1e-9,
    *,
    grid_step: float = 0.05,
    stop_at_extinction: bool = False,
    extinction_eps: float = 1e-10,
) -> LimitSolution:
    """Integrate the SEIR limit system (g_S, g_E, g_I, G_I) from
    (s0, e0, i0, 0). Extinction is g_E + g_I below ``extinction_eps``."""
    if not 0.0 < s0 < 1.0:
        raise ConfigError("s0 must lie in (0, 1)")
    if e0 < 0 or i0 < 0:
        raise ConfigError("e0 and i0 must be nonnegative")
    if abs(s0 + e0 + i0 - 1.0) > 1e-12:
        raise ConfigError("initial fractions must satisfy s0 + e0 + i0 = 1")
    if t_max < 0:
        raise ConfigError("t_max must be >= 0")
    if rk_tol <= 0:
        raise ConfigError("rk_tol must be > 0")
    theta_hat = theta.size_biased()
    phi = _memo_last(theta_hat.tilted_mean)

    def rhs(t, y):
        g_s, g_e, g_i, big_g = y[0], y[1], y[2], y[3]
        b = beta.evaluate(t)
        rho_t = rho.evaluate(t)
        lam_t = lam.evaluate(t)
        p = phi(big_g if big_g > 0.0 else 0.0)
        infect = b * g_s * g_i
        return (
            infect * (1.0 - p),
            infect * p - g_e * (lam_t - b * g_i),
            lam_t * g_e - g_i * (rho_t + b - b * g_i),
            b * g_i,
            math.exp(-big_g if big_g > 0.0 else 0.0) * rho_t * g_i,
        )

    event = None
    if stop_at_extinction:
        def event(t, y):
            return y[1] + y[2] - extinction_eps

        event.terminal = True
        event.direction = -1.0

    if t_max == 0:
        grid = np.zeros(1)
        states = (np.array([s0]), np.array([e0]), np.array([i0]), np.zeros(1))
        derived = (np.array([s0]), np.array([e0]), np.array([i0]))
        return LimitSolution("seir", grid, states, derived, theta, theta_hat,
                             (beta, rho, lam), (s0, e0, i0), rk_tol,
                             extinct=e0 + i0 < extinction_eps, dense=None)

    atol = min(rk_tol, extinction_eps * 1e-3) if stop_at_extinction else None
    res = _integrate(rhs, [s0, e0, i0, 0.0, 0.0], t_max, rk_tol, event, atol=atol)
    horizon = float(res.t[-1])
    grid = uniform_ticks(horizon, grid_step)
    y = res.sol(grid)
    g_S, g_E, g_I = y[0], y[1], y[2]
    big_g = np.maximum(y[3], 0.0)

    s_bar = s0 * theta.laplace(-big_g)
    beta_vals = _sample(beta, grid)
    rho_vals = _sample(rho, grid)
    lam_vals = _sample(lam, grid)
    w = theta.laplace_derivative(-big_g) * beta_vals * g_I
    decay_lam, j_lam = _damped_cumulative(grid, lam_vals, w)
    e_bar = decay_lam * e0 + s0 * j_lam
    decay_rho, j_rho = _damped_cumulative(grid, rho_vals, lam_vals * e_bar)
    i_bar = decay_rho * i0 + j_rho

    extinct = res.status == 1 or (g_E[-1] + g_I[-1]) < extinction_eps
    return LimitSolution("seir", grid, (g_S, g_E, g_I, big_g),
                         (s_bar, e_bar, i_bar), theta, theta_hat,
                         (beta, rho, lam), (s0, e0, i0), rk_tol, extinct,
                         res.sol, pressure_flux=res.y[4, -1])


class SirMarginals:
    """Conditional state-transition curves for a root of given initial degree:
    p_ss[k] and p_si[k] condition on starting susceptible with k neighbors,
    p_ii conditions on starting infectious."""

    def __init__(self, grid, p_ss, p_si, p_ii):
        self.grid = grid
        self.p_ss = p_ss
        self.p_si = p_si
        self.p_ii = p_ii


class SeirMarginals:
    """SEIR analogue of :class:`SirMarginals`, with the exposed layer: q_ss,
    q_se, q_si keyed by initial degree, plus q_ee, q_ei, q_ii."""

    def __init__(self, grid, q_ss, q_se, q_si, q_ee, q_ei, q_ii):
        self.grid = grid
        self.q_ss = q_ss
        self.q_se = q_se
        self.q_si = q_si
        self.q_ee = q_ee
        self.q_ei = q_ei
        self.q_ii = q_ii


def sir_marginals(sol: LimitSolution, rho: RateFunction, ks) -> SirMarginals:
    """Closed-form conditional marginals along a SIR solution grid.

    p_ss[k] = exp(-k*F_I(t)); p_ii = exp(-int rho); p_si[k] is the damped
    integral of k*exp(-k*F_I)*beta*f_I, by trapezoid quadrature on the grid.
    """
    if sol.kind != "sir":
        raise ConfigError("sir_marginals needs a SIR solution")
    grid = sol.grid
    rho_vals = _sample(rho, grid)
    beta_fi = _sample(sol.beta, grid) * sol.f_I
    p_ii, _ = _damped_cumulative(grid, rho_vals, np.zeros_like(grid))
    p_ss = {}
    p_si = {}
    for k in ks:
        k = int(k)
        p_ss[k] = np.exp(-k * sol.F_I)
        _, p_si[k] = _damped_cumulative(grid, rho_vals, k * p_ss[k] * beta_fi)
    return SirMarginals(grid, p_ss, p_si, p_ii)


def seir_marginals(sol: LimitSolution, rho: RateFunction, lam: RateFunction, ks) -> SeirMarginals:
    """Conditional marginals along a SEIR solution grid, by integrating the
    linear transition system with the solution's dense g_I as forcing."""
    if sol.kind != "seir":
        raise ConfigError("seir_marginals needs a SEIR solution")
    ks = [int(k) for k in ks]
    k_arr = np.array(ks, dtype=float)
    m = len(ks)
    grid = sol.grid
    beta = sol.beta
    dense = sol._dense

    if dense is None:
        ones = np.ones(1)
        zeros = np.zeros(1)
        return SeirMarginals(grid, {k: ones.copy() for k in ks},
                             {k: zeros.copy() for k in ks},
                             {k: zeros.copy() for k in ks},
                             ones.copy(), zeros.copy(), ones.copy())

    def rhs(t, y):
        g_i = dense(t)[2]
        b = beta.evaluate(t)
        l = lam.evaluate(t)
        r = rho.evaluate(t)
        q = y[: 3 * m].reshape(m, 3)
        out = np.empty_like(y)
        block = out[: 3 * m].reshape(m, 3)
        block[:, 0] = -b * k_arr * g_i * q[:, 0]
        block[:, 1] = b * k_arr * g_i * q[:, 0] - l * q[:, 1]
        block[:, 2] = l * q[:, 1] - r * q[:, 2]
        q_ee, q_ei, q_ii = y[3 * m:]
        out[3 * m] = -l * q_ee
        out[3 * m + 1] = l * q_ee - r * q_ei
        out[3 * m + 2] = -r * q_ii
        return out

    y0 = np.zeros(3 * m + 3)
    y0[0: 3 * m: 3] = 1.0
    y0[3 * m] = 1.0
    y0[3 * m + 2] = 1.0
    res = solve_ivp(rhs, (0.0, sol.horizon), y0, method="RK45",
                    rtol=sol.rk_tol, atol=sol.rk_tol, t_eval=grid)
    if not res.success:
        raise NumericalError(
            f"marginal ODE integration failed at t = {res.t[-1]:.6g}: {res.message}"
        )
    q_ss = {k: res.y[3 * i] for i, k in enumerate(ks)}
    q_se = {k: res.y[3 * i + 1] for i, k in enumerate(ks)}
    q_si = {k: res.y[3 * i + 2] for i, k in enumerate(ks)}
    return SeirMarginals(grid, q_ss, q_se, q_si,
                         res.y[3 * m], res.y[3 * m + 1], res.y[3 * m + 2])


def line_graph_pss(t, s0: float, b: float, r: float):
    """Probability that a susceptible root of the infinite line graph is still
    susceptible at time t, under constant infection rate b and recovery rate
    r. Accepts scalar or array t, including inf for the limit value."""
    if not 0.0 < s0 < 1.0:
        raise ConfigError("s0 must lie in (0, 1)")
    if b <= 0 or r <= 0:
        raise ConfigError("rates must be > 0")
    t_arr = np.asarray(t, dtype=float)
    decay = np.exp(-t_arr * (b * (1.0 - s0) + r))
    out = (((1.0 - s0) * decay + r / b) / (1.0 - s0 + r / b)) ** 2
    if np.ndim(t) == 0:
        return float(out)
    return out
