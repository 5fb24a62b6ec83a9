"""Final outbreak sizes: fixed-point equations, their roots, and comparators.

For a constant ratio r = rho/beta the limiting cumulative infection pressure F
is the unique positive root of

    psi_r(z) = z + log M_that(-z) - log(1 + r*(1 - e^z)) + log s0,

a convex function that is negative at 0 and grows to +infinity before
z = log(1 + 1/r). For genuinely time-varying rates F is instead read off the
limit ODE integrated to extinction, and the fixed-point equation (with the
quadrature term replacing the r expression) becomes a consistency residual.
The module also provides the kappa-regular closed forms and the scaled
mean-field comparator, plus the effective constant ratio that reproduces a
time-varying scenario's outbreak.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .csvio import write_csv
from .degree import DegreeDistribution
from .errors import ConfigError, NumericalError
from .ode import LimitSolution, solve_seir_limit, solve_sir_limit
from .rates import RateFunction

__all__ = [
    "OutbreakResult",
    "psi_r",
    "solve_constant_ratio",
    "solve_time_varying",
    "effective_rate",
    "effective_rate_from_solution",
    "regular_outbreak",
    "mean_field_outbreak",
    "seir_outbreak",
    "sir_extinction_solution",
    "seir_extinction_solution",
    "result_from_solution",
    "write_results_csv",
]

_MAX_HORIZON = 1600.0


@dataclass(frozen=True)
class OutbreakResult:
    """F is the limiting cumulative infection pressure, s_final = s0*M_theta(-F)
    the surviving susceptible fraction, and outbreak = 1 - s_final. ``method``
    records how F was obtained ("constant_ratio_root" or "ode_horizon");
    ``residual`` is the defining equation evaluated at the reported F."""

    F: float
    s_final: float
    outbreak: float
    method: str
    residual: float


def psi_r(z: float, r: float, s0: float, theta_hat: DegreeDistribution) -> float:
    """The constant-ratio outbreak functional; +inf where the log argument
    1 + r*(1 - e^z) is nonpositive."""
    if z < 0:
        raise ConfigError("psi_r is defined for z >= 0")
    if r <= 0:
        raise ConfigError("r must be > 0")
    if not 0.0 < s0 < 1.0:
        raise ConfigError("s0 must lie in (0, 1)")
    arg = 1.0 + r * (1.0 - math.exp(z))
    if arg <= 0.0:
        return math.inf
    return z + math.log(theta_hat.laplace(-z)) - math.log(arg) + math.log(s0)


def _psi_r_prime(z: float, r: float, theta_hat: DegreeDistribution) -> float:
    arg = 1.0 + r * (1.0 - math.exp(z))
    return 1.0 - theta_hat.tilted_mean(z) + r * math.exp(z) / arg


def solve_constant_ratio(theta: DegreeDistribution, r: float, s0: float) -> OutbreakResult:
    """Root of psi_r by bisection on (0, log(1 + 1/r)), polished with three
    Newton steps; convexity makes the bisection bracket safe."""
    if r <= 0:
        raise ConfigError("r must be > 0")
    if not 0.0 < s0 < 1.0:
        raise ConfigError("s0 must lie in (0, 1)")
    theta_hat = theta.size_biased()
    width = math.log1p(1.0 / r)

    lo_gap = hi_gap = 1e-12 * width
    lo = lo_gap
    hi = width - hi_gap
    for _ in range(120):
        if psi_r(lo, r, s0, theta_hat) < 0.0:
            break
        lo_gap *= 8.0
        lo = lo_gap
        if lo >= width:
            raise NumericalError("no sign change for psi_r near z = 0")
    else:
        raise NumericalError("no sign change for psi_r near z = 0")
    for _ in range(120):
        if psi_r(hi, r, s0, theta_hat) > 0.0:
            break
        hi_gap *= 8.0
        hi = width - hi_gap
        if hi <= lo:
            raise NumericalError("no sign change for psi_r near z = log(1 + 1/r)")
    else:
        raise NumericalError("no sign change for psi_r near z = log(1 + 1/r)")

    while hi - lo > 1e-13:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if psi_r(mid, r, s0, theta_hat) < 0.0:
            lo = mid
        else:
            hi = mid
    z = 0.5 * (lo + hi)
    for _ in range(3):
        step = psi_r(z, r, s0, theta_hat) / _psi_r_prime(z, r, theta_hat)
        z_new = z - step
        if not (0.0 < z_new < width and math.isfinite(z_new)):
            break
        z = z_new

    s_final = s0 * float(theta.laplace(-z))
    return OutbreakResult(
        F=z,
        s_final=s_final,
        outbreak=1.0 - s_final,
        method="constant_ratio_root",
        residual=psi_r(z, r, s0, theta_hat),
    )


def _solve_to_extinction(solve, t_first: float) -> LimitSolution:
    """Integrate with doubling horizons until the extinction event fires."""
    t_max = t_first
    while True:
        sol = solve(t_max)
        if sol.extinct:
            return sol
        if t_max >= _MAX_HORIZON:
            raise NumericalError(
                f"active fraction still above extinction_eps at t = {t_max:g}"
            )
        t_max *= 2.0


def sir_extinction_solution(
    theta: DegreeDistribution,
    beta: RateFunction,
    rho: RateFunction,
    s0: float,
    extinction_eps: float = 1e-10,
    *,
    rk_tol: float = 1e-9,
    grid_step: float = 0.05,
) -> LimitSolution:
    """The SIR limit integrated until f_I falls below ``extinction_eps``,
    extending the horizon by doubling as needed."""
    return _solve_to_extinction(
        lambda t_max: solve_sir_limit(
            theta, beta, rho, s0, t_max, rk_tol,
            grid_step=grid_step, stop_at_extinction=True,
            extinction_eps=extinction_eps,
        ),
        t_first=100.0,
    )


def seir_extinction_solution(
    theta: DegreeDistribution,
    beta: RateFunction,
    rho: RateFunction,
    lam: RateFunction,
    s0: float,
    e0: float,
    i0: float,
    extinction_eps: float = 1e-10,
    *,
    rk_tol: float = 1e-9,
    grid_step: float = 0.05,
) -> LimitSolution:
    """The SEIR limit integrated until g_E + g_I falls below
    ``extinction_eps``, extending the horizon by doubling as needed."""
    return _solve_to_extinction(
        lambda t_max: solve_seir_limit(
            theta, beta, rho, lam, s0, e0, i0, t_max, rk_tol,
            grid_step=grid_step, stop_at_extinction=True,
            extinction_eps=extinction_eps,
        ),
        t_first=100.0,
    )


def result_from_solution(sol: LimitSolution) -> OutbreakResult:
    """Read the outbreak off an extinction-horizon solution: F is the final
    infection pressure, and the residual is the fixed-point equation evaluated
    with the co-integrated pressure flux."""
    pressure = sol.F_I if sol.kind == "sir" else sol.G_I
    big_f = float(pressure[-1])
    s0 = sol.s0
    arg = 1.0 - math.exp(big_f) * sol.pressure_flux
    if arg > 0.0:
        residual = (big_f + math.log(sol.theta_hat.laplace(-big_f))
                    - math.log(arg) + math.log(s0))
    else:
        residual = math.inf
    s_final = s0 * float(sol.theta.laplace(-big_f))
    return OutbreakResult(
        F=big_f,
        s_final=s_final,
        outbreak=1.0 - s_final,
        method="ode_horizon",
        residual=residual,
    )


def solve_time_varying(
    theta: DegreeDistribution,
    beta: RateFunction,
    rho: RateFunction,
    s0: float,
    extinction_eps: float = 1e-10,
    *,
    rk_tol: float = 1e-9,
    grid_step: float = 0.05,
) -> OutbreakResult:
    """Outbreak size for arbitrary admissible rates: integrate the SIR limit
    to extinction, take F = F_I there, and store the fixed-point equation's
    quadrature residual as a consistency check (the ODE defines F; the
    equation is not solved directly because it involves f_I itself)."""
    sol = sir_extinction_solution(theta, beta, rho, s0, extinction_eps,
                                  rk_tol=rk_tol, grid_step=grid_step)
    return result_from_solution(sol)


def effective_rate(
    theta: DegreeDistribution,
    beta: RateFunction,
    rho: RateFunction,
    s0: float,
    extinction_eps: float = 1e-10,
    *,
    rk_tol: float = 1e-9,
    grid_step: float = 0.05,
) -> float:
    """The unique constant ratio r_hat whose outbreak matches the time-varying
    scenario's: the damped recovery quadrature over 1 - e^{-F}."""
    sol = sir_extinction_solution(theta, beta, rho, s0, extinction_eps,
                                  rk_tol=rk_tol, grid_step=grid_step)
    return effective_rate_from_solution(sol)


def effective_rate_from_solution(sol: LimitSolution) -> float:
    big_f = float((sol.F_I if sol.kind == "sir" else sol.G_I)[-1])
    return sol.pressure_flux / -math.expm1(-big_f)


def seir_outbreak(
    theta: DegreeDistribution,
    beta: RateFunction,
    rho: RateFunction,
    lam: RateFunction,
    s0: float,
    e0: float,
    i0: float,
    extinction_eps: float = 1e-10,
    *,
    rk_tol: float = 1e-9,
    grid_step: float = 0.05,
) -> OutbreakResult:
    """SEIR outbreak via the limit ODE run to extinction of g_E + g_I; the
    fixed-point structure is the SIR one with g_I in place of f_I."""
    sol = seir_extinction_solution(theta, beta, rho, lam, s0, e0, i0,
                                   extinction_eps, rk_tol=rk_tol,
                                   grid_step=grid_step)
    return result_from_solution(sol)


def regular_outbreak(kappa: int, r: float, s0: float) -> float:
    """Final susceptible fraction sigma_kappa on the kappa-regular tree with
    constant ratio r = rho/beta.

    kappa = 2 has the closed form s0/(1 + (1 - s0)/r)^2: on the line, an
    infected vertex passes the infection along an edge with probability
    1/(1 + r) before recovering, so a geometric-chain argument (or solving
    the kappa = 2 case of the defining equation directly) gives each side an
    escape probability r/(r + 1 - s0). For kappa >= 3 the defining function
    z^{(kappa-2)/kappa} s0^{2/kappa} - (1+r) + r z^{-1/kappa} s0^{1/kappa}
    falls from +inf to a unique minimum and rises to s0 - 1 < 0 at z = s0,
    so the root is bracketed inside (0, min(z_crit, s0))."""
    kappa = int(kappa)
    if kappa < 2:
        raise ConfigError("kappa must be >= 2")
    if r <= 0:
        raise ConfigError("r must be > 0")
    if not 0.0 < s0 < 1.0:
        raise ConfigError("s0 must lie in (0, 1)")
    if kappa == 2:
        return s0 / (1.0 + (1.0 - s0) / r) ** 2

    def phi(z: float) -> float:
        return (z ** ((kappa - 2) / kappa) * s0 ** (2 / kappa)
                - (1.0 + r) + r * z ** (-1 / kappa) * s0 ** (1 / kappa))

    z_crit = (s0 ** (-1 / kappa) * r / (kappa - 2)) ** (kappa / (kappa - 1))
    hi = min(z_crit, s0)
    lo = 0.5 * hi
    while phi(lo) < 0.0:
        lo *= 0.5
        if lo < 1e-300:
            raise NumericalError("regular outbreak bracket collapsed")
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if phi(mid) < 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def mean_field_outbreak(kappa: int, r: float, s0: float) -> float:
    """Final susceptible fraction of the scaled mean-field SIR system on the
    kappa-regular graph: the root of s0*exp(kappa*(z-1)/r) - z in (0, s0)."""
    kappa = int(kappa)
    if kappa < 2:
        raise ConfigError("kappa must be >= 2")
    if r <= 0:
        raise ConfigError("r must be > 0")
    if not 0.0 < s0 < 1.0:
        raise ConfigError("s0 must lie in (0, 1)")

    def phi_hat(z: float) -> float:
        return s0 * math.exp(kappa * (z - 1.0) / r) - z

    lo, hi = 0.0, s0
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if phi_hat(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def write_results_csv(path, entries) -> None:
    """Rows of (kappa, r, s0, OutbreakResult); kappa or r may be None for
    scenarios where they do not apply."""
    def rows():
        for kappa, r, s0, res in entries:
            yield [
                "" if kappa is None else kappa,
                "" if r is None else r,
                s0,
                res.method,
                res.F,
                res.s_final,
                res.outbreak,
                res.residual,
            ]

    write_csv(path, ["kappa", "r", "s0", "method", "F", "s_final", "outbreak", "residual"], rows())
