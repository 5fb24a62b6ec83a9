"""Epidemics on sparse random graphs and their large-population limits.

The package has three layers: exact stochastic simulation of S(E)IR dynamics
on finite graphs (``sim``, ``graphs``), the limiting ODE systems and survival
function marginals (``ode``, ``degree``, ``rates``), and final outbreak size
via fixed point equations (``outbreak``). ``harness`` runs Monte Carlo
experiments comparing the two and writes CSV artifacts.
"""

from .degree import DegreeDistribution
from .errors import ConfigError, NumericalError
from .graphs import SparseGraph, configuration_model, erdos_renyi
from .harness import ExperimentConfig, run_experiment
from .ode import (
    LimitSolution,
    line_graph_pss,
    seir_marginals,
    sir_marginals,
    solve_seir_limit,
    solve_sir_limit,
)
from .outbreak import (
    OutbreakResult,
    effective_rate,
    mean_field_outbreak,
    psi_r,
    regular_outbreak,
    seir_outbreak,
    solve_constant_ratio,
    solve_time_varying,
)
from .rates import (
    Constant,
    LinearRamp,
    PiecewiseLinear,
    RateFunction,
    RateQuotient,
    Sinusoidal,
)
from .sim import EpidemicParams, Trajectory, simulate

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "Constant",
    "DegreeDistribution",
    "EpidemicParams",
    "ExperimentConfig",
    "LimitSolution",
    "LinearRamp",
    "NumericalError",
    "OutbreakResult",
    "PiecewiseLinear",
    "RateFunction",
    "RateQuotient",
    "Sinusoidal",
    "SparseGraph",
    "Trajectory",
    "configuration_model",
    "effective_rate",
    "erdos_renyi",
    "line_graph_pss",
    "mean_field_outbreak",
    "psi_r",
    "regular_outbreak",
    "run_experiment",
    "seir_marginals",
    "seir_outbreak",
    "sim",
    "simulate",
    "sir_marginals",
    "solve_constant_ratio",
    "solve_seir_limit",
    "solve_sir_limit",
    "solve_time_varying",
]
