"""Uniform time grids shared by the simulator, the ODE solvers, and the
experiment harness, so curves from different sources line up exactly."""

from __future__ import annotations

import math

import numpy as np

from .errors import ConfigError

__all__ = ["uniform_ticks"]


def uniform_ticks(t_end: float, step: float) -> np.ndarray:
    """Ticks 0, step, 2*step, ... covering [0, t_end], with t_end always the
    exact final entry (appended, or snapped when t_end/step is integral up to
    float rounding)."""
    if step <= 0:
        raise ConfigError("grid step must be > 0")
    if t_end < 0:
        raise ConfigError("t_end must be >= 0")
    if t_end == 0:
        return np.zeros(1)
    count = int(math.floor(t_end / step + 1e-9))
    ticks = np.arange(count + 1, dtype=float) * step
    if ticks[-1] < t_end - 1e-9 * step:
        ticks = np.append(ticks, t_end)
    else:
        ticks[-1] = t_end
    return ticks
