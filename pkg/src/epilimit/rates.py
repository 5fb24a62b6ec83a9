"""Time-varying event rates with exact interval bounds.

Every rate kind is continuous, strictly positive on [0, inf), and bounded away
from 0 and infinity on bounded horizons; constructors reject parameterizations
that would violate positivity rather than clamping them. Each kind reports
exact suprema/infima over closed intervals, which is what makes Poisson
thinning in the simulator exact and quotient rates well-bounded.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConfigError

__all__ = [
    "RateFunction",
    "Constant",
    "LinearRamp",
    "Sinusoidal",
    "PiecewiseLinear",
    "RateQuotient",
    "ratio",
]


def _check_interval(t0: float, t1: float) -> None:
    if not (0 <= t0 < t1):
        raise ValueError(f"need 0 <= t0 < t1, got [{t0}, {t1}]")


class RateFunction:
    """Abstract rate of events per unit time, evaluable at any t >= 0."""

    __slots__ = ()

    def evaluate(self, t):
        """Rate value at time t (scalar or ndarray in, same shape out)."""
        raise NotImplementedError

    def upper_bound(self, t0: float, t1: float) -> float:
        """Exact supremum of the rate over [t0, t1]."""
        raise NotImplementedError

    def lower_bound(self, t0: float, t1: float) -> float:
        """Exact infimum of the rate over [t0, t1]."""
        raise NotImplementedError

    def to_config(self) -> dict:
        raise NotImplementedError

    def __call__(self, t):
        return self.evaluate(t)

    @staticmethod
    def from_config(cfg: dict) -> "RateFunction":
        if not isinstance(cfg, dict) or "kind" not in cfg:
            raise ConfigError("rate config must be an object with a 'kind' field")
        kind = cfg["kind"]
        try:
            if kind == "constant":
                return Constant(cfg["value"])
            if kind == "ramp":
                return LinearRamp(cfg["from"], cfg["to"], cfg["t0"], cfg["t1"])
            if kind == "sin":
                return Sinusoidal(cfg["base"], cfg["amplitude"], cfg["period"], cfg["phase"])
            if kind == "pwl":
                return PiecewiseLinear(cfg["knots"])
            if kind == "quotient":
                return RateQuotient(
                    RateFunction.from_config(cfg["num"]),
                    RateFunction.from_config(cfg["den"]),
                )
        except KeyError as exc:
            raise ConfigError(f"rate config missing field {exc}") from exc
        raise ConfigError(f"unknown rate kind {kind!r}")


class Constant(RateFunction):
    __slots__ = ("value",)

    def __init__(self, value: float):
        value = float(value)
        if value <= 0:
            raise ConfigError("constant rate must be > 0")
        self.value = value

    def evaluate(self, t):
        t = np.asarray(t, dtype=np.float64)
        out = np.full_like(t, self.value)
        return out if out.ndim else float(out)

    def upper_bound(self, t0, t1):
        _check_interval(t0, t1)
        return self.value

    def lower_bound(self, t0, t1):
        _check_interval(t0, t1)
        return self.value

    def to_config(self):
        return {"kind": "constant", "value": self.value}


class LinearRamp(RateFunction):
    """Linear between t0 and t1, constant outside that window."""

    __slots__ = ("v0", "v1", "t0", "t1")

    def __init__(self, v0: float, v1: float, t0: float, t1: float):
        v0, v1, t0, t1 = map(float, (v0, v1, t0, t1))
        if min(v0, v1) <= 0:
            raise ConfigError("ramp endpoint rates must be > 0")
        if not t0 < t1:
            raise ConfigError("ramp needs t0 < t1")
        self.v0, self.v1, self.t0, self.t1 = v0, v1, t0, t1

    def evaluate(self, t):
        t = np.asarray(t, dtype=np.float64)
        frac = np.clip((t - self.t0) / (self.t1 - self.t0), 0.0, 1.0)
        out = self.v0 + (self.v1 - self.v0) * frac
        return out if out.ndim else float(out)

    def upper_bound(self, t0, t1):
        _check_interval(t0, t1)
        # monotone in t, so the sup sits at an endpoint
        return max(self.evaluate(t0), self.evaluate(t1))

    def lower_bound(self, t0, t1):
        _check_interval(t0, t1)
        return min(self.evaluate(t0), self.evaluate(t1))

    def to_config(self):
        return {"kind": "ramp", "from": self.v0, "to": self.v1, "t0": self.t0, "t1": self.t1}


class Sinusoidal(RateFunction):
    """base + amplitude * sin((t + phase*period) * 2*pi / period)."""

    __slots__ = ("base", "amplitude", "period", "phase")

    def __init__(self, base: float, amplitude: float, period: float, phase: float = 0.0):
        base, amplitude, period, phase = map(float, (base, amplitude, period, phase))
        if base <= 0:
            raise ConfigError("sinusoidal base rate must be > 0")
        if amplitude < 0:
            raise ConfigError("sinusoidal amplitude must be >= 0")
        if amplitude >= base:
            raise ConfigError("sinusoidal amplitude must be < base to keep the rate positive")
        if period <= 0:
            raise ConfigError("sinusoidal period must be > 0")
        self.base, self.amplitude, self.period, self.phase = base, amplitude, period, phase

    def evaluate(self, t):
        t = np.asarray(t, dtype=np.float64)
        arg = (t + self.phase * self.period) * (2.0 * math.pi / self.period)
        out = self.base + self.amplitude * np.sin(arg)
        return out if out.ndim else float(out)

    def _extremum_in(self, t0: float, t1: float, quarter: float) -> bool:
        # extrema of sin at argument pi/2 (+2*pi*m) for the max, 3*pi/2 for the min,
        # i.e. at t = period*(quarter + m) - phase*period
        w, d = self.period, self.phase
        m = math.ceil((t0 + d * w) / w - quarter)
        return w * (quarter + m) - d * w <= t1

    def upper_bound(self, t0, t1):
        _check_interval(t0, t1)
        if self._extremum_in(t0, t1, 0.25):
            return self.base + self.amplitude
        return max(self.evaluate(t0), self.evaluate(t1))

    def lower_bound(self, t0, t1):
        _check_interval(t0, t1)
        if self._extremum_in(t0, t1, 0.75):
            return self.base - self.amplitude
        return min(self.evaluate(t0), self.evaluate(t1))

    def to_config(self):
        return {
            "kind": "sin",
            "base": self.base,
            "amplitude": self.amplitude,
            "period": self.period,
            "phase": self.phase,
        }


class PiecewiseLinear(RateFunction):
    """Linear interpolation through (t, v) knots, constant beyond the ends."""

    __slots__ = ("_ts", "_vs")

    def __init__(self, knots):
        knots = [(float(t), float(v)) for t, v in knots]
        if not knots:
            raise ConfigError("piecewise-linear rate needs at least one knot")
        ts = np.array([t for t, _ in knots])
        vs = np.array([v for _, v in knots])
        if np.any(np.diff(ts) <= 0):
            raise ConfigError("piecewise-linear knot times must be strictly increasing")
        if np.any(vs <= 0):
            raise ConfigError("piecewise-linear knot values must be > 0")
        ts.setflags(write=False)
        vs.setflags(write=False)
        self._ts, self._vs = ts, vs

    @property
    def knots(self):
        return list(zip(self._ts.tolist(), self._vs.tolist()))

    def evaluate(self, t):
        t = np.asarray(t, dtype=np.float64)
        out = np.interp(t, self._ts, self._vs)
        return out if out.ndim else float(out)

    def _bound(self, t0, t1, reducer):
        inner = (self._ts > t0) & (self._ts < t1)
        candidates = [self.evaluate(t0), self.evaluate(t1), *self._vs[inner]]
        return float(reducer(candidates))

    def upper_bound(self, t0, t1):
        _check_interval(t0, t1)
        return self._bound(t0, t1, max)

    def lower_bound(self, t0, t1):
        _check_interval(t0, t1)
        return self._bound(t0, t1, min)

    def to_config(self):
        return {"kind": "pwl", "knots": [[t, v] for t, v in self.knots]}


class RateQuotient(RateFunction):
    """Pointwise quotient numerator/denominator of two rate functions.

    Needed for scenarios specified through a rate ratio (a recovery rate and a
    prescribed rho/beta profile determine beta as their quotient). Interval
    bounds combine the members' exact bounds, so the result still dominates
    correctly for thinning, though no longer tightly.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: RateFunction, den: RateFunction):
        self.num, self.den = num, den

    def evaluate(self, t):
        return self.num.evaluate(t) / self.den.evaluate(t)

    def upper_bound(self, t0, t1):
        return self.num.upper_bound(t0, t1) / self.den.lower_bound(t0, t1)

    def lower_bound(self, t0, t1):
        return self.num.lower_bound(t0, t1) / self.den.upper_bound(t0, t1)

    def to_config(self):
        return {"kind": "quotient", "num": self.num.to_config(), "den": self.den.to_config()}


def ratio(numerator: RateFunction, denominator: RateFunction, t):
    """numerator(t) / denominator(t)."""
    return numerator.evaluate(t) / denominator.evaluate(t)
