"""Degree-distribution algebra on nonnegative integers.

A :class:`DegreeDistribution` is a finite probability vector indexed by degree.
Parametric laws (Poisson, point mass) are truncated to a finite support with
controlled tail mass and renormalized, so every downstream quantity — moments,
Laplace transforms, size-biasing, exponential tilts — is a finite sum over the
stored support. Closed-form identities for the parametric families are used as
test oracles only, never inside the implementation.
"""

from __future__ import annotations

import numpy as np
from scipy import stats

from .errors import ConfigError

__all__ = ["DegreeDistribution"]

# Sum-to-one slack accepted from user-supplied pmf vectors before exact
# renormalization; anything worse is treated as a config mistake.
_PMF_SUM_SLACK = 1e-8


class DegreeDistribution:
    """Probability law on {0, 1, ..., K} stored as an explicit pmf vector.

    Instances are immutable and safe to share across workers. Use the
    classmethod constructors; the raw ``__init__`` is considered internal.
    """

    __slots__ = ("_probs", "_kind", "_params")

    def __init__(self, probs: np.ndarray, kind: str = "pmf", params: dict | None = None):
        probs = np.asarray(probs, dtype=np.float64)
        if probs.ndim != 1 or probs.size == 0:
            raise ConfigError("pmf must be a non-empty 1-D vector")
        if np.any(probs < 0) or not np.all(np.isfinite(probs)):
            raise ConfigError("pmf entries must be finite and nonnegative")
        total = float(probs.sum())
        if abs(total - 1.0) > _PMF_SUM_SLACK:
            raise ConfigError(f"pmf sums to {total!r}, expected 1 within {_PMF_SUM_SLACK}")
        probs = probs / total
        probs.setflags(write=False)
        self._probs = probs
        self._kind = kind
        self._params = dict(params or {})

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def from_pmf(cls, probs) -> "DegreeDistribution":
        """Explicit finite pmf, index k -> probability of degree k."""
        return cls(np.asarray(probs, dtype=np.float64), kind="pmf")

    @classmethod
    def point_mass(cls, k: int) -> "DegreeDistribution":
        """All mass on a single degree k >= 0."""
        k = int(k)
        if k < 0:
            raise ConfigError("point mass degree must be >= 0")
        probs = np.zeros(k + 1)
        probs[k] = 1.0
        return cls(probs, kind="regular", params={"k": k})

    @classmethod
    def poisson(cls, mean: float, truncation_tail_mass: float = 1e-12) -> "DegreeDistribution":
        """Poisson(mean) truncated where the cumulative tail mass drops below
        ``truncation_tail_mass``, then renormalized."""
        mean = float(mean)
        if mean <= 0:
            raise ConfigError("Poisson mean must be > 0")
        if not (0 < truncation_tail_mass < 1):
            raise ConfigError("truncation_tail_mass must lie in (0, 1)")
        k_max = int(stats.poisson.isf(truncation_tail_mass, mean))
        while stats.poisson.sf(k_max, mean) >= truncation_tail_mass:
            k_max += 1
        probs = stats.poisson.pmf(np.arange(k_max + 1), mean)
        return cls(probs, kind="poisson", params={"mean": mean, "tail_mass": truncation_tail_mass})

    @classmethod
    def from_config(cls, cfg: dict) -> "DegreeDistribution":
        """Build from the JSON config representation."""
        if not isinstance(cfg, dict) or "kind" not in cfg:
            raise ConfigError("degree config must be an object with a 'kind' field")
        kind = cfg["kind"]
        try:
            if kind == "poisson":
                return cls.poisson(cfg["mean"], cfg.get("truncation_tail_mass", 1e-12))
            if kind == "regular":
                return cls.point_mass(cfg["k"])
            if kind == "pmf":
                return cls.from_pmf(cfg["probs"])
        except KeyError as exc:
            raise ConfigError(f"degree config missing field {exc}") from exc
        raise ConfigError(f"unknown degree kind {kind!r}")

    def to_config(self) -> dict:
        if self._kind == "poisson":
            return {
                "kind": "poisson",
                "mean": self._params["mean"],
                "truncation_tail_mass": self._params["tail_mass"],
            }
        if self._kind == "regular":
            return {"kind": "regular", "k": self._params["k"]}
        return {"kind": "pmf", "probs": self._probs.tolist()}

    # ------------------------------------------------------------------
    # basic accessors

    @property
    def probs(self) -> np.ndarray:
        """The truncated, renormalized pmf vector (read-only)."""
        return self._probs

    @property
    def kind(self) -> str:
        return self._kind

    @property
    def max_degree(self) -> int:
        return self._probs.size - 1

    @property
    def min_support(self) -> int:
        """Smallest degree carrying positive mass."""
        return int(np.flatnonzero(self._probs > 0)[0])

    def pmf(self, k: int) -> float:
        """Probability of degree k; 0 beyond the truncated support."""
        if k < 0 or k > self.max_degree:
            return 0.0
        return float(self._probs[k])

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"DegreeDistribution(kind={self._kind!r}, support=0..{self.max_degree})"

    # ------------------------------------------------------------------
    # transforms

    def moment(self, p: int) -> float:
        """p-th raw moment, p in {1, 2, 3}."""
        if p not in (1, 2, 3):
            raise ValueError("moment order p must be 1, 2 or 3")
        k = np.arange(self._probs.size, dtype=np.float64)
        return float(np.sum(k**p * self._probs))

    @property
    def mean(self) -> float:
        return self.moment(1)

    def laplace(self, x):
        """Laplace transform M(x) = sum_k pmf(k) e^{kx}, defined for x <= 0.

        Accepts a scalar or an ndarray; positive arguments are rejected since
        the transform may diverge there for unbounded laws.
        """
        x = np.asarray(x, dtype=np.float64)
        if np.any(x > 0):
            raise ValueError("laplace transform is defined for x <= 0 only")
        k = np.arange(self._probs.size, dtype=np.float64)
        out = np.exp(np.multiply.outer(x, k)) @ self._probs
        return out if out.ndim else float(out)

    def laplace_derivative(self, x):
        """Derivative of the transform: sum_k k pmf(k) e^{kx}, for x <= 0."""
        x = np.asarray(x, dtype=np.float64)
        if np.any(x > 0):
            raise ValueError("laplace transform is defined for x <= 0 only")
        k = np.arange(self._probs.size, dtype=np.float64)
        out = np.exp(np.multiply.outer(x, k)) @ (k * self._probs)
        return out if out.ndim else float(out)

    def size_biased(self) -> "DegreeDistribution":
        """The size-biased residual law: probability proportional to
        (k+1) pmf(k+1) at k. Rejects mean-zero laws."""
        mean = self.moment(1)
        if mean <= 0:
            raise ValueError("size-biasing requires a positive mean degree")
        k_plus_1 = np.arange(1, self._probs.size, dtype=np.float64)
        hat = k_plus_1 * self._probs[1:] / mean
        if hat.size == 0:  # pragma: no cover - excluded by the mean check
            raise ValueError("size-biasing requires support beyond degree 0")
        return DegreeDistribution(hat, kind="pmf")

    def tilted_mean(self, z):
        """Mean of the exponentially tilted law pmf(k) e^{-kz} / M(-z), z >= 0.

        This is the ratio laplace_derivative(-z) / laplace(-z), computed with
        the minimal-support exponent factored out so that large z does not
        underflow both sums to zero. Equals the mean at z = 0 and tends to the
        minimum of the support as z grows.
        """
        z = np.asarray(z, dtype=np.float64)
        if np.any(z < 0):
            raise ValueError("tilt parameter z must be >= 0")
        k0 = self.min_support
        k = np.arange(k0, self._probs.size, dtype=np.float64)
        p = self._probs[k0:]
        w = np.exp(np.multiply.outer(-z, k - k0)) * p
        out = (w @ k) / w.sum(axis=-1)
        return out if out.ndim else float(out)
