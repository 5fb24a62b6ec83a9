"""Event-driven simulation of hybrid S(E)IR epidemics on a finite graph.

The process is a continuous-time Markov chain: a susceptible vertex with j
infectious neighbors becomes exposed at rate alpha*beta(t)*j and infectious at
rate (1-alpha)*beta(t)*j, an exposed vertex becomes infectious at rate
lambda(t), and an infectious vertex recovers at rate rho(t). alpha=0 gives SIR,
alpha=1 gives SEIR.

Time-varying rates are sampled exactly by thinning: each active vertex draws
its next candidate event from a homogeneous proposal at the rate's exact upper
bound over a lookahead window, accepting with probability rate/bound. A
susceptible vertex's hazard changes whenever a neighbor enters or leaves state
I, so its candidate is invalidated (by a version counter) and redrawn from the
change time; memorylessness makes the redraw exact. Candidates are processed in
(time, vertex) lexicographic order, which resolves floating-point ties
deterministically.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from .csvio import write_csv
from .errors import ConfigError, NumericalError
from .graphs import SparseGraph
from .grids import uniform_ticks
from .rates import Constant, RateFunction

__all__ = ["EpidemicParams", "Trajectory", "simulate"]

S, E, I, R = 0, 1, 2, 3
STATE_NAMES = ("S", "E", "I", "R")
STATE_INDEX = {name: idx for idx, name in enumerate(STATE_NAMES)}


@dataclass(frozen=True)
class EpidemicParams:
    """Rates and initial law of the hybrid S(E)IR process.

    ``alpha`` interpolates between SIR (0) and SEIR (1). Initial states are
    i.i.d.: susceptible with probability s0, exposed with e0, infectious with
    i0. ``lam`` (the E->I rate) may be omitted only when it can never fire,
    i.e. alpha = 0 and e0 = 0.
    """

    alpha: float
    beta: RateFunction
    rho: RateFunction
    s0: float
    e0: float = 0.0
    i0: float = field(default=0.0)
    lam: RateFunction | None = None

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError("alpha must lie in [0, 1]")
        if not 0.0 < self.s0 < 1.0:
            raise ConfigError("s0 must lie in (0, 1)")
        if self.e0 < 0 or self.i0 < 0:
            raise ConfigError("e0 and i0 must be nonnegative")
        if abs(self.s0 + self.e0 + self.i0 - 1.0) > 1e-12:
            raise ConfigError("initial fractions must satisfy s0 + e0 + i0 = 1")
        if self.alpha == 0.0 and self.e0 != 0.0:
            raise ConfigError("alpha = 0 requires e0 = 0")
        if self.lam is None and (self.alpha > 0.0 or self.e0 > 0.0):
            raise ConfigError("lam is required when exposure can occur")

    @classmethod
    def from_config(cls, cfg: dict) -> "EpidemicParams":
        try:
            lam_cfg = cfg.get("lambda")
            return cls(
                alpha=cfg.get("alpha", 0.0),
                beta=RateFunction.from_config(cfg["beta"]),
                rho=RateFunction.from_config(cfg["rho"]),
                lam=RateFunction.from_config(lam_cfg) if lam_cfg is not None else None,
                s0=cfg["s0"],
                e0=cfg.get("e0", 0.0),
                i0=cfg.get("i0", 0.0),
            )
        except KeyError as exc:
            raise ConfigError(f"epidemic params missing field {exc}") from exc

    def to_config(self) -> dict:
        cfg = {
            "alpha": self.alpha,
            "beta": self.beta.to_config(),
            "rho": self.rho.to_config(),
            "s0": self.s0,
            "e0": self.e0,
            "i0": self.i0,
        }
        if self.lam is not None:
            cfg["lambda"] = self.lam.to_config()
        return cfg


class Trajectory:
    """One realized epidemic: the event log plus gridded state counts.

    ``events`` is chronological (time, vertex, from_state, to_state) with
    single-letter state names. ``counts`` holds integer (S, E, I, R) counts at
    each grid time (so the fractions are exact multiples of 1/n by
    construction); after extinction the counts stay frozen through t_max.
    """

    def __init__(self, n, grid, counts, events, extinction_time, t_max, initial_counts):
        self.n = n
        self.grid = grid
        self.counts = counts
        self.events = events
        self.extinction_time = extinction_time
        self.t_max = t_max
        self.initial_counts = initial_counts

    @property
    def fractions(self) -> np.ndarray:
        """(len(grid), 4) array of s, e, i, r fractions."""
        return self.counts / self.n

    def fractions_at(self, t: float) -> tuple[float, float, float, float]:
        """Exact fractions at time t, by replaying the event log (not by grid
        interpolation). Events stamped exactly t are included."""
        if not 0.0 <= t <= self.t_max:
            raise ValueError(f"t = {t} outside the trajectory horizon [0, {self.t_max}]")
        counts = list(self.initial_counts)
        for time, _vertex, frm, to in self.events:
            if time > t:
                break
            counts[STATE_INDEX[frm]] -= 1
            counts[STATE_INDEX[to]] += 1
        return tuple(c / self.n for c in counts)

    def final_outbreak(self) -> float:
        """Fraction of vertices that ever left S: 1 minus the susceptible
        fraction at extinction. Requires the run to have gone extinct."""
        if self.extinction_time is None:
            raise NumericalError(
                "trajectory did not reach extinction before t_max; rerun with a larger t_max"
            )
        return 1.0 - self.counts[-1, S] / self.n

    def to_csv(self, path) -> None:
        rows = (
            [t, *row]
            for t, row in zip(self.grid, self.fractions)
        )
        write_csv(path, ["t", "s", "e", "i", "r"], rows)

    def events_to_csv(self, path) -> None:
        write_csv(path, ["time", "vertex", "from", "to"], self.events)


def _draw_candidate(rng, rate_fn, mult, t, t_max, lookahead):
    """Next firing time of an inhomogeneous Poisson process with intensity
    mult*rate_fn, started at t, or None if it lands beyond t_max.

    Constant rates shortcut to a single exponential; otherwise proposals come
    from the exact upper bound over [t, t+lookahead) windows and are thinned.
    """
    if isinstance(rate_fn, Constant):
        t = t + rng.exponential(1.0 / (rate_fn.value * mult))
        return t if t < t_max else None
    while t < t_max:
        w_end = min(t + lookahead, t_max)
        bound = rate_fn.upper_bound(t, w_end) * mult
        while True:
            t += rng.exponential(1.0 / bound)
            if t >= w_end:
                t = w_end
                break
            if rng.random() * bound <= rate_fn.evaluate(t) * mult:
                return t
    return None


def simulate(
    g: SparseGraph,
    p: EpidemicParams,
    t_max: float,
    grid_step: float = 0.05,
    seed=None,
    lookahead: float = 1.0,
) -> Trajectory:
    """Run one epidemic on ``g`` up to min(t_max, extinction).

    Initial states are i.i.d. from (s0, e0, i0). The run is a deterministic
    function of the seed (int, SeedSequence, or Generator state).
    """
    if t_max <= 0:
        raise ConfigError("t_max must be > 0")
    if grid_step <= 0:
        raise ConfigError("grid_step must be > 0")
    rng = np.random.default_rng(seed)
    n = g.n

    u = rng.random(n)
    states = np.where(u < p.s0, S, np.where(u < p.s0 + p.e0, E, I)).astype(np.int8)
    counts = [int((states == k).sum()) for k in (S, E, I, R)]
    initial_counts = tuple(counts)

    n_inf = [0] * n
    for v in range(n):
        if states[v] == I:
            for w in g.adjacency[v]:
                n_inf[w] += 1

    version = [0] * n
    heap: list[tuple[float, int, int]] = []

    def arm(v: int, now: float) -> None:
        """Redraw vertex v's candidate event from time ``now``."""
        version[v] += 1
        st = states[v]
        if st == S:
            if n_inf[v] == 0:
                return
            cand = _draw_candidate(rng, p.beta, n_inf[v], now, t_max, lookahead)
        elif st == E:
            cand = _draw_candidate(rng, p.lam, 1, now, t_max, lookahead)
        elif st == I:
            cand = _draw_candidate(rng, p.rho, 1, now, t_max, lookahead)
        else:
            return
        if cand is not None:
            heapq.heappush(heap, (cand, v, version[v]))

    for v in range(n):
        arm(v, 0.0)

    events: list[tuple[float, int, str, str]] = []
    ticks = uniform_ticks(t_max, grid_step)
    grid_counts = np.empty((ticks.size, 4), dtype=np.int64)
    tick_ptr = 0
    extinction_time = 0.0 if counts[E] == 0 and counts[I] == 0 else None

    while heap:
        t_ev, v, ver = heapq.heappop(heap)
        if ver != version[v]:
            continue
        frm = states[v]
        if frm == S:
            to = E if rng.random() < p.alpha else I
        elif frm == E:
            to = I
        else:
            to = R

        while tick_ptr < ticks.size and ticks[tick_ptr] < t_ev:
            grid_counts[tick_ptr] = counts
            tick_ptr += 1

        events.append((t_ev, v, STATE_NAMES[frm], STATE_NAMES[to]))
        counts[frm] -= 1
        counts[to] += 1
        states[v] = to
        arm(v, t_ev)

        if to == I or frm == I:
            delta = 1 if to == I else -1
            for w in g.adjacency[v]:
                n_inf[w] += delta
                if states[w] == S:
                    arm(w, t_ev)

        if counts[E] == 0 and counts[I] == 0:
            extinction_time = t_ev
            break

    grid_counts[tick_ptr:] = counts
    return Trajectory(
        n=n,
        grid=ticks,
        counts=grid_counts,
        events=events,
        extinction_time=extinction_time,
        t_max=float(t_max),
        initial_counts=initial_counts,
    )
